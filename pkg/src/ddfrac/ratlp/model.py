from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class MalformedModel(ValueError):
    pass


class Relation(str, enum.Enum):
    GE = ">="
    LE = "<="
    EQ = "="


class LpStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    TIMEOUT = "timeout"


def as_rational(x) -> Fraction:
    """Canonical Fraction from int/Fraction/str/gmpy2 values; floats are taken exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str, float)):
        try:
            return Fraction(x)
        except ZeroDivisionError:
            raise MalformedModel("zero denominator") from None
        except (ValueError, OverflowError) as e:
            raise MalformedModel(f"not a rational: {x!r}") from e
    num = getattr(x, "numerator", None)
    den = getattr(x, "denominator", None)
    if num is not None and den is not None:
        if int(den) == 0:
            raise MalformedModel("zero denominator")
        return Fraction(int(num), int(den))
    raise MalformedModel(f"not a rational: {x!r}")


@dataclass
class Row:
    coefs: dict[int, Fraction]
    rel: Relation
    rhs: Fraction
    name: str = ""


@dataclass
class LpModel:
    """Minimisation LP with sparse rows and per-variable bounds.

    ``upper[j] is None`` means +inf; ``lower[j] is None`` means -inf.
    """

    lower: list[Fraction | None] = field(default_factory=list)
    upper: list[Fraction | None] = field(default_factory=list)
    objective: list[Fraction] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list)
    var_names: list[str] = field(default_factory=list)
    name: str = ""

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def add_var(self, lower=0, upper=None, obj=0, name: str = "") -> int:
        self.lower.append(None if lower is None else as_rational(lower))
        self.upper.append(None if upper is None else as_rational(upper))
        self.objective.append(as_rational(obj))
        self.var_names.append(name or f"x{len(self.objective) - 1}")
        return len(self.objective) - 1

    def add_row(self, coefs: Mapping[int, object] | Iterable[tuple[int, object]], rel, rhs, name: str = "") -> int:
        items = coefs.items() if isinstance(coefs, Mapping) else coefs
        clean: dict[int, Fraction] = {}
        for j, c in items:
            c = as_rational(c)
            clean[j] = clean.get(j, Fraction(0)) + c
        clean = {j: c for j, c in clean.items() if c != 0}
        self.rows.append(Row(clean, Relation(rel), as_rational(rhs), name or f"r{len(self.rows)}"))
        return len(self.rows) - 1

    def check(self) -> None:
        nv = self.num_vars
        if not (len(self.lower) == len(self.upper) == len(self.var_names) == nv):
            raise MalformedModel("per-variable arrays disagree in length")
        for j in range(nv):
            lo, up = self.lower[j], self.upper[j]
            for v in (lo, up, self.objective[j]):
                if v is not None and not isinstance(v, Fraction):
                    raise MalformedModel(f"variable {j}: non-rational data {v!r}")
            if lo is not None and up is not None and lo > up:
                raise MalformedModel(f"variable {j}: lower {lo} > upper {up}")
        for i, r in enumerate(self.rows):
            if not isinstance(r.rhs, Fraction):
                raise MalformedModel(f"row {i}: non-rational rhs")
            for j, c in r.coefs.items():
                if not (0 <= j < nv):
                    raise MalformedModel(f"row {i}: column index {j} out of range")
                if not isinstance(c, Fraction):
                    raise MalformedModel(f"row {i}: non-rational coefficient")

    def activity(self, values: Sequence) -> list[Fraction]:
        return [sum((c * values[j] for j, c in r.coefs.items()), Fraction(0)) for r in self.rows]

    def objective_value(self, values: Sequence) -> Fraction:
        return sum((c * values[j] for j, c in enumerate(self.objective) if c), Fraction(0))

    def violations(self, values: Sequence) -> list[str]:
        """Exact feasibility check; empty list means feasible."""
        out = []
        for j, x in enumerate(values):
            lo, up = self.lower[j], self.upper[j]
            if lo is not None and x < lo:
                out.append(f"{self.var_names[j]}={x} below {lo}")
            if up is not None and x > up:
                out.append(f"{self.var_names[j]}={x} above {up}")
        for r, act in zip(self.rows, self.activity(values)):
            ok = (act >= r.rhs if r.rel is Relation.GE else
                  act <= r.rhs if r.rel is Relation.LE else act == r.rhs)
            if not ok:
                out.append(f"{r.name}: {act} {r.rel.value} {r.rhs} violated")
        return out

    def columns(self) -> list[list[tuple[int, Fraction]]]:
        cols: list[list[tuple[int, Fraction]]] = [[] for _ in range(self.num_vars)]
        for i, r in enumerate(self.rows):
            for j, c in r.coefs.items():
                cols[j].append((i, c))
        return cols

    def to_lp_text(self) -> str:
        """CPLEX-LP-like text with exact ``p/q`` coefficients."""

        def term(c: Fraction, name: str, first: bool) -> str:
            sign = "-" if c < 0 else ("" if first else "+")
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag} "
            return f"{sign} {coef}{name}".strip() if first else f" {sign} {coef}{name}"

        def expr(pairs) -> str:
            s = "".join(term(c, self.var_names[j], k == 0) for k, (j, c) in enumerate(pairs))
            return s or "0"

        lines = [f"\\ {self.name}" if self.name else "\\ model", "Minimize",
                 " obj: " + expr([(j, c) for j, c in enumerate(self.objective) if c]), "Subject To"]
        for r in self.rows:
            lines.append(f" {r.name}: {expr(sorted(r.coefs.items()))} {r.rel.value} {r.rhs}")
        lines.append("Bounds")
        for j in range(self.num_vars):
            lo, up = self.lower[j], self.upper[j]
            lo_s = "-inf" if lo is None else str(lo)
            up_s = "+inf" if up is None else str(up)
            lines.append(f" {lo_s} <= {self.var_names[j]} <= {up_s}")
        lines.append("End")
        return "\n".join(lines) + "\n"


@dataclass
class LpSolution:
    status: LpStatus
    objective: Fraction | None = None
    values: list[Fraction] = field(default_factory=list)
    basis: frozenset[int] = frozenset()
    duals: list[Fraction] = field(default_factory=list)
    reduced_costs: list[Fraction] = field(default_factory=list)
    iterations: int = 0
    # ilp_solve extras
    dual_bound: Fraction | None = None
    nodes: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL
