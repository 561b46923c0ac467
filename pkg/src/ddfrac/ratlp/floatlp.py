"""HiGHS-backed floating-point relaxations plus exact a-posteriori bounds.

Nothing here is trusted on its own: HiGHS supplies starting bases and dual
vectors, and :meth:`SafeBounder.bound` turns any dual vector into a bound
that is valid by weak duality, evaluated in exact rational arithmetic.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from ddfrac.ratlp.model import LpModel, Relation

try:
    import highspy

    HIGHS_AVAILABLE = True
except ImportError:  # pragma: no cover
    highspy = None
    HIGHS_AVAILABLE = False

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

# dual vectors are snapped to this dyadic grid before exact evaluation
DUAL_SCALE = 1 << 40


def _fl(x, default):
    return default if x is None else float(x)


class HighsRelaxation:
    """A persistent HiGHS model whose column bounds can be changed and re-solved."""

    def __init__(self, model: LpModel, rows: Sequence[int] | None = None):
        if not HIGHS_AVAILABLE:
            raise RuntimeError("highspy is not installed")
        self.model = model
        self.rows = list(range(model.num_rows)) if rows is None else list(rows)
        inf = highspy.kHighsInf
        nv = model.num_vars
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("presolve", "off")
        h.setOptionValue("random_seed", 0)
        lp = highspy.HighsLp()
        lp.num_col_ = nv
        lp.num_row_ = len(self.rows)
        lp.col_cost_ = np.array([float(c) for c in model.objective], dtype=float)
        lp.col_lower_ = np.array([_fl(v, -inf) for v in model.lower], dtype=float)
        lp.col_upper_ = np.array([_fl(v, inf) for v in model.upper], dtype=float)
        rlo, rup = [], []
        starts, index, value = [0], [], []
        cols = [[] for _ in range(nv)]
        for k, i in enumerate(self.rows):
            r = model.rows[i]
            b = float(r.rhs)
            rlo.append(b if r.rel in (Relation.GE, Relation.EQ) else -inf)
            rup.append(b if r.rel in (Relation.LE, Relation.EQ) else inf)
            for j, c in r.coefs.items():
                cols[j].append((k, float(c)))
        for col in cols:
            for k, c in sorted(col):
                index.append(k)
                value.append(c)
            starts.append(len(index))
        lp.row_lower_ = np.array(rlo, dtype=float)
        lp.row_upper_ = np.array(rup, dtype=float)
        lp.a_matrix_.format_ = highspy.MatrixFormat.kColwise
        lp.a_matrix_.start_ = np.array(starts, dtype=np.int32)
        lp.a_matrix_.index_ = np.array(index, dtype=np.int32)
        lp.a_matrix_.value_ = np.array(value, dtype=float)
        h.passModel(lp)
        self.h = h
        self._inf = inf

    def set_bounds(self, lower: Sequence, upper: Sequence) -> None:
        inf = self._inf
        lo = np.array([_fl(v, -inf) for v in lower], dtype=float)
        up = np.array([_fl(v, inf) for v in upper], dtype=float)
        idx = np.arange(len(lo), dtype=np.int32)
        self.h.changeColsBounds(len(lo), idx, lo, up)

    def solve(self):
        """Returns ``(status, x, row_duals)``; status in optimal/infeasible/unbounded/unknown."""
        h = self.h
        h.run()
        st = h.getModelStatus()
        MS = highspy.HighsModelStatus
        if st == MS.kOptimal:
            sol = h.getSolution()
            return "optimal", np.asarray(sol.col_value), np.asarray(sol.row_dual)
        if st == MS.kInfeasible:
            return "infeasible", None, None
        if st in (MS.kUnbounded, MS.kUnboundedOrInfeasible):
            return "unbounded", None, None
        return "unknown", None, None

    def dual_ray(self):
        out = self.h.getDualRay()
        has, ray = out[-2], out[-1]
        if not has:
            return None
        return np.asarray(ray, dtype=float)

    def basis(self):
        """Current basis as (basic, at_upper) in exact-simplex indexing."""
        b = self.h.getBasis()
        if not b.valid:
            return None
        BS = highspy.HighsBasisStatus
        nv = self.model.num_vars
        basic, at_upper = [], []
        for j, s in enumerate(b.col_status):
            if s == BS.kBasic:
                basic.append(j)
            elif s == BS.kUpper:
                at_upper.append(j)
        for k, s in enumerate(b.row_status):
            if s == BS.kBasic:
                basic.append(nv + k)
            elif s == BS.kUpper:
                at_upper.append(nv + k)
        return basic, at_upper


def highs_basis(model: LpModel, lower=None, upper=None, rows: Sequence[int] | None = None):
    """Optimal basis guess from HiGHS, or None when unavailable/not optimal."""
    if not HIGHS_AVAILABLE:
        return None
    relax = HighsRelaxation(model, rows)
    if lower is not None or upper is not None:
        relax.set_bounds(model.lower if lower is None else lower, model.upper if upper is None else upper)
    status, _, _ = relax.solve()
    if status != "optimal":
        return None
    return relax.basis()


def _snap(v: float):
    if not math.isfinite(v):
        return None
    return Q(int(round(v * DUAL_SCALE)), DUAL_SCALE)


class SafeBounder:
    """Exact weak-duality bounds for ``model`` from arbitrary row multipliers."""

    def __init__(self, model: LpModel, rows: Sequence[int] | None = None):
        self.model = model
        self.rows = list(range(model.num_rows)) if rows is None else list(rows)
        self.rel = [model.rows[i].rel for i in self.rows]
        self.rhs = [Q(model.rows[i].rhs.numerator, model.rows[i].rhs.denominator) for i in self.rows]
        cols: list[list[tuple[int, object]]] = [[] for _ in range(model.num_vars)]
        for k, i in enumerate(self.rows):
            for j, c in model.rows[i].coefs.items():
                cols[j].append((k, Q(c.numerator, c.denominator)))
        self.cols = cols
        self.cost = [Q(c.numerator, c.denominator) for c in model.objective]

    def clip(self, y: Sequence[float]) -> list:
        out = []
        for k, v in enumerate(y):
            q = _snap(float(v))
            if q is None:
                q = Q(0)
            rel = self.rel[k]
            if rel is Relation.GE and q < 0:
                q = Q(0)
            elif rel is Relation.LE and q > 0:
                q = Q(0)
            out.append(q)
        return out

    def bound(self, y: Sequence, lower: Sequence, upper: Sequence, use_cost: bool = True):
        """``b'y + sum_j min_{l_j <= x_j <= u_j} (c - A'y)_j x_j`` exactly; None means -inf.

        ``y`` must already respect the row sign conventions (see :meth:`clip`).
        """
        total = Q(0)
        for k, yk in enumerate(y):
            if yk:
                total += yk * self.rhs[k]
        for j, col in enumerate(self.cols):
            d = self.cost[j] if use_cost else Q(0)
            for k, a in col:
                yk = y[k]
                if yk:
                    d -= yk * a
            if d > 0:
                lo = lower[j]
                if lo is None:
                    return None
                total += d * Q(lo.numerator, lo.denominator)
            elif d < 0:
                up = upper[j]
                if up is None:
                    return None
                total += d * Q(up.numerator, up.denominator)
        return Fraction(int(total.numerator), int(total.denominator))

    def proves_infeasible(self, ray: Sequence[float], lower, upper) -> bool:
        """True when the (sign-clipped) ray is an exact Farkas certificate."""
        for sgn in (1.0, -1.0):
            y = self.clip([sgn * v for v in ray])
            b = self.bound(y, lower, upper, use_cost=False)
            if b is not None and b > 0:
                return True
        return False
