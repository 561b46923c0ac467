"""Exact bounded-variable revised primal simplex.

Every row ``i`` gets an activity variable ``r_i`` with ``A x - r = 0`` and the
row's relation turned into bounds on ``r_i``. Phase 1 adds one artificial
per row whose starting activity violates those bounds. The basis inverse is
kept in product form (eta file) over a diagonal starting basis and rebuilt
every ``refactor_every`` pivots. Pricing is Dantzig's rule for the first
``dantzig_pivots`` pivots, Bland's rule afterwards.
"""
from __future__ import annotations

import logging
import time
from fractions import Fraction
from typing import Sequence

from ddfrac.ratlp.model import LpModel, LpSolution, LpStatus, MalformedModel, Relation

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

logger = logging.getLogger(__name__)

ZERO = Q(0)
ONE = Q(1)

_AT_LO, _AT_UP, _FREE, _BASIC = 0, 1, 2, 3


class IterationLimit(RuntimeError):
    pass


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _q(x):
    if x is None:
        return None
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    return Q(x)


class _Simplex:
    def __init__(self, model: LpModel, lower=None, upper=None, dantzig_pivots=None,
                 refactor_every=64, max_iterations=None, deadline=None):
        model.check()
        self.model = model
        nv = model.num_vars
        lower = model.lower if lower is None else lower
        upper = model.upper if upper is None else upper
        if len(lower) != nv or len(upper) != nv:
            raise MalformedModel("bound override length mismatch")

        # presolve: drop empty rows (after checking them)
        self.row_map: list[int] = []
        self.trivially_infeasible = False
        for i, r in enumerate(model.rows):
            if r.coefs:
                self.row_map.append(i)
            else:
                z = Fraction(0)
                ok = (z >= r.rhs if r.rel is Relation.GE else
                      z <= r.rhs if r.rel is Relation.LE else z == r.rhs)
                if not ok:
                    self.trivially_infeasible = True
        m = len(self.row_map)
        self.m = m
        self.nv = nv

        cols: list[list[tuple[int, object]]] = [[] for _ in range(nv)]
        for pos, i in enumerate(self.row_map):
            for j, c in model.rows[i].coefs.items():
                cols[j].append((pos, _q(c)))
        self.lo = [_q(v) for v in lower]
        self.up = [_q(v) for v in upper]
        self.cost2 = [_q(c) for c in model.objective]
        for pos, i in enumerate(self.row_map):
            cols.append([(pos, -ONE)])
            r = model.rows[i]
            rhs = _q(r.rhs)
            self.lo.append(rhs if r.rel in (Relation.GE, Relation.EQ) else None)
            self.up.append(rhs if r.rel in (Relation.LE, Relation.EQ) else None)
            self.cost2.append(ZERO)
        for j in range(nv):
            if self.lo[j] is not None and self.up[j] is not None and self.lo[j] > self.up[j]:
                self.trivially_infeasible = True
        self.cols = cols
        self.nart = 0
        self.dantzig_pivots = (10 * (m + nv) + 100) if dantzig_pivots is None else dantzig_pivots
        self.refactor_every = refactor_every
        self.max_iterations = max_iterations
        self.deadline = deadline
        self.iterations = 0
        self.pivots = 0

    # ------------------------------------------------------------------ setup
    def _nonbasic_start(self, j):
        lo, up = self.lo[j], self.up[j]
        if lo is not None:
            return lo, _AT_LO
        if up is not None:
            return up, _AT_UP
        return ZERO, _FREE

    def cold_start(self):
        nv, m = self.nv, self.m
        nall = nv + m
        self.x = [ZERO] * nall
        self.stat = [_AT_LO] * nall
        for j in range(nv):
            self.x[j], self.stat[j] = self._nonbasic_start(j)
        act = [ZERO] * m
        for j in range(nv):
            xj = self.x[j]
            if xj:
                for i, a in self.cols[j]:
                    act[i] += a * xj
        self.head = [0] * m
        self.diag = [ZERO] * m
        self.etas = []
        for i in range(m):
            rv = nv + i
            lo, up = self.lo[rv], self.up[rv]
            v = act[i]
            if (lo is None or v >= lo) and (up is None or v <= up):
                self.head[i] = rv
                self.diag[i] = -ONE
                self.x[rv] = v
                self.stat[rv] = _BASIC
            else:
                beta = lo if (lo is not None and v < lo) else up
                sigma = ONE if beta > v else -ONE
                self.x[rv] = beta
                self.stat[rv] = _AT_LO if beta == lo else _AT_UP
                a = len(self.cols)
                self.cols.append([(i, sigma)])
                self.lo.append(ZERO)
                self.up.append(None)
                self.cost2.append(ZERO)
                self.x.append(abs(beta - v))
                self.stat.append(_BASIC)
                self.head[i] = a
                self.diag[i] = sigma
                self.nart += 1
        self.pos = [-1] * len(self.cols)
        for i, j in enumerate(self.head):
            self.pos[j] = i

    def warm_start(self, basic: Sequence[int], at_upper: Sequence[int] = ()) -> bool:
        """Install a basis (indices over structurals then row variables).

        Returns False when the basis is singular or not primal feasible.
        """
        nv, m = self.nv, self.m
        nall = nv + m
        basic = list(dict.fromkeys(basic))
        if len(basic) != m:
            return False
        self.x = [ZERO] * nall
        self.stat = [_AT_LO] * nall
        up_set = set(at_upper)
        for j in range(nall):
            lo, up = self.lo[j], self.up[j]
            if j in up_set and up is not None:
                self.x[j], self.stat[j] = up, _AT_UP
            else:
                self.x[j], self.stat[j] = self._nonbasic_start(j)
        for j in basic:
            self.stat[j] = _BASIC
        self.pos = [-1] * nall
        if not self._factor(basic):
            return False
        self._recompute_basics()
        for j in self.head:
            xj = self.x[j]
            if (self.lo[j] is not None and xj < self.lo[j]) or (self.up[j] is not None and xj > self.up[j]):
                return False
        return True

    # ------------------------------------------------------- linear algebra
    def _factor(self, basic: Sequence[int]) -> bool:
        """Rebuild the eta file for the given basic set; False if singular."""
        nv, m = self.nv, self.m
        self.head = [nv + i for i in range(m)]
        self.diag = [-ONE] * m
        self.etas = []
        for j in range(len(self.pos)):
            self.pos[j] = -1
        placed = [False] * m
        rowvars = [j for j in basic if nv <= j < nv + m]
        for j in rowvars:
            placed[j - nv] = True
            self.pos[j] = j - nv
        rest = [j for j in basic if not (nv <= j < nv + m)]
        rest.sort(key=lambda j: len(self.cols[j]))
        for j in rest:
            alpha = self._ftran_col(j)
            best = -1
            for i, a in alpha.items():
                if not placed[i] and a:
                    # lowest free row, deterministic
                    if best < 0 or i < best:
                        best = i
            if best < 0:
                return False
            self._push_eta(best, alpha)
            placed[best] = True
            self.head[best] = j
            self.pos[j] = best
        self.pivots = 0
        return True

    def _ftran_col(self, j) -> dict:
        v = {}
        for i, a in self.cols[j]:
            v[i] = a
        return self._ftran(v)

    def _ftran(self, v: dict) -> dict:
        diag = self.diag
        for i in list(v):
            v[i] = v[i] / diag[i]
        for p, eta in self.etas:
            vp = v.get(p)
            if not vp:
                continue
            for i, e in eta.items():
                if i == p:
                    v[p] = vp * e
                else:
                    nv_ = v.get(i, ZERO) + vp * e
                    if nv_:
                        v[i] = nv_
                    else:
                        v.pop(i, None)
        return {i: a for i, a in v.items() if a}

    def _btran(self, c: list) -> list:
        w = list(c)
        for p, eta in reversed(self.etas):
            s = ZERO
            for i, e in eta.items():
                wi = w[i]
                if wi:
                    s += wi * e
            w[p] = s
        diag = self.diag
        return [w[i] / diag[i] if w[i] else ZERO for i in range(self.m)]

    def _push_eta(self, p, alpha: dict):
        ap = alpha[p]
        eta = {i: -a / ap for i, a in alpha.items() if i != p and a}
        eta[p] = ONE / ap
        self.etas.append((p, eta))
        self.pivots += 1

    def _recompute_basics(self):
        rhs: dict[int, object] = {}
        for j in range(len(self.cols)):
            if self.stat[j] != _BASIC:
                xj = self.x[j]
                if xj:
                    for i, a in self.cols[j]:
                        rhs[i] = rhs.get(i, ZERO) - a * xj
        xb = self._ftran(rhs)
        for i, j in enumerate(self.head):
            self.x[j] = xb.get(i, ZERO)

    def _refactor(self):
        basic = list(self.head)
        if not self._factor(basic):  # pragma: no cover - exact arithmetic keeps bases nonsingular
            raise AssertionError("basis became singular")
        self._recompute_basics()

    # ---------------------------------------------------------------- solve
    def _run_phase(self, cost: list) -> LpStatus:
        lo, up, x, stat, cols = self.lo, self.up, self.x, self.stat, self.cols
        ncols = len(cols)
        while True:
            if self.max_iterations is not None and self.iterations >= self.max_iterations:
                raise IterationLimit(f"{self.iterations} iterations")
            if self.deadline is not None and (self.iterations & 31) == 0 and time.monotonic() > self.deadline:
                raise TimeoutError("simplex deadline reached")
            if self.pivots >= self.refactor_every:
                self._refactor()
            y = self._btran([cost[j] for j in self.head])
            bland = self.iterations >= self.dantzig_pivots
            enter = -1
            best = ZERO
            direction = 0
            for j in range(ncols):
                s = stat[j]
                if s == _BASIC:
                    continue
                l, u = lo[j], up[j]
                if l is not None and u is not None and l == u:
                    continue
                d = cost[j]
                for i, a in cols[j]:
                    yi = y[i]
                    if yi:
                        d -= yi * a
                if not d:
                    continue
                if d < 0 and (u is None or x[j] < u):
                    dirn = 1
                elif d > 0 and (l is None or x[j] > l):
                    dirn = -1
                else:
                    continue
                if bland:
                    enter, direction = j, dirn
                    break
                mag = abs(d)
                if mag > best:
                    best, enter, direction = mag, j, dirn
            if enter < 0:
                return LpStatus.OPTIMAL
            self.iterations += 1
            alpha = self._ftran_col(enter)

            # ratio test; None = unbounded step
            t_best = None
            leave_pos = -1
            leave_var = -1
            l, u = lo[enter], up[enter]
            if l is not None and u is not None:
                t_best = u - l
            head = self.head
            for i, a in alpha.items():
                b = head[i]
                rate = -direction * a
                if rate < 0:
                    bl = lo[b]
                    if bl is None:
                        continue
                    t = (x[b] - bl) / -rate
                else:
                    bu = up[b]
                    if bu is None:
                        continue
                    t = (bu - x[b]) / rate
                if t_best is None or t < t_best or (t == t_best and leave_var >= 0 and b < leave_var):
                    t_best, leave_pos, leave_var = t, i, b
            if t_best is None:
                return LpStatus.UNBOUNDED

            if t_best:
                step = direction * t_best
                x[enter] += step
                for i, a in alpha.items():
                    x[head[i]] -= step * a
            if leave_pos < 0:
                stat[enter] = _AT_UP if direction > 0 else _AT_LO
                x[enter] = up[enter] if direction > 0 else lo[enter]
                continue
            # leaving variable lands exactly on the bound it hit
            rate = -direction * alpha[leave_pos]
            if rate < 0:
                x[leave_var] = lo[leave_var]
                stat[leave_var] = _AT_LO
            else:
                x[leave_var] = up[leave_var]
                stat[leave_var] = _AT_UP
            self._push_eta(leave_pos, alpha)
            head[leave_pos] = enter
            stat[enter] = _BASIC
            self.pos[leave_var] = -1
            self.pos[enter] = leave_pos

    def solve(self, warm: tuple[Sequence[int], Sequence[int]] | None = None) -> LpSolution:
        if self.trivially_infeasible:
            return LpSolution(LpStatus.INFEASIBLE)
        started = False
        if warm is not None:
            started = self.warm_start(*warm)
            if not started:
                logger.debug("warm basis rejected; cold start")
        if not started:
            self.cold_start()
            if self.nart:
                cost1 = [ZERO] * (self.nv + self.m) + [ONE] * self.nart
                self._run_phase(cost1)
                infeas = sum((self.x[j] for j in range(self.nv + self.m, len(self.cols))), ZERO)
                if infeas > 0:
                    return LpSolution(LpStatus.INFEASIBLE, iterations=self.iterations)
                for j in range(self.nv + self.m, len(self.cols)):
                    self.up[j] = ZERO
                    self.x[j] = ZERO
        cost = self.cost2 + [ZERO] * (len(self.cols) - len(self.cost2))
        status = self._run_phase(cost)
        if status is LpStatus.UNBOUNDED:
            return LpSolution(LpStatus.UNBOUNDED, iterations=self.iterations)
        return self._solution(cost)

    def _solution(self, cost) -> LpSolution:
        nv = self.nv
        y = self._btran([cost[j] for j in self.head])
        duals = [Fraction(0)] * self.model.num_rows
        for pos, i in enumerate(self.row_map):
            duals[i] = _frac(y[pos])
        rc = []
        for j in range(nv):
            d = cost[j]
            for i, a in self.cols[j]:
                d -= y[i] * a
            rc.append(_frac(d))
        values = [_frac(self.x[j]) for j in range(nv)]
        obj = sum((c * v for c, v in zip(self.model.objective, values) if c), Fraction(0))
        basis = frozenset(j for j in self.head if j < nv + self.m)
        return LpSolution(LpStatus.OPTIMAL, obj, values, basis, duals, rc, self.iterations)


def lp_solve(
    model: LpModel,
    lower: Sequence | None = None,
    upper: Sequence | None = None,
    warm_start: str | tuple | None = "auto",
    dantzig_pivots: int | None = None,
    max_iterations: int | None = None,
    time_limit: float | None = None,
) -> LpSolution:
    """Exact optimum of ``model`` (minimisation) as rationals.

    ``warm_start="auto"`` asks HiGHS for a starting basis on larger models;
    the basis is then re-factorised and verified in exact arithmetic, and the
    exact simplex continues from it, so the result never depends on floats.
    Pass ``None`` for a pure exact cold start, or ``(basic, at_upper)``.
    ``basis`` in the result indexes structurals ``0..n-1`` and row activity
    variables ``n..n+m-1``.
    """
    deadline = None if time_limit is None else time.monotonic() + time_limit
    solver = _Simplex(model, lower, upper, dantzig_pivots=dantzig_pivots,
                      max_iterations=max_iterations, deadline=deadline)
    warm = None
    if isinstance(warm_start, tuple):
        warm = warm_start
    elif warm_start in ("auto", "highs"):
        if warm_start == "highs" or model.num_vars + model.num_rows > 400:
            from ddfrac.ratlp.floatlp import highs_basis

            warm = highs_basis(model, lower, upper, solver.row_map)
    elif warm_start is not None:
        raise ValueError(f"unknown warm_start {warm_start!r}")
    return solver.solve(warm)
