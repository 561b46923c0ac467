"""Depth-first branch-and-bound over LP relaxations with exact pruning."""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ddfrac.ratlp.model import LpModel, LpSolution, LpStatus, MalformedModel, as_rational
from ddfrac.ratlp.simplex import lp_solve

logger = logging.getLogger(__name__)

INTEGRALITY_TOL = 1e-6


@dataclass
class _Node:
    lower: list
    upper: list
    bound: Fraction | None  # valid lower bound inherited from the parent
    depth: int


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


class _BnB:
    def __init__(self, model: LpModel, integer_vars: Iterable[int], time_limit, relaxation: str,
                 incumbent):
        model.check()
        self.model = model
        self.ints = sorted(set(integer_vars))
        nv = model.num_vars
        for j in self.ints:
            if not 0 <= j < nv:
                raise MalformedModel(f"integer variable {j} out of range")
            if model.lower[j] is None or model.upper[j] is None:
                raise MalformedModel(f"integer variable {j} needs finite bounds")
        self.is_int = [False] * nv
        for j in self.ints:
            self.is_int[j] = True
        self.pure = len(self.ints) == nv
        # objective provably integral on integral points
        self.int_objective = all(
            (c.denominator == 1 and self.is_int[j]) or c == 0 for j, c in enumerate(model.objective)
        )
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        if relaxation == "auto":
            from ddfrac.ratlp.floatlp import HIGHS_AVAILABLE

            relaxation = "float" if HIGHS_AVAILABLE and nv + model.num_rows > 200 else "exact"
        if relaxation not in ("exact", "float"):
            raise ValueError(f"unknown relaxation {relaxation!r}")
        self.relaxation = relaxation
        if relaxation == "float":
            from ddfrac.ratlp.floatlp import HighsRelaxation, SafeBounder

            rows = [i for i, r in enumerate(model.rows) if r.coefs]
            self.highs = HighsRelaxation(model, rows)
            self.bounder = SafeBounder(model, rows)
        # weakest valid bound: objective minimised over the variable box alone
        self.box_bound: Fraction | None = Fraction(0)
        for c, lo, up in zip(model.objective, model.lower, model.upper):
            b = lo if c > 0 else up
            if c == 0:
                continue
            if b is None:
                self.box_bound = None
                break
            self.box_bound += c * b
        self.best_obj: Fraction | None = None
        self.best_x: list[Fraction] | None = None
        self.nodes = 0
        self.exact_fallbacks = 0
        if incumbent is not None:
            self._offer([as_rational(v) for v in incumbent], model.lower, model.upper)

    # ------------------------------------------------------------- helpers
    def _offer(self, x: list[Fraction], lower, upper) -> bool:
        for j in self.ints:
            if x[j].denominator != 1:
                return False
        for j, v in enumerate(x):
            if (lower[j] is not None and v < lower[j]) or (upper[j] is not None and v > upper[j]):
                return False
        if self.model.violations(x):
            return False
        obj = self.model.objective_value(x)
        if self.best_obj is None or obj < self.best_obj:
            self.best_obj, self.best_x = obj, x
            logger.debug("incumbent %s after %d nodes", obj, self.nodes)
            return True
        return False

    def _prunable(self, bound: Fraction | None) -> bool:
        if bound is None or self.best_obj is None:
            return False
        if self.int_objective:
            return _ceil(bound) >= self.best_obj
        return bound >= self.best_obj

    @staticmethod
    def _most_fractional(vals, candidates) -> int:
        best, best_j = -1.0, -1
        for j in candidates:
            f = vals[j] - math.floor(vals[j])
            score = min(f, 1 - f)
            if score > best:
                best, best_j = score, j
        return best_j

    # ------------------------------------------------------------ node LPs
    def _solve_exact(self, node: _Node):
        """(status, bound, branch_var, branch_value) from an exact LP."""
        sol = lp_solve(self.model, node.lower, node.upper, warm_start="auto")
        if sol.status is LpStatus.INFEASIBLE:
            return "infeasible", None, -1, None
        if sol.status is LpStatus.UNBOUNDED:
            return "unbounded", None, -1, None
        frac = [j for j in self.ints if sol.values[j].denominator != 1]
        if not frac:
            self._offer(sol.values, node.lower, node.upper)
            return "integral", sol.objective, -1, None
        best, best_j = None, -1
        for j in frac:
            f = sol.values[j] - math.floor(sol.values[j])
            score = min(f, 1 - f)
            if best is None or score > best:
                best, best_j = score, j
        return "fractional", sol.objective, best_j, sol.values[best_j]

    def _solve_float(self, node: _Node):
        self.highs.set_bounds(node.lower, node.upper)
        status, x, y = self.highs.solve()
        if status == "infeasible":
            ray = self.highs.dual_ray()
            if ray is not None and self.bounder.proves_infeasible(ray, node.lower, node.upper):
                return "infeasible", None, -1, None
            self.exact_fallbacks += 1
            return self._solve_exact(node)
        if status != "optimal":
            self.exact_fallbacks += 1
            return self._solve_exact(node)
        bound = self.bounder.bound(self.bounder.clip(y), node.lower, node.upper)
        cand = [j for j in self.ints if abs(x[j] - round(x[j])) > INTEGRALITY_TOL]
        if not cand:
            if self.pure:
                xr = [Fraction(int(round(v))) for v in x]
                in_box = all((lo is None or v >= lo) and (up is None or v <= up)
                             for v, lo, up in zip(xr, node.lower, node.upper))
                if in_box and not self.model.violations(xr):
                    self._offer(xr, node.lower, node.upper)
                    return "integral", bound, -1, None
            # rounding failed or continuous part present: settle this node exactly
            self.exact_fallbacks += 1
            return self._solve_exact(node)
        j = self._most_fractional(x, cand)
        return "fractional", bound, j, Fraction(float(x[j]))

    # ---------------------------------------------------------------- main
    def run(self) -> LpSolution:
        m = self.model
        root = _Node(list(m.lower), list(m.upper), None, 0)
        stack = [root]
        dual_bound: Fraction | None = None
        timed_out = False
        open_bounds: list[Fraction | None] = []
        while stack:
            if self.deadline is not None and time.monotonic() > self.deadline:
                timed_out = True
                open_bounds = [self.box_bound if nd.bound is None else nd.bound for nd in stack]
                break
            node = stack.pop()
            if self._prunable(node.bound):
                continue
            self.nodes += 1
            solve = self._solve_float if self.relaxation == "float" else self._solve_exact
            status, bound, j, val = solve(node)
            if node.bound is not None and (bound is None or bound < node.bound):
                bound = node.bound
            if self.nodes == 1:
                dual_bound = bound
            if status == "unbounded":
                if self.nodes == 1:
                    return LpSolution(LpStatus.UNBOUNDED, nodes=self.nodes)
                raise RuntimeError("unbounded relaxation below a bounded root")
            if status in ("infeasible", "integral"):
                continue
            if self._prunable(bound):
                continue
            lo_val = math.floor(val)
            down = _Node(node.lower, list(node.upper), bound, node.depth + 1)
            down.upper[j] = Fraction(lo_val)
            up = _Node(list(node.lower), node.upper, bound, node.depth + 1)
            up.lower[j] = Fraction(lo_val + 1)
            # depth-first, floor branch explored first
            stack.append(up)
            stack.append(down)

        if timed_out:
            cands = [b for b in open_bounds if b is not None]
            global_bound = min(cands) if len(cands) == len(open_bounds) and cands else dual_bound
            if self.best_obj is not None and global_bound is not None:
                global_bound = min(global_bound, self.best_obj)
            if self.int_objective and global_bound is not None:
                global_bound = Fraction(_ceil(global_bound))
            return LpSolution(
                LpStatus.TIMEOUT, self.best_obj, self.best_x or [], dual_bound=global_bound, nodes=self.nodes,
            )
        if self.best_obj is None:
            return LpSolution(LpStatus.INFEASIBLE, nodes=self.nodes)
        return LpSolution(LpStatus.OPTIMAL, self.best_obj, self.best_x, dual_bound=self.best_obj,
                          nodes=self.nodes)


def ilp_solve(
    model: LpModel,
    integer_vars: Iterable[int],
    time_limit: float | None = None,
    relaxation: str = "auto",
    incumbent: Sequence | None = None,
) -> LpSolution:
    """Exact integer optimum by depth-first branch-and-bound.

    Branches on the most fractional integer variable (lowest index on ties),
    floor child first. With ``relaxation="float"`` node LPs are solved by
    HiGHS and every prune uses an exact weak-duality bound; integral points
    are accepted only after exact feasibility checks. On timeout the result
    has status ``TIMEOUT``, the incumbent (if any) and a valid global
    ``dual_bound``.
    """
    return _BnB(model, integer_vars, time_limit, relaxation, incumbent).run()
