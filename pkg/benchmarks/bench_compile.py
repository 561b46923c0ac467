"""Compare the numba and numpy layer-expansion backends on DD compilation.

    python benchmarks/bench_compile.py [--repeat 3]

Both backends must build byte-identical diagrams; the script checks that
before timing.
"""
import argparse
import time
from fractions import Fraction

from ddfrac.dd import NUMBA_AVAILABLE, compile_exact, dump
from ddfrac.graph import make_gnp, make_myciel, make_queen


def instances():
    yield make_myciel(5)
    yield make_queen(7, 7)
    yield make_queen(8, 8)
    yield make_gnp(60, Fraction(1, 2), 1)
    yield make_gnp(150, Fraction(9, 10), 2)


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed")
    # warm the JIT cache outside the timings
    compile_exact(make_myciel(3), backend="numba")

    print(f"{'instance':<16}{'n':>5}{'nodes':>10}{'numpy s':>10}{'numba s':>10}{'speedup':>9}")
    for g in instances():
        t_np, d_np = best_of(lambda: compile_exact(g, backend="numpy"), args.repeat)
        t_nb, d_nb = best_of(lambda: compile_exact(g, backend="numba"), args.repeat)
        assert dump(d_np) == dump(d_nb), g.name
        print(f"{g.name:<16}{g.n:>5}{d_nb.node_count:>10}{t_np:>10.3f}{t_nb:>10.3f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
