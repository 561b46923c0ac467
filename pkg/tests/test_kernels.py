import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from ddfrac.dd import compile_exact, dump
from ddfrac.dd._kernels import NUMBA_AVAILABLE, expand_layer
from ddfrac.graph import make_gnp, make_myciel, make_queen

needs_numba = pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize(
    "g",
    [make_myciel(4), make_queen(5, 5), make_gnp(70, Fraction(4, 5), 1), make_gnp(130, Fraction(9, 10), 2)],
    ids=lambda g: f"{g.name}-n{g.n}",
)
def test_backends_build_identical_diagrams(g):
    a = compile_exact(g, backend="numpy")
    b = compile_exact(g, backend="numba")
    assert dump(a) == dump(b)


@needs_numba
def test_expand_layer_first_occurrence_order():
    states = np.array([[0b111], [0b110], [0b011]], dtype=np.uint64)
    clear = np.array([0b011], dtype=np.uint64)  # vertex 0 and its neighbour 1
    for backend in ("numpy", "numba"):
        ch, z, o = expand_layer(states, 0, 0, clear, backend)
        assert ch[:, 0].tolist() == [0b110, 0b100, 0b010, 0]
        assert z.tolist() == [0, 0, 2]
        assert o.tolist() == [1, -1, 3]


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, DDFRAC_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from ddfrac.dd import BACKEND; print(BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_unknown_backend():
    with pytest.raises(ValueError):
        compile_exact(make_myciel(3), backend="fortran")
