import os
import subprocess
import sys

import numpy as np
import pytest

from osplab._backend import BACKEND, KERNEL_NAMES, get_kernels
from osplab.core import Seed, sample_clock_stream
from osplab.lpp import sample_staircase

py = get_kernels("python")
try:
    cy = get_kernels("cython")
except ImportError:  # pragma: no cover - extension not built
    cy = None

needs_ext = pytest.mark.skipif(cy is None, reason="compiled extension not built")


def test_both_modules_expose_all_kernels():
    for name in KERNEL_NAMES:
        assert callable(getattr(py, name))
        if cy is not None:
            assert callable(getattr(cy, name))


@needs_ext
@pytest.mark.parametrize("n", [2, 3, 10, 57])
def test_osp_gillespie_identical(n):
    u = Seed(n, 0, "b").generator().random((n * (n - 1) // 2, 2))
    exps, unifs = -np.log1p(-u[:, 0]), np.ascontiguousarray(u[:, 1])
    e1, t1 = py.osp_gillespie(n, exps, unifs)
    e2, t2 = cy.osp_gillespie(n, exps, unifs)
    assert np.array_equal(e1, e2) and np.asarray(t1).tobytes() == np.asarray(t2).tobytes()


@needs_ext
@pytest.mark.parametrize("n", [2, 4, 9])
def test_osp_replay_identical(n):
    times, edges = sample_clock_stream(range(1, n), 30.0, n).merged()
    edges = np.ascontiguousarray(edges, dtype=np.int32)
    a, b = py.osp_replay(n, edges, times), cy.osp_replay(n, edges, times)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1]) and a[2] == b[2]


@needs_ext
def test_tasep_kernels_identical():
    rng = np.random.default_rng(1)
    init = np.arange(-7, 8, dtype=np.int64)
    rings = rng.integers(0, 14, size=300, dtype=np.int32)
    s1, f1 = py.tasep_snapshots(init, rings)
    s2, f2 = cy.tasep_snapshots(init, rings)
    assert np.array_equal(s1, s2) and np.array_equal(f1, f2)
    offsets = np.array([0, 100, 100, 300], dtype=np.int64)
    c1 = np.tile(init, (3, 1))
    c2 = c1.copy()
    py.tasep_apply_batch(c1, rings, offsets)
    cy.tasep_apply_batch(c2, rings, offsets)
    assert np.array_equal(c1, c2)
    assert np.array_equal(c1[1], init)
    assert np.array_equal(c1[0], s1[99])


@needs_ext
@pytest.mark.parametrize("n", [2, 3, 5, 64, 301])
def test_lpp_staircase_identical(n):
    w = sample_staircase(n, 4)
    assert py.lpp_staircase(n, w).tobytes() == cy.lpp_staircase(n, w).tobytes()


def test_environment_selects_python_backend():
    env = dict(os.environ, OSPLAB_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "import osplab; print(osplab.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert BACKEND in ("python", "cython")
