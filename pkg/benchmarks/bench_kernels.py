"""Time each kernel on the compiled and the pure-Python backend.

    python benchmarks/bench_kernels.py [--repeat 5]

Inputs are generated once per kernel and shared by both backends, so the
numbers compare kernel cost only (no sampling).
"""

import argparse
import timeit

import numpy as np

from osplab._backend import get_kernels
from osplab.core import Seed, sample_clock_stream
from osplab.lpp import sample_staircase


def _osp_inputs(n):
    u = Seed(n, 0, "bench").generator().random((n * (n - 1) // 2, 2))
    return n, -np.log1p(-u[:, 0]), np.ascontiguousarray(u[:, 1])


def _replay_inputs(n):
    times, edges = sample_clock_stream(range(1, n), 10.0, n).merged()
    return n, np.ascontiguousarray(edges, dtype=np.int32), times


def _tasep_inputs(width, rings):
    rng = np.random.default_rng(0)
    init = np.arange(width, dtype=np.int64)
    return init, rng.integers(0, width - 1, size=rings, dtype=np.int32)


CASES = [
    ("osp_gillespie N=100", "osp_gillespie", lambda: _osp_inputs(100)),
    ("osp_gillespie N=300", "osp_gillespie", lambda: _osp_inputs(300)),
    ("osp_replay N=20 t=10", "osp_replay", lambda: _replay_inputs(20)),
    ("tasep_snapshots 41 sites", "tasep_snapshots", lambda: _tasep_inputs(41, 2000)),
    ("lpp_staircase N=100", "lpp_staircase", lambda: (100, sample_staircase(100, 1))),
    ("lpp_staircase N=500", "lpp_staircase", lambda: (500, sample_staircase(500, 1))),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    try:
        backends = {"cython": get_kernels("cython")}
    except ImportError:
        backends = {}
        print("compiled extension not built; timing the Python backend only")
    backends["python"] = get_kernels("python")

    print(f"{'case':28s}" + "".join(f"{name:>14s}" for name in backends) + ("     speedup" if len(backends) == 2 else ""))
    for label, kernel, make in CASES:
        inputs = make()
        best = {}
        for name, mod in backends.items():
            fn = getattr(mod, kernel)
            t = timeit.Timer(lambda: fn(*inputs))
            loops, _ = t.autorange()
            best[name] = min(t.repeat(args.repeat, loops)) / loops
        row = f"{label:28s}" + "".join(f"{best[n] * 1e3:12.3f}ms" for n in backends)
        if len(best) == 2:
            row += f"  {best['python'] / best['cython']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
