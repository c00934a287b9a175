"""Oriented swap process, colored TASEP and corner-growth simulations with exact and statistical checks."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .core import ClockStream, Permutation, Seed, sample_clock_stream, window_radius
from .lpp import LppGrid, last_passage, lpp_batch, sample_grid
from .osp import OspResult, absorbing_time, last_swap_times, osp_batch, simulate_osp, simulate_osp_coupled
from .tasep import HeightQuery, simulate_colored_tasep

__all__ = [
    "__version__",
    "BACKEND",
    "ClockStream",
    "HeightQuery",
    "LppGrid",
    "OspResult",
    "Permutation",
    "Seed",
    "absorbing_time",
    "last_passage",
    "last_swap_times",
    "lpp_batch",
    "osp_batch",
    "sample_clock_stream",
    "sample_grid",
    "simulate_colored_tasep",
    "simulate_osp",
    "simulate_osp_coupled",
    "window_radius",
]
