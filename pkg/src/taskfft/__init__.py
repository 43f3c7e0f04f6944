"""taskfft: a task-parallel 2D real-to-complex FFT engine.

The package has three layers:

* :mod:`taskfft.kernel` / :mod:`taskfft.matrix` - radix-2 1D transforms with
  a brute-force oracle, and the two transpose-task formulations.
* :mod:`taskfft.engine` / :mod:`taskfft.dist` - the shared-memory pipeline
  under five scheduling strategies, and the slab-decomposed distributed
  pipeline over scatter/all-to-all collectives (in-process or TCP transport).
* :mod:`taskfft.planner` / :mod:`taskfft.bench` - estimate/measure planning
  with a plan cache, and the benchmark harness (``python -m taskfft.bench``).
"""

from .engine import ExecConfig, PhaseTimings, StrategyKind, TaskRegistry, fft2d_r2c
from .dist import DistStrategy, WorldConfig, fft2d_distributed
from .kernel import (
    Plan1D,
    TwiddleTable,
    dft_reference,
    dft_reference_2d,
    execute_c2c,
    execute_c2c_inverse,
    execute_r2c,
    plan_1d,
)
from .planner import Plan2D, PlanCache, PlanningRigor, plan_2d

__version__ = "0.1.0"

__all__ = [
    "ExecConfig",
    "PhaseTimings",
    "StrategyKind",
    "TaskRegistry",
    "fft2d_r2c",
    "DistStrategy",
    "WorldConfig",
    "fft2d_distributed",
    "Plan1D",
    "TwiddleTable",
    "plan_1d",
    "execute_c2c",
    "execute_r2c",
    "execute_c2c_inverse",
    "dft_reference",
    "dft_reference_2d",
    "Plan2D",
    "PlanCache",
    "PlanningRigor",
    "plan_2d",
]
