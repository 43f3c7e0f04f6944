#!/usr/bin/env python3
"""The five scheduling strategies compute bitwise-identical 2D spectra.

Each strategy runs the same four-phase pipeline (row FFTs, transpose, row
FFTs, transpose back) and differs only in barrier placement and transpose
formulation. The event trace shows the overlap structure.

Run: python demos/02_strategy_pipelines.py
"""

import numpy as np

from taskfft import ExecConfig, StrategyKind, fft2d_r2c
from taskfft.bench import lcg_matrix

x = lcg_matrix(256, 256, seed=42)
cfg = ExecConfig(workers=2)

reference = None
print(f"{'strategy':>16} {'total_s':>9} {'fft1':>7} {'t1':>7} {'fft2':>7} {'t2':>7}  bitwise")
for strategy in StrategyKind:
    out, t = fft2d_r2c(x, strategy, cfg)
    if reference is None:
        reference = out
    same = out.tobytes() == reference.tobytes()
    print(
        f"{strategy.value:>16} {t.total:9.4f} {t.fft_dim1:7.4f} {t.transpose_1:7.4f}"
        f" {t.fft_dim2:7.4f} {t.transpose_2:7.4f}  {same}"
    )

# The naive variant chains each row's transpose directly onto its FFT, so
# transposes start while other FFTs still run; the barriered variants don't.
for strategy in (StrategyKind.FUTURE_NAIVE, StrategyKind.FUTURE_SYNC):
    trace = []
    fft2d_r2c(x, strategy, cfg, trace=trace)
    fft1_last_end = max(e.end for e in trace if e.phase == "fft_dim1")
    t1_first_start = min(e.start for e in trace if e.phase == "transpose_1")
    print(f"{strategy.value}: transpose started before last row FFT ended: "
          f"{t1_first_start < fft1_last_end}")
