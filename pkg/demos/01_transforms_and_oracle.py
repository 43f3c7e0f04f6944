#!/usr/bin/env python3
"""1D transforms: plans, the brute-force oracle, batching and round trips.

Run: python demos/01_transforms_and_oracle.py
"""

import numpy as np

from taskfft import kernel

# A plan freezes length, kind and batch; equal plans are interchangeable.
plan = kernel.plan_1d(8, kernel.C2C_FORWARD)
print(f"plan: length={plan.length} kind={plan.kind} stages={plan.twiddles.stage_count}")

# The classics: an impulse spreads flat, a constant collapses to DC.
print("fft([1,0,0,0,...]) =", kernel.execute_c2c(plan, np.eye(8)[0] + 0j).round(12))
print("fft([1,1,1,1,...]) =", kernel.execute_c2c(plan, np.ones(8) + 0j).round(12))

# Every kernel result is checked against direct O(N^2) summation.
rng = np.random.default_rng(0)
x = rng.standard_normal(8) + 1j * rng.standard_normal(8)
fast = kernel.execute_c2c(plan, x)
slow = kernel.dft_reference(x)
print(f"max |fast - oracle| = {np.max(np.abs(fast - slow)):.3e}")

# Real input needs only the first N/2+1 bins (the rest mirrors conjugate).
signal = rng.standard_normal(16)
spectrum = kernel.execute_r2c(kernel.plan_1d(16, kernel.R2C), signal)
print(f"r2c of 16 real samples -> {spectrum.size} bins, bin0.imag = {spectrum[0].imag}")

# A batch-4 plan transforms four contiguous signals in one call.
batch_plan = kernel.plan_1d(16, kernel.R2C, batch=4)
block = rng.standard_normal(64)
print("batched r2c output shape:", kernel.execute_r2c(batch_plan, block).reshape(4, 9).shape)

# The inverse is unnormalized: forward then inverse scales by N.
fwd = kernel.execute_c2c(kernel.plan_1d(8, kernel.C2C_FORWARD), x)
back = kernel.execute_c2c_inverse(kernel.plan_1d(8, kernel.C2C_INVERSE), fwd)
print(f"max |inverse(forward(x)) - 8x| = {np.max(np.abs(back - 8 * x)):.3e}")

# Parseval's identity ties the two domains together.
energy_time = np.sum(np.abs(x) ** 2)
energy_freq = np.sum(np.abs(fwd) ** 2) / 8
print(f"Parseval: {energy_time:.12f} == {energy_freq:.12f}")
