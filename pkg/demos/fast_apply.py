"""
Applying the Hankel matrix (mu_{n+k}) to coefficient vectors: direct summation
against an FFT convolution, plus the largest singular value of the truncation.
"""

import time

import numpy as np

from hankelmu import LEBESGUE, apply_fast, apply_naive, build, operator_norm_truncated

## a truncated Hilbert matrix
N = 2**14
H = build(LEBESGUE, N)
a = np.random.default_rng(0).standard_normal(N)

t0 = time.perf_counter()
slow = apply_naive(H, a)
t1 = time.perf_counter()
fast = apply_fast(H, a)
t2 = time.perf_counter()
print(f"N={N}: naive {t1 - t0:.3f}s, fast {t2 - t1:.4f}s, "
      f"relative deviation {np.linalg.norm(fast - slow) / np.linalg.norm(slow):.1e}")

## H @ a is shorthand for the fast apply
assert np.allclose(H @ a, fast)

## the norm of the N x N section creeps towards pi very slowly
for k in (2, 6, 10, 11):
    print(f"N=2^{k:<2d} norm {operator_norm_truncated(build(LEBESGUE, 2**k)):.6f}")
print(f"pi          {np.pi:.6f}")
