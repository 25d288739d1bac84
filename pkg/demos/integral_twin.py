"""
The Hankel series and the integral operator I_mu f(z) = int f(t)/(1-tz) dmu(t)
agree inside the disc.
"""

import numpy as np

from hankelmu import (LEBESGUE, Atomic, agreement_check, build, family_fb_h1, family_one,
                      imu_eval, apply_series)

## for a point mass the operator has rank one
mu = Atomic(((0.5, 1.0),))
f = family_fb_h1(0.7, 120)
z = 0.3 + 0.4j
series = apply_series(build(mu, 200), f)(z)
print("series:", series, " integral:", imu_eval(mu, f, z))

## for Lebesgue measure, H_mu 1 = log(1/(1-z))/z
z = 0.9
print("I_mu 1 at 0.9:", imu_eval(LEBESGUE, family_one(), z).real, " closed form:",
      -np.log1p(-z) / z)

## automatic truncation refinement on a grid inside |z| <= 0.9
rep = agreement_check(LEBESGUE, family_fb_h1(0.5, 60))
print(f"agreement on the default grid: N={rep.N}, max |H f - I f| = {rep.max_abs:.1e}, "
      f"stable={rep.stable}")
