"""
Norms and seminorms of polynomials on Hardy, Bloch, mean-Lipschitz, Besov and
Q_s spaces, and the coefficient proxies valid for decreasing coefficients.
"""

import numpy as np

from hankelmu import (TaylorPoly, besov_seminorm, bloch_seminorm, circle_mean,
                      coeff_proxy_bp, coeff_proxy_hp, decay_sup, family_F_log,
                      lambda12_proxy, qs_seminorm)

F = family_F_log(512)          # partial sum of log(1/(1-z))

## integral means on circles
for r in (0.5, 0.9, 1.0):
    print(f"M_2(r={r}, F) = {circle_mean(F, r, 2):.5f}")

## F is in Bloch with seminorm 2, in every Q_s, but not in Besov B^2
print("Bloch:", bloch_seminorm(F).value)
print("Q_1 (BMOA) grid estimate:", qs_seminorm(F, 1.0).value)
print("lambda^2_{1/2} proxy:", lambda12_proxy(F).value)
print("B^2 seminorm of the degree-512 truncation:", besov_seminorm(F, 2).value)

## coefficient proxies: sum n^(p-2) a_n^p (Hardy) and sum n^(p-1) a_n^p (Besov)
# a_0 = 1 keeps the whole sequence nonincreasing, which the proxies assume
c = np.r_[1.0, 1 / np.arange(1, 10_001)]
print("H^2 proxy of 1/n:", coeff_proxy_hp(c, 2))
print("B^2 proxy of 1/n:", coeff_proxy_bp(c, 2))

## sup n a_n bounded iff the mean-Lipschitz proxy is stable
for name, a in [("1/n", 1 / np.arange(1, 4001)), ("n^-1/2", np.arange(1, 4001) ** -0.5)]:
    coeffs = TaylorPoly(np.r_[0.0, a])
    print(f"{name}: decay sup growing={decay_sup(coeffs.coeffs).growing}, "
          f"lambda12 flag={lambda12_proxy(coeffs).flag}")
