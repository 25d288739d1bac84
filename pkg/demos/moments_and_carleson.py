"""
Moments, tail masses and Carleson-type classification of radial measures.
"""

import numpy as np
from scipy.special import beta

from hankelmu import (LEBESGUE, Atomic, PowLog, carleson_report, is_log_carleson,
                      moments_upto, parse_measure, tail_mass)

## Lebesgue measure: mu_n = 1/(n+1)
table = moments_upto(LEBESGUE, 10)
print("Lebesgue moments:", np.round(table.values, 6))

## (1-t)^(-1/2) dt has Beta-function moments
mu = PowLog(1, 0.5, 0)
n = np.arange(1001)
err = np.abs(moments_upto(mu, 1000).values - beta(n + 1, 0.5)).max()
print(f"powlog(alpha=0.5) vs B(n+1, 1/2): max error {err:.2e}")

## densities with a log factor are handled by the same quadrature
mu = parse_measure("powlog:c=1,alpha=1,gamma=-1")
print("tail mass of (1-t)^0 log^-1(e/(1-t)) beyond b = 0.999:", tail_mass(mu, 0.999))

## the Carleson quantity K(b) = mu([b,1)) log^a(e/(1-b)) / (1-b)^s on 1-b = 2^-j
for spec in ("powlog:alpha=1", "powlog:alpha=1,gamma=-1", "powlog:alpha=0.5", "atoms:0.5:1"):
    m = parse_measure(spec)
    rep = carleson_report(m, 1, 1)
    sup = "unbounded" if rep.sup is None else f"{rep.sup:.4g}"
    print(f"{spec:28s} 1-log 1-Carleson: {rep.verdict:10s} sup K = {sup}"
          f"  (classification says {is_log_carleson(m)})")

## atoms are exact
print("atomic moment mu_3 of 0.5 delta_0.5:", moments_upto(Atomic(((0.5, 0.5),)), 3)[3])
