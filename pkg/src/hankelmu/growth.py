"""Growth-rate fitting and divergence detection for sequences indexed by a
scale parameter tending to infinity (``1/(1-b)`` or ``n``).

Both helpers work in the coordinates ``log X`` and ``log log(e X)`` so that
power growth and logarithmic growth can be told apart on geometric grids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BOUNDED = "bounded"
DIVERGING = "diverging"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares fit of ``V(b) ~ C (1-b)^-gamma log(e/(1-b))^delta``
    (``e`` replaced by ``e^offset`` for other offsets)."""

    gamma: float
    delta: float
    log_const: float
    residual: float
    n_points: int
    offset: float = 1.0

    def predict(self, b):
        b = np.asarray(b, dtype=float)
        x = -np.log1p(-b)
        return np.exp(self.log_const + self.gamma * x + self.delta * np.log(x + self.offset))


def growth_exponent_fit(pairs, min_points=8, offset=1.0, nested=False,
                        band=0.15) -> GrowthFit:
    """Fit power and log exponents to ``(b, V(b))`` pairs.

    The design matrix has columns ``1``, ``x = log(1/(1-b))`` and
    ``log(x + offset)``; the default ``offset = 1`` gives the regressor
    ``log log(e/(1-b))``. ``residual`` is the RMS residual in ``log V``.

    Over the few decades reachable in practice the ``x`` and ``log x``
    columns are close to collinear, so a slowly growing sequence can leak
    into ``gamma``. With ``nested=True`` the fit is repeated with
    ``gamma = 0`` whenever the free fit puts ``|gamma| <= band``.

    Raises
    ------
    ValueError
        Fewer than ``min_points`` pairs, a non-positive ``V`` value, or a
        rank-deficient design (e.g. all ``b`` equal).
    """
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("pairs must be a sequence of (b, V) tuples")
    if len(arr) < min_points:
        raise ValueError(f"need at least {min_points} pairs, got {len(arr)}")
    b, v = arr[:, 0], arr[:, 1]
    if np.any(v <= 0) or not np.all(np.isfinite(v)):
        raise ValueError("V(b) must be finite and strictly positive")
    if np.any(b < 0) or np.any(b >= 1):
        raise ValueError("b values must lie in [0, 1)")
    x = -np.log1p(-b)
    if np.any(x + offset <= 0):
        raise ValueError("log regressor undefined: increase offset or drop b = 0")
    logv = np.log(v)
    design = np.column_stack([np.ones_like(x), x, np.log(x + offset)])
    coef, _, rank, _ = np.linalg.lstsq(design, logv, rcond=None)
    if rank < 3:
        raise ValueError("degenerate design matrix: b values do not spread")
    if nested and abs(coef[1]) <= band:
        sub = design[:, [0, 2]]
        c2 = np.linalg.lstsq(sub, logv, rcond=None)[0]
        coef = np.array([c2[0], 0.0, c2[1]])
    resid = logv - design @ coef
    return GrowthFit(
        gamma=float(coef[1]),
        delta=float(coef[2]),
        log_const=float(coef[0]),
        residual=float(np.sqrt(np.mean(resid**2))),
        n_points=len(arr),
        offset=float(offset),
    )


def fit_verdict(fit: GrowthFit, band=0.15) -> str:
    """Growth-class verdict from fitted exponents with a dead band.

    ``bounded`` when neither exponent exceeds ``band`` (or the power decays
    outright), ``diverging`` when the power or, at zero power, the log
    exponent clears twice the band; anything in between is inconclusive.
    """
    g, d = fit.gamma, fit.delta
    if g < -band or (g <= band and d <= band):
        return BOUNDED
    if g > 2 * band or (g > -band and d > 2 * band):
        return DIVERGING
    return INCONCLUSIVE


def classify_growth(
    scale,
    values,
    log_slope=0.25,
    decade_factor=1.5,
    median_factor=10.0,
) -> str:
    """Decide whether ``values`` stay bounded as ``scale`` grows.

    Only the last decade of ``scale`` is inspected. The sequence is called
    diverging when it is nondecreasing there and either

    * its slope against ``log log(e X)`` exceeds ``log_slope`` (catches
      ``log X`` growth, which a fixed per-decade factor cannot), or
    * it grows by ``decade_factor`` over the decade and ends above
      ``median_factor`` times the median of the whole sequence.
    """
    x = np.asarray(scale, dtype=float)
    v = np.asarray(values, dtype=float)
    if x.shape != v.shape or x.size < 2:
        raise ValueError("need at least two (scale, value) points")
    order = np.argsort(x)
    x, v = x[order], v[order]
    tail = x >= x[-1] / 10.0
    if tail.sum() < 2:
        tail[-2:] = True
    xt, vt = x[tail], v[tail]
    if not np.all(np.isfinite(vt)):
        return DIVERGING
    if vt[-1] <= 0 or vt[0] <= 0:
        return BOUNDED
    if np.any(np.diff(vt) < -1e-12 * np.abs(vt[1:])):
        return BOUNDED
    loglog = np.log1p(np.log(xt))
    slope = (np.log(vt[-1]) - np.log(vt[0])) / (loglog[-1] - loglog[0])
    if slope > log_slope:
        return DIVERGING
    med = float(np.median(v[v > 0])) if np.any(v > 0) else 0.0
    if vt[-1] >= decade_factor * vt[0] and vt[-1] > median_factor * med:
        return DIVERGING
    return BOUNDED


def series_verdict(index, partials, q_threshold=1.5) -> str:
    """Classify a sequence of partial sums taken at geometric cutoffs.

    ``index`` counts doublings of the cutoff; the increments ``d_j`` are
    fitted to ``C j^-q`` over the second half of the sequence. The series is
    called finite when the increments shrink faster than ``j^-q_threshold``
    (or geometrically), diverging otherwise.
    """
    j = np.asarray(index, dtype=float)
    s = np.asarray(partials, dtype=float)
    if not np.all(np.isfinite(s)):
        return DIVERGING
    d = np.diff(s)
    jj = j[1:]
    half = jj >= jj[len(jj) // 2]
    d, jj = d[half], jj[half]
    scale = max(abs(s[-1]), 1e-300)
    if np.all(np.abs(d) <= 1e-14 * scale):
        return BOUNDED
    if np.any(d <= 0):
        # non-monotone increments only happen at rounding level
        return BOUNDED if np.max(np.abs(d)) <= 1e-10 * scale else DIVERGING
    q = -np.polyfit(np.log(jj), np.log(d), 1)[0]
    return BOUNDED if q > q_threshold else DIVERGING
