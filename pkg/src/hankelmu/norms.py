"""Norms, seminorms and coefficient proxies for Hardy, Bloch, mean Lipschitz,
Besov and Q_s spaces, evaluated on truncated Taylor series.

Polynomials are analytic across the unit circle, so integral means at
``r = 1`` are legitimate; they are computed from FFT samples with at least
``8 (deg+1)`` angles, which makes the mean of ``|f|^2`` exact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.fft
from scipy.special import gamma as gamma_fn
from scipy.special import roots_jacobi, roots_legendre

from .series import TaylorPoly, derivative, eval_poly, is_nonneg_decreasing

STABLE = "stable"
GROWING = "growing"
DIVERGED = "diverged"

QUAD_TOL = 1e-4
SUP_TOL = 1e-2
#: Q_s suprema are only taken over ``|a| <= A_MAX``
A_MAX = 0.95


@dataclass(frozen=True)
class SeminormEstimate:
    value: float
    flag: str
    history: tuple
    grid: dict = field(default_factory=dict)

    @property
    def stable(self):
        return self.flag == STABLE


def _pow2(n):
    return 1 << max(4, int(math.ceil(math.log2(max(n, 1)))))


def _coeffs(f):
    return f.coeffs if isinstance(f, TaylorPoly) else np.asarray(f)


def _circle_values(coeffs, r, M):
    """``f(r e^{2 pi i m / M})`` for ``m = 0..M-1`` (``M >= len(coeffs)``)."""
    c = np.asarray(coeffs)
    if r != 1.0:
        with np.errstate(under="ignore"):
            c = c * np.power(float(r), np.arange(len(c)))
    return scipy.fft.ifft(c, n=M) * M


def _flag(history, tol):
    h = [v for v in history if v is not None]
    if not all(np.isfinite(h)):
        return DIVERGED
    if len(h) < 2:
        return STABLE
    a, b = h[-2], h[-1]
    if abs(b - a) <= tol * max(abs(b), 1e-300):
        return STABLE
    return GROWING if b > a else STABLE


def circle_mean(f, r, p, n_angles=None):
    """Integral mean ``M_p(r, f)``; ``p = inf`` gives the max on the circle.

    For ``p = inf`` the grid max is taken again on a grid with twice as many
    angles and the finer value returned.
    """
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    if not 0 <= r <= 1:
        raise ValueError(f"r must lie in [0, 1], got {r}")
    c = _coeffs(f)
    M = n_angles or _pow2(8 * len(c))
    if math.isinf(p):
        return float(np.max(np.abs(_circle_values(c, r, 2 * M))))
    vals = np.abs(_circle_values(c, r, M))
    if p == 2:
        return float(np.sqrt(np.mean(vals * vals)))
    return float(np.mean(vals**p) ** (1.0 / p))


def h2_norm(f):
    c = _coeffs(f)
    return float(np.sqrt(np.sum(np.abs(c) ** 2)))


# ---------------------------------------------------------------------------
# Bloch


def _bloch_grid(deg, level, n_base):
    n = n_base * 2**level
    uniform = np.linspace(0.0, 1.0, n, endpoint=False)
    geo = 1.0 - np.geomspace(1.0, 1.0 / (16.0 * (deg + 1)), n)
    return np.unique(np.concatenate([uniform, geo]))


def bloch_seminorm(f, grid=None, levels=3, tol=SUP_TOL, n_base=64):
    """``sup (1-|z|^2) |f'(z)|`` over a radial x angular grid.

    ``grid`` may be ``(radii, n_angles)`` to fix the grid (one level only);
    otherwise the default grid (uniform plus geometric-in-``1-r`` radii, at
    least ``8 deg`` angles) is doubled ``levels - 1`` times.
    """
    df = derivative(f) if isinstance(f, TaylorPoly) else derivative(TaylorPoly(f))
    c = df.coeffs
    if len(c) == 0:
        return SeminormEstimate(0.0, STABLE, (0.0,), {"radii": 0, "angles": 0})
    deg = len(c)
    history = []
    meta = {}
    grids = [grid] if grid is not None else [None] * levels
    for level, g in enumerate(grids):
        if g is None:
            radii = _bloch_grid(deg, level, n_base)
            M = _pow2(8 * (deg + 1)) * 2**level
        else:
            radii, M = np.asarray(g[0], dtype=float), int(g[1])
        best = 0.0
        for r in radii:
            vals = np.abs(_circle_values(c, r, M))
            best = max(best, (1.0 - r * r) * float(vals.max()))
        history.append(best)
        meta = {"radii": len(radii), "angles": M}
    return SeminormEstimate(history[-1], _flag(history, tol), tuple(history[-3:]), meta)


# ---------------------------------------------------------------------------
# mean Lipschitz


def default_r_grid(deg):
    """``r = 0`` and ``1 - r = 2^-j`` down to about ``1/deg``."""
    J = max(1, int(math.floor(math.log2(max(deg, 2)))))
    return np.concatenate([[0.0], 1.0 - 2.0 ** -np.arange(1, J + 1, dtype=float)])


def lambda12_proxy(f, r_grid=None, tol=SUP_TOL):
    """``sup_r (1-r)^(1/2) M_2(r, f')`` with ``M_2`` summed from coefficients.

    The grid is walked outward; ``history`` holds the running sup at the last
    three points and the flag is ``growing`` when the final step still raised
    it by more than ``tol`` (relative).
    """
    c = np.abs(_coeffs(f))
    n = np.arange(len(c), dtype=float)
    w = (n * c) ** 2
    r = default_r_grid(len(c) - 1) if r_grid is None else np.sort(np.asarray(r_grid, float))
    running = []
    best = 0.0
    for ri in r:
        with np.errstate(under="ignore"):
            m2 = np.sum(w[1:] * np.power(ri, 2 * n[1:] - 2)) if ri > 0 else (w[1] if len(w) > 1 else 0.0)
        best = max(best, math.sqrt((1.0 - ri) * m2))
        running.append(best)
    flag = _flag(running, tol)
    return SeminormEstimate(best, flag, tuple(running[-3:]), {"radii": len(r)})


# ---------------------------------------------------------------------------
# Besov


def _besov_radial_rule(deg, p, level, q_base=8):
    """Nodes/weights in ``v = 1 - r^2`` for ``int_0^1 v^(p-2) g(v) dv``.

    Geometric panels toward ``v = 0`` resolve the ``r^(2n)`` boundary layer;
    the first panel carries the weight exactly via Gauss-Jacobi.
    """
    q = q_base * 2**level
    J = int(math.ceil(math.log2(deg + 1))) + 4
    edges = np.concatenate([[0.0], 2.0 ** -np.arange(J, -1, -1, dtype=float)])
    xj, wj = roots_jacobi(q, 0.0, p - 2.0)
    h = edges[1]
    nodes = [h * (xj + 1) / 2]
    weights = [wj * (h / 2) ** (p - 1)]
    xl, wl = roots_legendre(q)
    for a, b in zip(edges[1:-1], edges[2:]):
        v = a + (b - a) * (xl + 1) / 2
        nodes.append(v)
        weights.append(wl * (b - a) / 2 * v ** (p - 2))
    return np.concatenate(nodes), np.concatenate(weights)


def besov_seminorm(f, p, levels=3, tol=QUAD_TOL):
    """``(int (1-|z|^2)^(p-2) |f'|^p dA)^(1/p)`` with ``dA = dx dy / pi``.

    Trapezoid in angle and composite Gauss(-Jacobi) in ``v = 1 - r^2``;
    each level doubles radial and angular nodes.
    """
    if not 1 < p < math.inf:
        raise ValueError(f"Besov exponent must satisfy 1 < p < inf, got {p}")
    df = derivative(f) if isinstance(f, TaylorPoly) else derivative(TaylorPoly(f))
    c = df.coeffs
    if len(c) == 0:
        return SeminormEstimate(0.0, STABLE, (0.0,), {})
    deg = len(c)
    history = []
    for level in range(levels):
        v, w = _besov_radial_rule(deg, p, level)
        M = _pow2(8 * (deg + 1)) * 2**level
        total = 0.0
        for vi, wi in zip(v, w):
            vals = np.abs(_circle_values(c, math.sqrt(1.0 - vi), M))
            total += wi * float(np.mean(vals**p))
        history.append(total ** (1.0 / p))
        meta = {"radii": len(v), "angles": M}
    return SeminormEstimate(history[-1], _flag(history, tol), tuple(history[-3:]), meta)


# ---------------------------------------------------------------------------
# Q_s


def default_a_grid(n_radii=5, n_angles=16, a_max=A_MAX):
    radii = np.linspace(a_max / n_radii, a_max, n_radii)
    theta = 2 * np.pi * np.arange(n_angles) / n_angles
    return np.concatenate([[0.0], (radii[:, None] * np.exp(1j * theta)).ravel()])


def _refined_a_grid(a_grid):
    a = np.asarray(a_grid, dtype=complex)
    r = np.unique(np.round(np.abs(a), 12))
    r = r[r > 0]
    th = np.unique(np.round(np.angle(a[np.abs(a) > 0]) % (2 * np.pi), 12))
    if r.size == 0:
        return a
    r2 = np.unique(np.concatenate([r, (np.concatenate([[0.0], r[:-1]]) + r) / 2]))
    n_th = max(len(th), 1) * 2
    th2 = 2 * np.pi * np.arange(n_th) / n_th + (th[0] if len(th) else 0.0)
    return np.concatenate([[0.0], (r2[:, None] * np.exp(1j * th2)).ravel()])


class _CircleInterpolant:
    """Evaluate a trigonometric polynomial at arbitrary angles from samples on
    a 16x oversampled uniform grid, with 16-point local Lagrange stencils."""

    width = 16

    def __init__(self, coeffs):
        self.K = _pow2(16 * len(coeffs))
        self.samples = _circle_values(coeffs, 1.0, self.K)
        m = np.arange(self.width)
        diff = m[:, None] - m[None, :]
        np.fill_diagonal(diff, 1)
        self.denom = np.prod(diff, axis=1).astype(float)

    def __call__(self, theta, chunk=2**16):
        theta = np.asarray(theta, dtype=float)
        if theta.size > chunk:
            return np.concatenate([self(theta[i:i + chunk]) for i in range(0, theta.size, chunk)])
        u = (theta % (2 * np.pi)) * self.K / (2 * np.pi)
        i0 = np.floor(u).astype(np.int64) - self.width // 2 + 1
        x = u - i0
        m = np.arange(self.width)
        d = x[:, None] - m[None, :]
        exact = np.isclose(d, 0.0, atol=1e-14, rtol=0)
        d = np.where(exact, 1.0, d)
        full = np.prod(d, axis=1)
        idx = (i0[:, None] + m[None, :]) % self.K
        w = full[:, None] / (d * self.denom[None, :])
        out = np.sum(w * self.samples[idx], axis=1)
        hit = exact.any(axis=1)
        if hit.any():
            j = np.argmax(exact[hit], axis=1)
            out[hit] = self.samples[idx[hit, j]]
        return out


def _mobius_coeffs(c, a, interp=None):
    """Taylor coefficients of ``f o phi_a``, ``phi_a(w) = (a - w)/(1 - conj(a) w)``."""
    deg = len(c) - 1
    ra = abs(a)
    M = _pow2(4 * (deg + 1) * (1 + ra) / (1 - ra))
    while True:
        w = np.exp(2j * np.pi * np.arange(M) / M)
        z = (a - w) / (1 - np.conj(a) * w)
        if interp is not None:
            vals = interp(np.angle(z))
        else:
            vals = eval_poly(TaylorPoly(c), z)
        b = scipy.fft.fft(vals) / M
        big = np.max(np.abs(b))
        # the upper half should hold only rounding noise (about 1e-13)
        if np.max(np.abs(b[M // 2:])) <= 1e-11 * max(big, 1e-300) or M >= 2**24:
            return b[: M // 2]
        M *= 2


def qs_integral(f, s, a):
    """``int |f'|^2 g(z, a)^s dA`` via the substitution ``z = phi_a(w)``.

    In ``w`` the Green function becomes ``log(1/|w|)`` and the radial integral
    is ``Gamma(s+1) 2^-s sum_n n^(1-s) |b_n|^2`` with ``b_n`` the Taylor
    coefficients of ``f o phi_a``.
    """
    c = np.asarray(_coeffs(f))
    if abs(a) > A_MAX + 1e-12:
        raise ValueError(f"|a| = {abs(a):.4g} too close to the boundary (max {A_MAX})")
    if len(c) <= 1:
        return 0.0
    interp = _CircleInterpolant(c) if len(c) > 256 else None
    b = _mobius_coeffs(c, complex(a), interp)
    n = np.arange(1, len(b), dtype=float)
    return float(gamma_fn(s + 1) * 2.0 ** (-s) * np.sum(n ** (1 - s) * np.abs(b[1:]) ** 2))


def qs_seminorm(f, s, a_grid=None, tol=SUP_TOL, refine=True):
    """``(sup_a int |f'|^2 g(z,a)^s dA)^(1/2)`` over a finite ``a`` grid.

    The grid sup is a lower bound for the true seminorm. With ``refine`` the
    sup is recomputed on a grid with doubled angles and midpoint radii and the
    flag reports whether it moved.
    """
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    grid = default_a_grid() if a_grid is None else np.asarray(a_grid, dtype=complex).ravel()
    if np.any(np.abs(grid) > A_MAX + 1e-12):
        raise ValueError(f"a grid must lie in |a| <= {A_MAX}")
    grids = [grid, _refined_a_grid(grid)] if refine else [grid]
    history = []
    best_a = 0.0
    for g in grids:
        vals = np.array([qs_integral(f, s, a) for a in g])
        i = int(np.argmax(vals))
        history.append(math.sqrt(vals[i]))
        best_a = complex(g[i])
    meta = {"a_points": len(grids[-1]), "argsup": best_a}
    return SeminormEstimate(history[-1], _flag(history, tol), tuple(history), meta)


# ---------------------------------------------------------------------------
# coefficient proxies


@dataclass(frozen=True)
class ProxySum:
    """Partial sum of a coefficient functional with a tail diagnostic.

    ``value`` adds a power-law tail estimate when the terms decay faster than
    ``1/n``; otherwise it equals ``partial`` and ``flag`` is ``growing``.
    """

    value: float
    partial: float
    tail: float
    last_decade_increment: float
    flag: str

    def __float__(self):
        return float(self.value)


def _nonneg(c, name):
    c = np.asarray(c, dtype=float)
    if np.any(c < 0):
        raise ValueError(f"{name}: coefficients must be nonnegative")
    if not is_nonneg_decreasing(c, 0):
        if is_nonneg_decreasing(c, 1):
            warnings.warn(f"{name}: coefficients decrease only from index 1", stacklevel=3)
        else:
            warnings.warn(f"{name}: coefficients are not decreasing", stacklevel=3)
    return c


def coeff_proxy_h1(c):
    """``sum_{n>=1} c_n / n``."""
    c = _nonneg(c, "coeff_proxy_h1")
    if len(c) < 2:
        return 0.0
    return float(np.sum(c[1:] / np.arange(1, len(c))))


def _tail_estimate(terms):
    """Tail ``sum_{n>N} t_n`` assuming ``t_n ~ C n^-q`` near the end."""
    N = len(terms)
    if N < 8 or terms[-1] <= 0:
        return 0.0, math.inf
    h = N // 2
    t_h, t_N = terms[h - 1], terms[-1]
    if t_h <= 0:
        return 0.0, math.inf
    q = math.log(t_h / t_N) / math.log(N / h)
    if q <= 1.0 + 1e-9:
        return math.nan, q
    # Euler-Maclaurin for sum_{n>N} C n^-q with t_N = C N^-q
    return t_N * (N / (q - 1.0) - 0.5 + q / (12.0 * N)), q


def _proxy_sum(c, p, power, name):
    if not 1 < p < math.inf:
        raise ValueError(f"{name}: p must satisfy 1 < p < inf, got {p}")
    c = _nonneg(c, name)
    n = np.arange(1, len(c), dtype=float)
    terms = n ** power * c[1:] ** p
    partial_p = float(np.sum(terms))
    N = len(terms)
    decade = terms[N - N // 10:] if N >= 10 else terms
    inc = float(np.sum(decade))
    tail, q = _tail_estimate(terms)
    partial = partial_p ** (1.0 / p)
    if math.isnan(tail):
        return ProxySum(float(partial), float(partial), math.nan, inc, GROWING)
    value = (partial_p + tail) ** (1.0 / p)
    return ProxySum(float(value), float(partial), float(tail), inc, STABLE)


def coeff_proxy_hp(c, p):
    """``(sum_{n>=1} n^(p-2) c_n^p)^(1/p)`` with tail diagnostic."""
    return _proxy_sum(c, p, p - 2.0, "coeff_proxy_hp")


def coeff_proxy_bp(c, p):
    """``(sum_{n>=1} n^(p-1) c_n^p)^(1/p)`` with tail diagnostic."""
    return _proxy_sum(c, p, p - 1.0, "coeff_proxy_bp")


@dataclass(frozen=True)
class DecaySup:
    value: float
    argmax: int
    growing: bool


def decay_sup(c, tol=SUP_TOL):
    """``max_{n>=1} n c_n``; ``growing`` when the upper half of the index
    range beats the lower half by more than ``tol``."""
    c = np.abs(np.asarray(_coeffs(c)))
    if len(c) < 2:
        return DecaySup(0.0, 0, False)
    nc = np.arange(1, len(c)) * c[1:]
    i = int(np.argmax(nc))
    h = max(1, len(nc) // 2)
    lower, upper = float(nc[:h].max()), float(nc[h:].max()) if len(nc) > h else 0.0
    return DecaySup(float(nc[i]), i + 1, upper > lower * (1 + tol))
