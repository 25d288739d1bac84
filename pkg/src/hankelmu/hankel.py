"""The truncated Hankel operator ``(mu_{n+k})`` acting on Taylor coefficients,
its fast circulant-embedding apply, and the integral twin
``I_mu f(z) = int f(t) / (1 - t z) dmu(t)``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np
import scipy.fft
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ConvergenceError, QuadratureError
from .measures import MAX_LEVEL, MomentTable, RadialMeasure, moments_upto
from .series import TaylorPoly, eval_poly

#: hard cap on ``|z|`` for :func:`imu_eval`
R_MAX = 0.999

# rows of the implied dense matrix materialised at once by apply_naive
_NAIVE_BLOCK_BYTES = 32 * 2**20


@dataclass(eq=False)
class HankelOperator:
    """``N x N`` truncation of the Hankel matrix with entries ``mu_{n+k}``.

    ``moments`` holds ``mu_0..mu_{2N-2}``. The FFT of the zero-padded moment
    symbol is computed on the first fast apply and then reused; a lock makes
    concurrent first calls safe.
    """

    N: int
    moments: np.ndarray
    error_bound: np.ndarray | None = None
    measure: RadialMeasure | None = None
    _plan: tuple | None = field(default=None, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        m = np.asarray(self.moments, dtype=float)
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if len(m) < 2 * self.N - 1:
            raise ValueError(f"need {2 * self.N - 1} moments, got {len(m)}")
        self.moments = m[: 2 * self.N - 1]

    @classmethod
    def from_table(cls, table: MomentTable, N: int) -> "HankelOperator":
        return cls(N, table.values[: 2 * N - 1], table.error_bound[: 2 * N - 1], table.measure)

    def dense(self):
        """The explicit matrix; only sensible for small ``N``."""
        return sliding_window_view(self.moments, self.N).copy()

    def entry(self, n, k):
        return self.moments[n + k]

    @property
    def plan(self):
        if self._plan is None:
            with self._lock:
                if self._plan is None:
                    L = 1 << int(np.ceil(np.log2(max(2 * self.N, 2))))
                    self._plan = (L, scipy.fft.rfft(self.moments, n=L))
        return self._plan

    def __matmul__(self, a):
        return apply_fast(self, a)


def build(mu: RadialMeasure, N: int, tol=None) -> HankelOperator:
    """Hankel operator of size ``N`` from ``moments_upto(mu, 2N-2)``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    table = moments_upto(mu, 2 * N - 2, tol)
    return HankelOperator.from_table(table, N)


def _check(H, a):
    a = np.asarray(a)
    if a.shape[0] != H.N:
        raise ValueError(f"coefficient vector has length {a.shape[0]}, operator size is {H.N}")
    return a


def apply_naive(H: HankelOperator, a):
    """Direct ``c_n = sum_k mu_{n+k} a_k``; ``O(N^2)`` per vector.

    ``a`` may also be an ``(N, m)`` array of column vectors. Rows of the
    matrix are materialised in blocks so that memory stays bounded.
    """
    a = _check(H, a)
    N = H.N
    rows = sliding_window_view(H.moments, N)
    out = np.empty(a.shape, dtype=np.result_type(a.dtype, float))
    step = max(1, _NAIVE_BLOCK_BYTES // (8 * N))
    for n0 in range(0, N, step):
        block = np.ascontiguousarray(rows[n0:n0 + step])
        out[n0:n0 + step] = block @ a
    return out


def _apply_real(H, a):
    L, sym = H.plan
    N = H.N
    # reversing the input turns the Hankel correlation into a convolution whose
    # entries N-1..2N-2 are free of wrap-around once L >= 2N-1
    spec = scipy.fft.rfft(a[::-1], n=L, axis=0)
    if a.ndim == 2:
        conv = scipy.fft.irfft(sym[:, None] * spec, n=L, axis=0)
    else:
        conv = scipy.fft.irfft(sym * spec, n=L)
    return conv[N - 1:2 * N - 1]


def apply_fast(H: HankelOperator, a):
    """Same result as :func:`apply_naive` in ``O(N log N)`` via FFT."""
    a = _check(H, a)
    if np.iscomplexobj(a):
        return _apply_real(H, a.real) + 1j * _apply_real(H, a.imag)
    return _apply_real(H, a.astype(float, copy=False))


def apply_series(H: HankelOperator, f: TaylorPoly) -> TaylorPoly:
    """``H_mu f`` truncated to ``N`` output coefficients; ``f`` is padded or
    must fit in the operator."""
    if len(f) > H.N:
        raise ValueError(f"series of length {len(f)} exceeds operator size {H.N}")
    return TaylorPoly(apply_fast(H, f.padded(H.N).coeffs))


@dataclass(frozen=True)
class NormEstimate:
    value: float
    iterations: int
    converged: bool


def operator_norm_truncated(H: HankelOperator, tol=1e-12, max_iter=20000,
                            return_info=False):
    """Top eigenvalue (= norm, the matrix being symmetric and positive) by
    power iteration from the normalised all-ones vector.

    Stops when the Rayleigh quotient changes by less than ``tol`` relative.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    v = np.full(H.N, 1.0 / np.sqrt(H.N))
    w = apply_fast(H, v)
    lam = float(v @ w)
    for it in range(1, max_iter + 1):
        nrm = np.linalg.norm(w)
        if nrm == 0:
            lam = 0.0
            break
        v = w / nrm
        w = apply_fast(H, v)
        new = float(v @ w)
        if abs(new - lam) <= tol * abs(new):
            lam = new
            break
        lam = new
    else:
        raise ConvergenceError(f"power iteration did not converge in {max_iter} steps",
                               estimate=lam)
    if return_info:
        return NormEstimate(lam, it, True)
    return lam


# ---------------------------------------------------------------------------
# integral operator


def _imu_rule_sum(rule, f, z):
    z = np.asarray(z, dtype=complex)
    ft = eval_poly(f, rule.t) if len(rule) else np.empty(0)
    w = rule.weights * ft
    # (1 - t z) = (1-z) + (1-t) z keeps precision for t near 1
    denom = (1.0 - z)[..., None] + np.multiply.outer(z, rule.one_minus_t)
    return (w / denom).sum(axis=-1)


def imu_eval(mu: RadialMeasure, f: TaylorPoly, z, tol=1e-12, r_max=R_MAX):
    """``I_mu f(z)`` by quadrature; ``z`` scalar or array with ``|z| <= r_max``.

    Quadrature levels are raised until two successive estimates differ by
    less than ``tol / (1 - |z|)``.
    """
    zz = np.asarray(z, dtype=complex)
    r = np.abs(zz)
    if np.any(r > r_max):
        raise ValueError(f"|z| must not exceed r_max={r_max}")
    prev = _imu_rule_sum(mu.rule(level=0), f, zz)
    if mu.exact:
        return prev if prev.ndim else prev[()]
    allowed = tol / (1.0 - r)
    for lev in range(1, MAX_LEVEL + 1):
        cur = _imu_rule_sum(mu.rule(level=lev), f, zz)
        if np.all(np.abs(cur - prev) <= allowed):
            return cur if cur.ndim else cur[()]
        prev = cur
    raise QuadratureError("I_mu quadrature did not converge", estimate=cur,
                          bound=float(np.max(np.abs(cur - prev))))


@dataclass(frozen=True)
class AgreementReport:
    grid: np.ndarray
    max_abs: float
    max_rel: float
    N: int
    quad_tol: float
    stable: bool
    tail_estimate: float

    @property
    def deviation(self):
        return self.max_abs


def default_grid(r_max=0.9, n_radii=4, n_angles=16):
    radii = np.linspace(0.0, r_max, n_radii)
    theta = 2 * np.pi * np.arange(n_angles) / n_angles
    pts = np.concatenate([[0.0], (radii[1:, None] * np.exp(1j * theta)[None, :]).ravel()])
    return pts.astype(complex)


def agreement_check(mu: RadialMeasure, f: TaylorPoly, grid=None, N0=32,
                    N_max=2**14, quad_tol=1e-13, stab_tol=1e-14) -> AgreementReport:
    """Compare the truncated series ``H_mu f`` with ``I_mu f`` on ``grid``.

    The truncation doubles from ``max(N0, len(f))`` until the series values on
    the grid stop moving (change below ``stab_tol`` relative to their size)
    or ``N_max`` is reached, in which case the report is flagged unstable.
    """
    z = default_grid() if grid is None else np.asarray(grid, dtype=complex).ravel()
    if z.size == 0:
        raise ValueError("empty evaluation grid")
    ref = np.atleast_1d(imu_eval(mu, f, z, tol=quad_tol))
    N = max(N0, len(f))
    table = moments_upto(mu, 2 * N_max - 2)
    prev = None
    stable = False
    while True:
        H = HankelOperator.from_table(table, N)
        out = apply_series(H, f)
        vals = eval_poly(out, z)
        scale = max(np.max(np.abs(vals)), 1e-300)
        if prev is not None and np.max(np.abs(vals - prev)) <= stab_tol * scale:
            stable = True
            break
        if N >= N_max:
            break
        prev = vals
        N = min(2 * N, N_max)
    dev = np.abs(vals - ref)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(np.abs(ref) > 0, dev / np.abs(ref), dev)
    rz = float(np.max(np.abs(z)))
    tail = float(np.abs(out.coeffs[-1]) * rz**N / max(1 - rz, 1e-300))
    return AgreementReport(z, float(dev.max()), float(rel.max()), N, quad_tol, stable, tail)
