"""Finite positive measures on [0, 1): moments, tail masses and Carleson-type
classification.

Three variants are supported:

* :class:`Atomic` -- finitely many point masses;
* :class:`PowLog` -- density ``c (1-t)^(alpha-1) log(e/(1-t))^gamma``;
* :class:`Tabulated` -- a density sampled on a grid, linearly interpolated.

Every variant can hand out a :class:`QuadratureRule` for a subinterval, and
all integrals (moments, tails, the integral operator) are sums against such a
rule. Densities near ``t = 1`` are integrated in the variable
``x = log(1/(1-t))`` where ``(1-t)^(alpha-1) dt = e^(-alpha x) dx`` and the
moment kernel ``t^n = (1 - e^-x)^n`` is an entire function with a transition
of fixed width around ``x = log n``. A composite Gauss-Legendre rule with
unit panels therefore resolves all moment orders uniformly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.special import roots_legendre

from .errors import QuadratureError, SpecError
from .growth import BOUNDED, classify_growth

#: Absolute moment tolerance for density measures.
DENSITY_TOL = 1e-10
#: Tabulated densities are only trusted to this accuracy.
TABLE_TOL = 1e-6
MAX_LEVEL = 5

_GL_NODES = 16
_CHUNK = 2048
# exp(-745) underflows to zero in double precision
_UNDERFLOW = 745.0
_UNITY = 1e-17


@lru_cache(maxsize=None)
def _legendre01(q):
    x, w = roots_legendre(q)
    return (x + 1.0) / 2.0, w / 2.0


def _composite_gl(lo, hi, h, q):
    """Composite Gauss-Legendre nodes/weights on ``[lo, hi]`` with panels of
    width at most ``h`` and ``q`` nodes per panel."""
    if hi <= lo:
        return np.empty(0), np.empty(0)
    npan = max(1, int(math.ceil((hi - lo) / h - 1e-12)))
    edges = np.linspace(lo, hi, npan + 1)
    xr, wr = _legendre01(q)
    widths = np.diff(edges)
    nodes = (edges[:-1, None] + widths[:, None] * xr[None, :]).ravel()
    weights = (widths[:, None] * wr[None, :]).ravel()
    return nodes, weights


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes in ``t`` (with ``1-t`` and ``log t`` kept to full relative
    precision) and weights that already include the measure's density."""

    t: np.ndarray
    one_minus_t: np.ndarray
    log_t: np.ndarray
    weights: np.ndarray

    def integrate(self, values):
        return np.dot(self.weights, values)

    def __len__(self):
        return len(self.weights)


def _rule_from_x(x, wx, density_x):
    """Rule in the variable ``x = log(1/(1-t))``."""
    omt = np.exp(-x)
    t = -np.expm1(-x)
    log_t = np.log1p(-omt) if len(x) else np.empty(0)
    with np.errstate(divide="ignore"):
        log_t = np.where(t > 0, log_t, -np.inf)
    return QuadratureRule(t, omt, log_t, wx * density_x(x))


@dataclass(frozen=True)
class MomentTable:
    """Moments ``mu_0..mu_M`` with per-entry absolute error bounds."""

    measure: "RadialMeasure"
    values: np.ndarray
    error_bound: np.ndarray
    level: int = 0

    def __len__(self):
        return len(self.values)

    def __getitem__(self, item):
        return self.values[item]

    @property
    def M(self):
        return len(self.values) - 1

    def is_monotone(self):
        """Nonincreasing and nonnegative within the error bounds."""
        v, e = self.values, self.error_bound
        slack = e[1:] + e[:-1]
        return bool(np.all(v >= -e) and np.all(np.diff(v) <= slack))


def _moments_from_rule(rule: QuadratureRule, M: int) -> np.ndarray:
    """``sum_j w_j t_j^n`` for ``n = 0..M`` with a moving node window.

    For a chunk ``[n0, n1]`` nodes with ``n0 |log t| > 745`` underflow and are
    skipped; nodes with ``n1 |log t| < 1e-17`` have ``t^n == 1`` in double
    precision and are added through a suffix sum of weights.
    """
    out = np.zeros(M + 1)
    if len(rule) == 0:
        return out
    a = -rule.log_t
    w = rule.weights
    zero = np.isinf(a)
    out[0] += w[zero].sum()
    a, w = a[~zero], w[~zero]
    order = np.argsort(-a, kind="stable")
    a, w = a[order], w[order]
    # suffix[i] = sum of w[i:]
    suffix = np.concatenate([np.cumsum(w[::-1])[::-1], [0.0]])
    neg_a = -a
    for n0 in range(0, M + 1, _CHUNK):
        n1 = min(n0 + _CHUNK, M + 1) - 1
        ns = np.arange(n0, n1 + 1, dtype=float)
        lo = 0 if n0 == 0 else int(np.searchsorted(neg_a, -_UNDERFLOW / n0, side="left"))
        hi = int(np.searchsorted(neg_a, -_UNITY / max(n1, 1), side="right"))
        hi = max(hi, lo)
        block = np.exp(np.multiply.outer(ns, -a[lo:hi])) @ w[lo:hi]
        out[n0:n1 + 1] += block + suffix[hi]
    return out


class RadialMeasure:
    """Common interface of the measure variants."""

    default_tol = DENSITY_TOL

    def rule(self, lower=0.0, upper=1.0, level=0) -> QuadratureRule:
        raise NotImplementedError

    def scaled(self, c) -> "RadialMeasure":
        raise NotImplementedError

    def log_weighted(self) -> "RadialMeasure":
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        return False

    def integrate(self, func, lower=0.0, upper=1.0, level=0):
        """``int_[lower, upper) func dmu``; ``func`` receives a rule."""
        r = self.rule(lower, upper, level)
        return r.integrate(func(r))

    def total_mass(self):
        return self.tail_mass(0.0)

    def tail_mass(self, b, tol=None):
        if not 0.0 <= b < 1.0:
            raise ValueError(f"b must lie in [0, 1), got {b}")
        tol = self.default_tol if tol is None else tol
        return _refine_scalar(lambda lev: self.rule(b, 1.0, lev).weights.sum(),
                              self.exact, tol)

    def moment(self, n, tol=None):
        if n < 0 or int(n) != n:
            raise ValueError(f"moment order must be a nonnegative integer, got {n}")
        n = int(n)
        tol = self.default_tol if tol is None else tol
        if n == 0:
            return self.total_mass()
        def compute(lev):
            rule = self.rule(level=lev)
            return float(np.dot(rule.weights, np.exp(n * rule.log_t)))

        return _refine_scalar(compute, self.exact, tol)

    def moments_upto(self, M, tol=None) -> MomentTable:
        tol = self.default_tol if tol is None else tol
        return _cached_table(self, int(M), float(tol))


def _refine_scalar(compute, exact, tol):
    prev = compute(0)
    if exact:
        return prev
    for lev in range(1, MAX_LEVEL + 1):
        cur = compute(lev)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise QuadratureError("quadrature did not converge", estimate=prev,
                          bound=abs(cur - prev))


def _sample_indices(M):
    small = np.arange(min(M, 64) + 1)
    big = np.unique(np.geomspace(1, max(M, 1), 96).astype(int))
    return np.unique(np.concatenate([small, big[big <= M], [M]]))


@lru_cache(maxsize=64)
def _cached_table(measure: RadialMeasure, M: int, tol: float) -> MomentTable:
    if M < 0:
        raise ValueError("M must be nonnegative")
    if measure.exact:
        vals = _moments_from_rule(measure.rule(), M)
        bound = 4 * np.finfo(float).eps * vals + 1e-300
        return MomentTable(measure, vals, bound, 0)
    idx = _sample_indices(M)
    level = 0
    vals = _moments_from_rule(measure.rule(level=level), M)
    while True:
        finer = _moments_from_rule(measure.rule(level=level + 1), int(idx[-1]))[idx]
        diff = np.max(np.abs(finer - vals[idx]))
        bound = 10.0 * diff + 64 * np.finfo(float).eps * (vals + vals[0])
        if np.max(bound) <= tol or level >= MAX_LEVEL:
            break
        level += 1
        vals = _moments_from_rule(measure.rule(level=level), M)
    if np.max(bound) > tol:
        raise QuadratureError(
            f"moments of {measure!r} did not reach tol={tol:g}",
            estimate=vals, bound=float(np.max(bound)))
    vals.setflags(write=False)
    return MomentTable(measure, vals, bound, level)


@dataclass(frozen=True)
class Atomic(RadialMeasure):
    """Point masses ``sum_i w_i delta_{t_i}`` with ``0 <= t_i < 1``, ``w_i > 0``."""

    atoms: tuple = ()

    def __post_init__(self):
        atoms = tuple((float(t), float(w)) for t, w in self.atoms)
        for t, w in atoms:
            if not 0.0 <= t < 1.0:
                raise ValueError(f"atom location {t} outside [0, 1)")
            if not w > 0.0 or not math.isfinite(w):
                raise ValueError(f"atom weight {w} must be positive and finite")
        object.__setattr__(self, "atoms", atoms)

    default_tol = 1e-12

    @property
    def exact(self):
        return True

    def rule(self, lower=0.0, upper=1.0, level=0):
        sel = [(t, w) for t, w in self.atoms if lower <= t < upper]
        t = np.array([s[0] for s in sel], dtype=float)
        w = np.array([s[1] for s in sel], dtype=float)
        with np.errstate(divide="ignore"):
            log_t = np.log(t)
        return QuadratureRule(t, 1.0 - t, log_t, w)

    def scaled(self, c):
        return Atomic(tuple((t, c * w) for t, w in self.atoms))

    def log_weighted(self):
        # atoms at t = 0 carry zero log weight and drop out
        return Atomic(tuple((t, w * -math.log1p(-t)) for t, w in self.atoms if t > 0))


@dataclass(frozen=True)
class PowLog(RadialMeasure):
    """Density ``c (1-t)^(alpha-1) log(e/(1-t))^gamma log(1/(1-t))^log_power``.

    ``log_power`` is zero for user-built measures; :meth:`log_weighted`
    increments it.
    """

    c: float = 1.0
    alpha: float = 1.0
    gamma: float = 0.0
    log_power: int = 0

    def __post_init__(self):
        if not self.c > 0 or not math.isfinite(self.c):
            raise ValueError(f"PowLog needs c > 0, got {self.c}")
        if not self.alpha > 0:
            raise ValueError(f"PowLog needs alpha > 0 for finite mass, got {self.alpha}")
        if self.log_power < 0 or int(self.log_power) != self.log_power:
            raise ValueError("log_power must be a nonnegative integer")

    def density_x(self, x):
        """Density with respect to ``dx``, ``x = log(1/(1-t))``."""
        x = np.asarray(x, dtype=float)
        out = self.c * np.exp(-self.alpha * x + self.gamma * np.log1p(x))
        if self.log_power:
            out = out * x**self.log_power
        return out

    def density(self, t):
        t = np.asarray(t, dtype=float)
        x = -np.log1p(-t)
        return self.density_x(x) * np.exp(x)

    def x_cutoff(self):
        """Point beyond which the remaining mass is below ``1e-18 c``."""
        a, g, k = self.alpha, self.gamma, self.log_power
        x = 4.0
        while True:
            # once log-density decays at rate >= a/2 the tail is below f(x) / (a/2)
            rate = a - max(g, 0.0) / (1.0 + x) - k / x
            if rate >= 0.5 * a:
                logf = -a * x + g * math.log1p(x) + k * math.log(x)
                if logf - math.log(0.5 * a) < math.log(1e-18):
                    return x
            x += 1.0

    def rule(self, lower=0.0, upper=1.0, level=0):
        xlo = -math.log1p(-lower) if lower > 0 else 0.0
        xmax = self.x_cutoff()
        xhi = xmax if upper >= 1.0 else min(-math.log1p(-upper), xmax)
        h = 2.0 ** (-level)
        x, w = _composite_gl(xlo, max(xhi, xlo), h, _GL_NODES)
        return _rule_from_x(x, w, self.density_x)

    def scaled(self, c):
        return PowLog(self.c * c, self.alpha, self.gamma, self.log_power)

    def log_weighted(self):
        return PowLog(self.c, self.alpha, self.gamma, self.log_power + 1)


@dataclass(frozen=True)
class Tabulated(RadialMeasure):
    """Density sampled at ``t`` (strictly increasing, inside [0, 1]) and
    interpolated linearly; zero outside the sampled range."""

    t: tuple = ()
    values: tuple = ()
    log_power: int = 0
    source: str = field(default="", compare=False)

    default_tol = TABLE_TOL

    def __post_init__(self):
        t = tuple(float(v) for v in self.t)
        d = tuple(float(v) for v in self.values)
        if len(t) < 2 or len(t) != len(d):
            raise ValueError("tabulated density needs >= 2 matching samples")
        if any(b <= a for a, b in zip(t, t[1:])):
            raise ValueError("tabulated grid must be strictly increasing")
        if t[0] < 0 or t[-1] > 1:
            raise ValueError("tabulated grid must lie in [0, 1]")
        if any(v < 0 or not math.isfinite(v) for v in d):
            raise ValueError("tabulated density must be finite and nonnegative")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", d)

    def density(self, t):
        out = np.interp(t, self.t, self.values, left=0.0, right=0.0)
        if self.log_power:
            out = out * (-np.log1p(-np.asarray(t))) ** self.log_power
        return out

    def rule(self, lower=0.0, upper=1.0, level=0):
        grid = np.asarray(self.t)
        lo, hi = max(lower, grid[0]), min(upper, grid[-1])
        if hi <= lo:
            e = np.empty(0)
            return QuadratureRule(e, e, e, e)
        inner = grid[(grid > lo) & (grid < hi)]
        edges = np.concatenate([[lo], inner, [hi]])
        q = 8 * 2**level
        xr, wr = _legendre01(q)
        widths = np.diff(edges)
        t = (edges[:-1, None] + widths[:, None] * xr[None, :]).ravel()
        w = (widths[:, None] * wr[None, :]).ravel()
        omt = 1.0 - t
        return QuadratureRule(t, omt, np.log(t, where=t > 0, out=np.full_like(t, -np.inf)),
                              w * self.density(t))

    def scaled(self, c):
        return Tabulated(self.t, tuple(c * v for v in self.values), self.log_power, self.source)

    def log_weighted(self):
        return Tabulated(self.t, self.values, self.log_power + 1, self.source)


LEBESGUE = PowLog(1.0, 1.0, 0.0)


# ---------------------------------------------------------------------------
# functional interface


def moment(mu: RadialMeasure, n: int, tol=None) -> float:
    """``int t^n dmu``; exact for atomic measures."""
    return mu.moment(n, tol)


def moments_upto(mu: RadialMeasure, M: int, tol=None) -> MomentTable:
    return mu.moments_upto(M, tol)


def tail_mass(mu: RadialMeasure, b: float, tol=None) -> float:
    """``mu([b, 1))``."""
    return mu.tail_mass(b, tol)


def log_weighted(mu: RadialMeasure) -> RadialMeasure:
    """The measure ``log(1/(1-t)) dmu(t)``."""
    return mu.log_weighted()


def default_b_grid(J=20):
    """``b_j = 1 - 2^-j`` for ``j = 1..J``."""
    return 1.0 - 2.0 ** -np.arange(1, J + 1, dtype=float)


@dataclass(frozen=True)
class CarlesonReport:
    s: float
    alpha_log: float
    b: np.ndarray
    K: np.ndarray
    verdict: str
    sup: float | None
    argsup: float | None
    stable: bool

    @property
    def bounded(self):
        return self.verdict == BOUNDED


def carleson_quantity(mu, s, alpha_log, b):
    """``K(b) = mu([b,1)) log(e/(1-b))^alpha_log / (1-b)^s`` on an array."""
    b = np.atleast_1d(np.asarray(b, dtype=float))
    x = -np.log1p(-b)
    tails = np.array([mu.tail_mass(float(bi)) for bi in b])
    return tails * np.exp(alpha_log * np.log1p(x) + s * x)


def carleson_report(mu: RadialMeasure, s: float, alpha_log: float = 0.0,
                    b_grid=None, refine_tol=1e-2) -> CarlesonReport:
    """Tabulate ``K(b)`` and decide whether it stays bounded as ``b -> 1``.

    When bounded, the sup is re-evaluated with the geometric midpoints of the
    grid added; ``stable`` records whether it moved by less than
    ``refine_tol`` (relative).
    """
    if s <= 0:
        raise ValueError("s must be positive")
    if alpha_log < 0:
        raise ValueError("alpha_log must be nonnegative")
    b = default_b_grid() if b_grid is None else np.asarray(b_grid, dtype=float)
    if b.size == 0:
        raise ValueError("empty b grid")
    if np.any(np.diff(b) <= 0):
        raise ValueError("b grid must be strictly increasing")
    if b[0] < 0 or b[-1] >= 1:
        raise ValueError("b grid must lie in [0, 1)")
    K = carleson_quantity(mu, s, alpha_log, b)
    if b.size >= 2:
        verdict = classify_growth(1.0 / (1.0 - b), K)
    else:
        verdict = BOUNDED
    sup = argsup = None
    stable = False
    if verdict == BOUNDED:
        i = int(np.argmax(K))
        sup, argsup = float(K[i]), float(b[i])
        if b.size >= 2:
            mids = 1.0 - np.sqrt((1.0 - b[:-1]) * (1.0 - b[1:]))
            sup2 = max(sup, float(np.max(carleson_quantity(mu, s, alpha_log, mids))))
            stable = abs(sup2 - sup) <= refine_tol * max(abs(sup2), 1e-300)
        else:
            stable = True
    return CarlesonReport(s, alpha_log, b, K, verdict, sup, argsup, stable)


def is_log_carleson(mu, b_grid=None) -> bool:
    """1-logarithmic 1-Carleson classification (``s = 1``, ``alpha_log = 1``)."""
    return carleson_report(mu, 1.0, 1.0, b_grid).verdict == BOUNDED


# ---------------------------------------------------------------------------
# spec grammar


def _parse_float(tok, whole):
    try:
        v = float(tok)
    except ValueError:
        raise SpecError(f"bad number {tok!r} in measure spec {whole!r}", token=tok) from None
    if not math.isfinite(v):
        raise SpecError(f"non-finite number {tok!r} in measure spec {whole!r}", token=tok)
    return v


def read_density_table(path) -> Tabulated:
    """Two-column CSV ``t, density`` (an optional header row is skipped)."""
    ts, ds = [], []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 2:
                raise SpecError(f"{path}:{i + 1}: expected 2 columns, got {row!r}",
                                token=",".join(row))
            try:
                t, d = float(row[0]), float(row[1])
            except ValueError:
                if i == 0:
                    continue
                raise SpecError(f"{path}:{i + 1}: bad row {row!r}",
                                token=",".join(row)) from None
            ts.append(t)
            ds.append(d)
    try:
        return Tabulated(tuple(ts), tuple(ds), source=str(path))
    except ValueError as exc:
        raise SpecError(f"{path}: {exc}", token=str(path)) from None


def parse_measure(spec: str, base_dir=None) -> RadialMeasure:
    """Parse ``atoms:t1:w1[,t2:w2...]``, ``powlog:c=..,alpha=..,gamma=..`` or
    ``table:<path>``. Missing powlog keys default to ``c=1, alpha=1, gamma=0``.
    """
    spec = spec.strip()
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise SpecError(f"measure spec {spec!r} lacks a 'kind:' prefix", token=spec)
    kind = kind.strip().lower()
    if kind == "atoms":
        atoms = []
        for item in rest.split(","):
            parts = item.split(":")
            if len(parts) != 2:
                raise SpecError(f"atom {item!r} must be 't:w' in {spec!r}", token=item)
            t, w = (_parse_float(p.strip(), spec) for p in parts)
            atoms.append((t, w))
        try:
            return Atomic(tuple(atoms))
        except ValueError as exc:
            raise SpecError(f"{exc} in {spec!r}", token=rest) from None
    if kind == "powlog":
        params = {"c": 1.0, "alpha": 1.0, "gamma": 0.0}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, eq, val = item.partition("=")
            key = key.strip().lower()
            if not eq or key not in params:
                raise SpecError(f"unknown powlog parameter {item!r} in {spec!r}", token=item)
            params[key] = _parse_float(val.strip(), spec)
        try:
            return PowLog(params["c"], params["alpha"], params["gamma"])
        except ValueError as exc:
            bad = "alpha" if params["alpha"] <= 0 else "c"
            raise SpecError(f"{exc} in {spec!r}", token=f"{bad}={params[bad]:g}") from None
    if kind == "table":
        path = Path(rest.strip())
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        if not path.is_file():
            raise SpecError(f"density table {rest!r} not found", token=rest)
        return read_density_table(path)
    raise SpecError(f"unknown measure kind {kind!r} in {spec!r}", token=kind)


def format_measure(mu: RadialMeasure) -> str:
    if isinstance(mu, Atomic):
        return "atoms:" + ",".join(f"{t:g}:{w:g}" for t, w in mu.atoms)
    if isinstance(mu, PowLog):
        return f"powlog:c={mu.c:g},alpha={mu.alpha:g},gamma={mu.gamma:g}"
    if isinstance(mu, Tabulated):
        return f"table:{mu.source}"
    return repr(mu)
