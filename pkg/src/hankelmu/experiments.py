"""Desk-scale experiments: b-sweeps with growth fits, the H^infinity and Q_s
equivalence checks, operator/integral agreement and the apply benchmark.

Every command takes an :class:`ExperimentConfig` and returns a result object;
``write_*`` helpers turn results into deterministic CSV text.
"""

from __future__ import annotations

import io
import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np
from scipy.special import exp1

from .errors import QuadratureError, SpecError
from .growth import (BOUNDED, DIVERGING, INCONCLUSIVE, GrowthFit, classify_growth,
                     fit_verdict, growth_exponent_fit, series_verdict)
from .hankel import (HankelOperator, agreement_check, apply_fast, apply_naive,
                     apply_series)
from .measures import (RadialMeasure, carleson_report, is_log_carleson, log_weighted,
                       moments_upto, parse_measure)
from .norms import (circle_mean, coeff_proxy_bp, coeff_proxy_h1, coeff_proxy_hp,
                    decay_sup, lambda12_proxy)
from .series import FamilySpec, TaylorPoly, auto_degree, parse_family

DEGREE_CAP = 2**17
CSV_HEADER = ("b", "one_minus_b", "V", "L", "ratio", "proxy", "flag")

OK = "ok"
TRUNCATION_LIMITED = "truncation-limited"
TRUNCATION_UNSTABLE = "truncation-unstable"
ROW_DIVERGED = "diverged"

#: measures every consistency check runs over
BUILTIN_SUITE = (
    "powlog:c=1,alpha=1,gamma=0",
    "powlog:c=1,alpha=0.5,gamma=0",
    "powlog:c=1,alpha=1,gamma=-1",
    "powlog:c=1,alpha=1,gamma=-2",
    "powlog:c=1,alpha=2,gamma=0",
    "atoms:0.5:1",
)

_DEFAULT_FAMILY = {"sweep-h1": "fb1", "sweep-hp": "fbp", "sweep-besov": "gb"}


class InconsistentVerdict(RuntimeError):
    """Two routes to the same mathematical condition disagreed."""


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings shared by all commands.

    The sweep schedule is ``1 - b = 2^-j`` for ``j = jmin, jmin + jstep, ...,
    jmax``. ``degree`` is ``"auto"`` (``ceil(12/(1-b))`` capped at
    ``degree_cap``) or a fixed integer.
    """

    measure: str = "powlog:c=1,alpha=1,gamma=0"
    family: str | None = None
    p: float = 2.0
    jmin: float = 7.0
    jmax: float = 13.0
    jstep: float = 0.5
    degree: str | int = "auto"
    tol: float = 1e-10
    out: str | None = None
    plot: bool = False
    threads: int = 1
    degree_cap: int = DEGREE_CAP
    s: float = 1.0
    alpha_log: float = 1.0
    sizes: tuple = (2**10, 2**12, 2**14, 2**16)
    repeats: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.tol <= 0:
            raise SpecError(f"tol must be positive, got {self.tol}", token=str(self.tol))
        if self.jstep <= 0:
            raise SpecError(f"jstep must be positive, got {self.jstep}", token=str(self.jstep))
        if self.jmax < self.jmin:
            raise SpecError(f"empty schedule: jmin={self.jmin} > jmax={self.jmax}",
                            token=str(self.jmin))
        if self.threads < 1:
            raise SpecError(f"threads must be at least 1, got {self.threads}",
                            token=str(self.threads))
        if self.degree != "auto":
            try:
                deg = int(self.degree)
            except (TypeError, ValueError):
                raise SpecError(f"degree must be 'auto' or an integer, got {self.degree!r}",
                                token=str(self.degree)) from None
            if deg < 0:
                raise SpecError(f"degree must be nonnegative, got {deg}", token=str(deg))
            object.__setattr__(self, "degree", deg)
        # fail early on malformed specs
        self.measure_obj()
        if self.family is not None:
            parse_family(self.family)

    def measure_obj(self) -> RadialMeasure:
        base = os.path.dirname(self.out) if self.out else None
        return parse_measure(self.measure, base_dir=base)

    def family_spec(self, command) -> FamilySpec:
        return parse_family(self.family or _DEFAULT_FAMILY.get(command, "one"))

    def schedule(self) -> np.ndarray:
        n = int(math.floor((self.jmax - self.jmin) / self.jstep + 1e-9)) + 1
        return self.jmin + self.jstep * np.arange(n)

    def degree_for(self, b):
        """``(N, limited)`` for the input polynomial at ``b``."""
        if self.degree == "auto":
            want = auto_degree(b, cap=2**62)
        else:
            want = int(self.degree)
        return min(want, self.degree_cap), want > self.degree_cap


_FIELD_TYPES = {"p": float, "jmin": float, "jmax": float, "jstep": float, "tol": float,
                "threads": int, "degree_cap": int, "s": float, "alpha_log": float,
                "repeats": int, "seed": int}


def _coerce(key, value):
    if value is None:
        return None
    if key in _FIELD_TYPES:
        try:
            return _FIELD_TYPES[key](value)
        except (TypeError, ValueError):
            raise SpecError(f"bad value {value!r} for {key}", token=str(value)) from None
    if key == "plot":
        if isinstance(value, bool):
            return value
        return str(value).strip().lower() in {"1", "true", "yes", "on"}
    if key == "sizes":
        if isinstance(value, str):
            try:
                return tuple(int(v) for v in value.replace(";", ",").split(",") if v.strip())
            except ValueError:
                raise SpecError(f"bad size list {value!r}", token=value) from None
        return tuple(int(v) for v in value)
    return value


def config_from_mapping(mapping) -> ExperimentConfig:
    """Build a config from a dict of (possibly string) values; unknown keys
    raise :class:`SpecError`."""
    names = {f.name for f in fields(ExperimentConfig)}
    kwargs = {}
    for key, value in mapping.items():
        k = key.strip().replace("-", "_")
        if k not in names:
            raise SpecError(f"unknown config key {key!r}", token=key)
        kwargs[k] = _coerce(k, value)
    return ExperimentConfig(**kwargs)


def read_config_file(path) -> dict:
    """``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, value = line.partition("=")
            if not eq:
                raise SpecError(f"{path}:{lineno}: expected key=value, got {line!r}", token=line)
            out[key.strip()] = value.strip()
    return out


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepRow:
    b: float
    one_minus_b: float
    V: float
    L: float
    ratio: float | None
    proxy: float
    flag: str

    def csv_fields(self):
        def fmt(v):
            return "" if v is None else repr(float(v))
        return [fmt(self.b), fmt(self.one_minus_b), fmt(self.V), fmt(self.L),
                fmt(self.ratio), fmt(self.proxy), self.flag]


@dataclass
class SweepResult:
    command: str
    config: ExperimentConfig
    rows: list
    fit: GrowthFit | None
    verdict: str
    expected: str
    consistent: bool
    elapsed: float = field(default=0.0, compare=False)

    def summary(self):
        lines = [f"{self.command}: measure={self.config.measure}"]
        if self.fit is not None:
            lines.append(f"fit: gamma={self.fit.gamma:.4f} delta={self.fit.delta:.4f} "
                         f"residual={self.fit.residual:.3g} points={self.fit.n_points}")
        else:
            lines.append("fit: not enough untruncated rows")
        lines.append(f"verdict={self.verdict} expected={self.expected} "
                     f"consistent={'yes' if self.consistent else 'no'}")
        return "\n".join(lines)


def _lower_bound(kind, mu, b, p):
    """Tail-mass lower bound ``L(b)`` for ``V(b)``."""
    tail = mu.tail_mass(b)
    x = -math.log1p(-b)
    if kind == "h1":
        return tail * x / (1.0 - b)
    if kind == "hp":
        return tail / (1.0 - b)
    return (-math.log1p(-b * b)) ** ((p - 1.0) / p) * tail / (1.0 - b)


def _measure_output(kind, out, p):
    if kind == "besov":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return coeff_proxy_bp(_clip_rounding(out.coeffs), p).value
    return circle_mean(out, 1.0, 1.0 if kind == "h1" else p)


def _clip_rounding(c):
    """FFT apply leaves rounding-level negatives where exact values vanish."""
    c = np.asarray(c, dtype=float)
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    if np.any(c < -1e-12 * scale):
        raise ValueError("operator output has genuinely negative coefficients")
    return np.maximum(c, 0.0)


def _proxy(kind, out, p):
    c = _clip_rounding(out.coeffs)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if kind == "h1":
            return coeff_proxy_h1(c)
        if kind == "hp":
            return coeff_proxy_hp(c, p).value
        return coeff_proxy_bp(c, p).partial


def _sweep_row(kind, cfg, mu, fam, table, j, trunc_tol=1e-2):
    b = 1.0 - 2.0**-j
    N, limited = cfg.degree_for(b)
    f = fam(N, b=b, p=cfg.p)
    vals = []
    for size in (N + 1, 2 * (N + 1)):
        H = HankelOperator.from_table(table, size)
        out = apply_series(H, f)
        vals.append(_measure_output(kind, out, cfg.p))
    V = vals[-1]
    L = _lower_bound(kind, mu, b, cfg.p)
    if not math.isfinite(V):
        flag = ROW_DIVERGED
    elif limited:
        flag = TRUNCATION_LIMITED
    elif abs(vals[1] - vals[0]) > trunc_tol * abs(vals[1]):
        flag = TRUNCATION_UNSTABLE
    else:
        flag = OK
    ratio = V / L if L > 0 else None
    return SweepRow(b, 2.0**-j, V, L, ratio, _proxy(kind, out, cfg.p), flag)


def _expected_verdict(kind, mu, p):
    if kind == "h1":
        return BOUNDED if is_log_carleson(mu) else DIVERGING
    if kind == "hp":
        return BOUNDED if carleson_report(mu, 1.0, 0.0).bounded else DIVERGING
    # only the necessary direction is available for Besov spaces: failing the
    # (1 - 1/p)-log condition forces unboundedness
    if not carleson_report(mu, 1.0, 1.0 - 1.0 / p).bounded:
        return DIVERGING
    return BOUNDED if is_log_carleson(mu) else INCONCLUSIVE


def _run_sweep(command, kind, cfg: ExperimentConfig) -> SweepResult:
    t0 = time.perf_counter()
    mu = cfg.measure_obj()
    fam = cfg.family_spec(command)
    js = cfg.schedule()
    if kind == "besov" and 1.0 - 2.0 ** -js[0] <= 0.5:
        raise SpecError("Besov sweeps need b > 1/2 (jmin > 1)", token=str(cfg.jmin))
    if kind != "h1" and not 1 < cfg.p < math.inf:
        raise SpecError(f"p must satisfy 1 < p < inf, got {cfg.p}", token=str(cfg.p))
    n_max = max(cfg.degree_for(1.0 - 2.0**-j)[0] for j in js)
    table = moments_upto(mu, 4 * (n_max + 1), cfg.tol)

    def task(j):
        return _sweep_row(kind, cfg, mu, fam, table, float(j))

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(task, js))
    else:
        rows = [task(j) for j in js]

    pairs = [(r.b, r.V) for r in rows if r.flag in (OK, TRUNCATION_UNSTABLE) and r.V > 0]
    try:
        fit = growth_exponent_fit(pairs, nested=True)
        verdict = fit_verdict(fit)
    except ValueError:
        fit, verdict = None, INCONCLUSIVE
    expected = _expected_verdict(kind, mu, cfg.p if kind != "h1" else 1.0)
    consistent = verdict == INCONCLUSIVE or expected == INCONCLUSIVE or verdict == expected
    return SweepResult(command, cfg, rows, fit, verdict, expected, consistent,
                       time.perf_counter() - t0)


def cmd_sweep_h1(cfg: ExperimentConfig) -> SweepResult:
    """``V(b) = ||H_mu f_b||_{H^1}`` against ``L(b) = mu([b,1)) log(1/(1-b))/(1-b)``."""
    return _run_sweep("sweep-h1", "h1", cfg)


def cmd_sweep_hp(cfg: ExperimentConfig) -> SweepResult:
    """``V(b) = ||H_mu f_b||_{H^p}`` against ``L(b) = mu([b,1))/(1-b)``."""
    return _run_sweep("sweep-hp", "hp", cfg)


def cmd_sweep_besov(cfg: ExperimentConfig) -> SweepResult:
    """Coefficient Besov proxy of ``H_mu g_b`` against
    ``L(b) = log(1/(1-b^2))^((p-1)/p) mu([b,1))/(1-b)``."""
    return _run_sweep("sweep-besov", "besov", cfg)


def sweep_csv(result: SweepResult) -> str:
    buf = io.StringIO(newline="")
    buf.write(",".join(CSV_HEADER) + "\n")
    for row in result.rows:
        buf.write(",".join(row.csv_fields()) + "\n")
    return buf.getvalue()


def write_sweep_plot(result: SweepResult, path):
    """Log-log plot of ``V`` and ``L`` against ``1 - b`` as SVG."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x = [r.one_minus_b for r in result.rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.loglog(x, [r.V for r in result.rows], "o-", label="V(b)")
    pos = [(r.one_minus_b, r.L) for r in result.rows if r.L > 0]
    if pos:
        ax.loglog(*zip(*pos), "s--", label="L(b)")
    ax.invert_xaxis()
    ax.set_xlabel("1 - b")
    ax.set_title(f"{result.command}  {result.config.measure}", fontsize=8)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


# ---------------------------------------------------------------------------
# H^infinity equivalence


@dataclass
class Indicator:
    name: str
    scale: np.ndarray
    values: np.ndarray
    verdict: str

    @property
    def value(self):
        return float(self.values[-1])


@dataclass
class HinfReport:
    measure: str
    indicators: list
    boundary_value: float
    verdict: str
    consistent: bool

    def summary(self):
        lines = [f"hinf-check: measure={self.measure}"]
        for ind in self.indicators:
            lines.append(f"  {ind.name}: {ind.value!r} ({ind.verdict})")
        lines.append(f"  sup |H_mu 1| on |z|=0.999: {self.boundary_value!r}")
        lines.append(f"verdict={self.verdict}")
        return "\n".join(lines)


HINF_JS = tuple(range(8, 17))


def _inverse_one_minus_t(mu, upper, tol=1e-10):
    """``int_[0, upper) dmu/(1-t)`` with level refinement."""
    prev = mu.integrate(lambda r: 1.0 / r.one_minus_t, 0.0, upper, 0)
    if mu.exact:
        return float(prev)
    for lev in range(1, 4):
        cur = mu.integrate(lambda r: 1.0 / r.one_minus_t, 0.0, upper, lev)
        if abs(cur - prev) <= tol * abs(cur):
            return float(cur)
        prev = cur
    raise QuadratureError("integral of 1/(1-t) did not converge", estimate=float(cur),
                          bound=float(abs(cur - prev)))


def cmd_hinf_check(cfg: ExperimentConfig, r_max=0.999) -> HinfReport:
    """Three routes to ``H_mu 1`` being bounded.

    (a) partial sums of ``mu_n`` up to ``N = 2^j``, (b) the integral of
    ``1/(1-t)`` over ``[0, 1 - 2^-j)``, (c) the sup over the unit circle of
    the degree-``N`` truncation of ``H_mu 1``, whose coefficients are the
    moments. Each sequence is classified by its increments over ``j``.
    """
    mu = cfg.measure_obj()
    js = np.array(HINF_JS, dtype=float)
    Ns = (2 ** js).astype(int)
    table = moments_upto(mu, int(Ns[-1]), cfg.tol)
    mom = table.values
    partial = np.array([math.fsum(mom[:n]) for n in Ns])
    integral = np.array([_inverse_one_minus_t(mu, 1.0 - 2.0**-j) for j in js])
    sup = np.array([circle_mean(TaylorPoly(mom[:n]), 1.0, math.inf) for n in Ns])
    inds = [Indicator(name, js, vals, series_verdict(js, vals)) for name, vals in
            (("sum_mu_n", partial), ("int_dmu_over_1_minus_t", integral),
             ("sup_H_mu_one", sup))]
    boundary = circle_mean(TaylorPoly(mom[: Ns[-1]]), r_max, math.inf)
    verdicts = {ind.verdict for ind in inds}
    consistent = len(verdicts) == 1
    if consistent:
        verdict = "equivalent-finite" if BOUNDED in verdicts else "equivalent-infinite"
    else:
        verdict = "inconsistent"
    return HinfReport(cfg.measure, inds, boundary, verdict, consistent)


def hinf_csv(report: HinfReport) -> str:
    buf = io.StringIO(newline="")
    buf.write("j," + ",".join(ind.name for ind in report.indicators) + "\n")
    for i, j in enumerate(report.indicators[0].scale):
        buf.write(repr(float(j)) + "," + ",".join(repr(float(ind.values[i]))
                                                  for ind in report.indicators) + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Q_s / F_log check


@dataclass
class QsReport:
    measure: str
    n: np.ndarray
    n_sigma: np.ndarray
    decay_value: float
    decay_argmax: int
    decay_verdict: str
    identity_error: float
    identity_tol: float
    lambda_value: float
    lambda_flag: str
    lambda_verdict: str
    expected: str
    consistent: bool

    @property
    def identity_ok(self):
        return self.identity_error <= self.identity_tol

    def summary(self):
        return "\n".join([
            f"qs-check: measure={self.measure}",
            f"  sup n*sigma_n = {self.decay_value!r} at n={self.decay_argmax} "
            f"({self.decay_verdict})",
            f"  identity sum_k mu_(n+k)/k = sigma_n: max error {self.identity_error:.3g} "
            f"(tol {self.identity_tol:g})",
            f"  mean Lipschitz proxy of H_mu F: {self.lambda_value!r} ({self.lambda_flag})",
            f"verdict={self.decay_verdict} expected={self.expected} "
            f"consistent={'yes' if self.consistent else 'no'}",
        ])


def log_kernel_tail(rule, n, K):
    """``sum_{k >= K} int t^(n+k)/k dmu`` by Euler-Maclaurin in ``k``.

    With ``lam = log(1/t)`` and ``g(x) = e^(-lam x)/x`` the tail is
    ``t^n [E1(K lam) + g(K)/2 - g'(K)/12 + g'''(K)/720]``; the next term is
    far below double precision once ``K`` is in the thousands.
    """
    t = rule.t
    w = rule.weights
    mask = (t > 0) & (w != 0)
    lam = -rule.log_t[mask]
    tn = np.exp(n * rule.log_t[mask])
    e = np.exp(-lam * K)
    g1 = -e * (lam / K + 1.0 / K**2)
    g3 = -e * (lam**3 / K + 3 * lam**2 / K**2 + 6 * lam / K**3 + 6.0 / K**4)
    tail = exp1(K * lam) + e / (2 * K) - g1 / 12 + g3 / 720
    return float(np.dot(w[mask], tn * tail))


QS_NS = tuple(2**k for k in range(4, 15))
IDENTITY_NS = tuple(2**k for k in range(4, 11))


def cmd_qs_check(cfg: ExperimentConfig, identity_tol=1e-8, size=2**14) -> QsReport:
    """``sigma_n = int t^n log(1/(1-t)) dmu = O(1/n)`` against the
    coefficients of ``H_mu F``, ``F = log(1/(1-z))``."""
    mu = cfg.measure_obj()
    nu = log_weighted(mu)
    ns = np.array(QS_NS)
    sigma = moments_upto(nu, int(ns[-1]), cfg.tol).values
    ds = decay_sup(sigma)
    n_sigma = ns * sigma[ns]
    decay_verdict = classify_growth(ns.astype(float), n_sigma)

    table = moments_upto(mu, 2 * size - 2, cfg.tol)
    F = np.zeros(size)
    F[1:] = 1.0 / np.arange(1, size)
    H = HankelOperator.from_table(table, size)
    c = apply_fast(H, F)
    err = 0.0
    level = 0 if mu.exact else 2
    rule = mu.rule(level=level)
    finer = None if mu.exact else mu.rule(level=level + 1)
    for n in IDENTITY_NS:
        tail = log_kernel_tail(rule, n, size)
        if finer is not None:
            tail2 = log_kernel_tail(finer, n, size)
            err = max(err, abs(tail2 - tail))
            tail = tail2
        err = max(err, abs(c[n] + tail - sigma[n]) / max(1.0, abs(sigma[n])))
    lam = lambda12_proxy(c)
    lam_verdict = BOUNDED if lam.stable else DIVERGING
    expected = BOUNDED if is_log_carleson(mu) else DIVERGING
    consistent = decay_verdict == lam_verdict == expected
    return QsReport(cfg.measure, ns, n_sigma, ds.value, ds.argmax, decay_verdict, err,
                    identity_tol, lam.value, lam.flag, lam_verdict, expected, consistent)


def qs_csv(report: QsReport) -> str:
    buf = io.StringIO(newline="")
    buf.write("n,n_sigma_n\n")
    for n, v in zip(report.n, report.n_sigma):
        buf.write(f"{int(n)},{float(v)!r}\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# agreement, carleson, moments, bench


def cmd_agreement(cfg: ExperimentConfig, families=None):
    """Run :func:`agreement_check` for each family; default ``one`` and
    ``fb1:b=0.5``."""
    mu = cfg.measure_obj()
    specs = families or ([cfg.family] if cfg.family else ["one", "fb1:b=0.5"])
    reports = []
    for spec in specs:
        fam = parse_family(spec)
        if cfg.degree == "auto":
            N = auto_degree(fam.b) if fam.b is not None else 0
        else:
            N = int(cfg.degree)
        f = fam(N)
        reports.append((spec, agreement_check(mu, f)))
    return reports


def agreement_csv(reports) -> str:
    buf = io.StringIO(newline="")
    buf.write("family,N,max_abs,max_rel,stable\n")
    for spec, rep in reports:
        buf.write(f'"{spec}",{rep.N},{rep.max_abs!r},{rep.max_rel!r},{int(rep.stable)}\n')
    return buf.getvalue()


def cmd_carleson(cfg: ExperimentConfig):
    return carleson_report(cfg.measure_obj(), cfg.s, cfg.alpha_log)


def carleson_csv(report) -> str:
    buf = io.StringIO(newline="")
    buf.write("b,one_minus_b,K\n")
    for b, k in zip(report.b, report.K):
        buf.write(f"{float(b)!r},{float(1.0 - b)!r},{float(k)!r}\n")
    return buf.getvalue()


def cmd_moments(cfg: ExperimentConfig):
    M = 32 if cfg.degree == "auto" else int(cfg.degree)
    return moments_upto(cfg.measure_obj(), M, cfg.tol)


def moments_csv(table) -> str:
    buf = io.StringIO(newline="")
    buf.write("n,moment,error_bound\n")
    for n, (v, e) in enumerate(zip(table.values, table.error_bound)):
        buf.write(f"{n},{float(v)!r},{float(e)!r}\n")
    return buf.getvalue()


@dataclass(frozen=True)
class BenchRow:
    N: int
    naive_seconds: float
    fast_seconds: float
    rel_deviation: float

    @property
    def speedup(self):
        return self.naive_seconds / self.fast_seconds if self.fast_seconds > 0 else math.inf


def _median_time(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times)), out


def cmd_bench(cfg: ExperimentConfig, agree_tol=1e-10):
    """Median wall time of naive and FFT apply for each size in ``cfg.sizes``.

    The fast apply is timed on an operator whose FFT plan is already built,
    which is how it is used inside power iteration and sweeps.
    """
    mu = cfg.measure_obj()
    sizes = sorted(int(n) for n in cfg.sizes)
    if not sizes or sizes[0] < 1:
        raise SpecError("bench sizes must be positive", token=str(cfg.sizes))
    table = moments_upto(mu, 2 * sizes[-1] - 2, cfg.tol)
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for N in sizes:
        H = HankelOperator.from_table(table, N)
        a = rng.standard_normal(N)
        H.plan
        t_fast, fast = _median_time(lambda: apply_fast(H, a), cfg.repeats)
        t_naive, naive = _median_time(lambda: apply_naive(H, a), cfg.repeats)
        dev = float(np.linalg.norm(fast - naive) / max(np.linalg.norm(naive), 1e-300))
        if dev > agree_tol:
            raise QuadratureError(f"fast and naive apply disagree at N={N}", estimate=dev,
                                  bound=agree_tol)
        rows.append(BenchRow(N, t_naive, t_fast, dev))
    return rows


def bench_csv(rows) -> str:
    buf = io.StringIO(newline="")
    buf.write("N,naive_seconds,fast_seconds,speedup,rel_deviation\n")
    for r in rows:
        buf.write(f"{r.N},{r.naive_seconds!r},{r.fast_seconds!r},{r.speedup!r},"
                  f"{r.rel_deviation!r}\n")
    return buf.getvalue()


COMMANDS = {
    "sweep-h1": (cmd_sweep_h1, sweep_csv),
    "sweep-hp": (cmd_sweep_hp, sweep_csv),
    "sweep-besov": (cmd_sweep_besov, sweep_csv),
    "hinf-check": (cmd_hinf_check, hinf_csv),
    "qs-check": (cmd_qs_check, qs_csv),
    "agreement": (cmd_agreement, agreement_csv),
    "carleson": (cmd_carleson, carleson_csv),
    "moments": (cmd_moments, moments_csv),
    "bench": (cmd_bench, bench_csv),
}


def with_measure(cfg: ExperimentConfig, spec: str) -> ExperimentConfig:
    return replace(cfg, measure=spec)
