"""Acceptance suite.

Each test checks one numbered criterion at its stated tolerance and prints a
single ``criterion N: PASS|FAIL`` line with the measured quantities, whether
or not the assertion holds.
"""

import math

import numpy as np
import pytest
from scipy.special import beta

from hankelmu import (LEBESGUE, Atomic, HankelOperator, PowLog, TaylorPoly, agreement_check,
                      apply_fast, apply_naive, build, decay_sup, family_fb_h1,
                      is_log_carleson, lambda12_proxy, moments_upto, operator_norm_truncated)
from hankelmu.experiments import (BUILTIN_SUITE, COMMANDS, ExperimentConfig, cmd_bench,
                                  cmd_hinf_check, cmd_qs_check, cmd_sweep_besov,
                                  cmd_sweep_h1, cmd_sweep_hp, with_measure)
from hankelmu.growth import BOUNDED, DIVERGING
from hankelmu.norms import bloch_seminorm, qs_seminorm

BASE = ExperimentConfig()


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def test_criterion_01_moment_oracles(report):
    n = np.arange(10_001)
    leb = np.abs(moments_upto(LEBESGUE, 10_000).values - 1 / (n + 1)).max()
    m = np.arange(1001)
    got = moments_upto(PowLog(1, 0.5, 0), 1000).values
    rel = (np.abs(got - beta(m + 1, 0.5)) / beta(m + 1, 0.5)).max()
    report(1, leb < 1e-12 and rel < 1e-9,
           f"Lebesgue max abs error {leb:.2e} (<1e-12); Beta oracle max rel error "
           f"{rel:.2e} (<1e-9)")


def test_criterion_02_fast_apply(report):
    worst = {}
    rng = np.random.default_rng(2)
    table = moments_upto(LEBESGUE, 2 * 2**16)
    for N in (2**4, 2**8, 2**12, 2**16):
        H = HankelOperator.from_table(table, N)
        A = rng.standard_normal((N, 100))
        fast, naive = apply_fast(H, A), apply_naive(H, A)
        worst[N] = float((np.linalg.norm(fast - naive, axis=0)
                          / np.linalg.norm(naive, axis=0)).max())
    bench = cmd_bench(ExperimentConfig(sizes=(2**16,), repeats=5))[0]
    ok = max(worst.values()) < 1e-10 and bench.speedup >= 20
    detail = ", ".join(f"N={N}: {d:.1e}" for N, d in worst.items())
    report(2, ok, f"max rel deviation {detail} (<1e-10); N=65536 naive "
                  f"{bench.naive_seconds:.3f}s fast {bench.fast_seconds:.5f}s speedup "
                  f"{bench.speedup:.0f}x (>=20)")


def test_criterion_03_hilbert_norm(report):
    sizes = [2**k for k in range(12)]
    norms = [operator_norm_truncated(build(LEBESGUE, N)) for N in sizes]
    monotone = all(b >= a - 1e-12 for a, b in zip(norms, norms[1:]))
    dense = max(abs(operator_norm_truncated(build(LEBESGUE, N))
                    - np.linalg.eigvalsh(build(LEBESGUE, N).dense())[-1])
                / np.linalg.eigvalsh(build(LEBESGUE, N).dense())[-1]
                for N in (1, 2, 3, 8, 16, 32, 64, 100, 128))
    two = abs(norms[1] - (4 + math.sqrt(13)) / 6)
    top = norms[-1]
    ok = monotone and dense < 1e-8 and two < 1e-10 and 3.0 < top < math.pi
    report(3, ok, f"monotone={monotone}; dense oracle max rel {dense:.1e} (<1e-8); "
                  f"N=2 error {two:.1e} (<1e-10); N=2048 norm {top:.6f} (needs (3, pi))")


def test_criterion_04_integral_identity(report):
    atoms = [Atomic(((0.5, 1.0),)), Atomic(((0.2, 1.0), (0.9, 0.5), (0.0, 2.0)))]
    fs = [TaylorPoly(0.3 ** np.arange(60)), family_fb_h1(0.7, 100)]
    atomic = max(agreement_check(mu, f).max_abs for mu in atoms for f in fs)
    leb = agreement_check(LEBESGUE, family_fb_h1(0.5, 60))
    ok = atomic < 1e-12 and leb.max_abs < 1e-8 and leb.stable
    report(4, ok, f"atomic max deviation {atomic:.1e} (<1e-12); Lebesgue fb_h1(0.5) "
                  f"{leb.max_abs:.1e} (<1e-8), stable={leb.stable}")


def test_criterion_05_hinf_equivalence(report):
    verdicts = {}
    atom_values = None
    for spec in BUILTIN_SUITE:
        rep = cmd_hinf_check(with_measure(BASE, spec))
        verdicts[spec] = rep.verdict
        if spec == "atoms:0.5:1":
            atom_values = [ind.value for ind in rep.indicators]
    agree = all(v != "inconsistent" for v in verdicts.values())
    atom_ok = all(abs(v - 2) <= 1e-10 for v in atom_values)
    report(5, agree and atom_ok,
           "; ".join(f"{k}: {v}" for k, v in verdicts.items())
           + f"; atom indicators {[f'{v:.12f}' for v in atom_values]}")


def test_criterion_06_h1_rate(report):
    leb = cmd_sweep_h1(BASE)
    log_c = cmd_sweep_h1(with_measure(BASE, "powlog:alpha=1,gamma=-1"))
    ok = (abs(leb.fit.gamma) <= 0.15 and abs(leb.fit.delta - 1) <= 0.15
          and abs(log_c.fit.gamma) <= 0.15 and abs(log_c.fit.delta) <= 0.15
          and leb.elapsed + log_c.elapsed <= 300)
    report(6, ok, f"Lebesgue (gamma, delta) = ({leb.fit.gamma:.3f}, {leb.fit.delta:.3f}) "
                  f"target (0, 1); powlog(1,-1) = ({log_c.fit.gamma:.3f}, "
                  f"{log_c.fit.delta:.3f}) target (0, 0); time "
                  f"{leb.elapsed + log_c.elapsed:.1f}s")


def test_criterion_07_hp_rate(report):
    half = cmd_sweep_hp(with_measure(BASE, "powlog:alpha=0.5"))
    leb = cmd_sweep_hp(BASE)
    ok = abs(half.fit.gamma - 0.5) <= 0.1 and abs(leb.fit.gamma) <= 0.1
    report(7, ok, f"powlog(0.5) gamma {half.fit.gamma:.3f} (0.5 +- 0.1); Lebesgue gamma "
                  f"{leb.fit.gamma:.3f} (0 +- 0.1)")


def test_criterion_08_qs_grid(report):
    lines, ok = [], True
    for alpha in (0.5, 1.0, 1.5):
        for beta_ in (0, 1, 2):
            spec = f"powlog:c=1,alpha={alpha},gamma={-beta_}"
            rep = cmd_qs_check(with_measure(BASE, spec))
            expected = BOUNDED if is_log_carleson(PowLog(1, alpha, -beta_)) else DIVERGING
            good = rep.decay_verdict == expected and rep.identity_error <= 1e-8
            ok &= good
            lines.append(f"({alpha},{beta_}) {rep.decay_verdict[0]} "
                         f"err {rep.identity_error:.0e}")
    report(8, ok, "; ".join(lines))


def test_criterion_09_besov_rate(report):
    res = cmd_sweep_besov(BASE)
    ok = abs(res.fit.delta - 0.5) <= 0.15 and abs(res.fit.gamma) <= 0.1
    report(9, ok, f"Lebesgue Besov (gamma, delta) = ({res.fit.gamma:.3f}, "
                  f"{res.fit.delta:.3f}), target (0 +- 0.1, 0.5 +- 0.15)")


def test_criterion_10_coefficient_criteria(report):
    n = np.arange(1, 10_001, dtype=float)
    families = {"1/n": 1 / n, "2^-n": 2.0**-n, "n^-1/2": n**-0.5,
                "1/(n log^2(n+1))": 1 / (n * np.log(n + 1) ** 2)}
    iff, chain = {}, {}
    for name, vals in families.items():
        c = np.r_[0.0, vals]
        iff[name] = (not decay_sup(c).growing) == lambda12_proxy(c).stable
        f = TaylorPoly(np.r_[0.0, vals[:256]])
        lam = lambda12_proxy(f).stable
        bloch = bloch_seminorm(f).stable
        qs = [qs_seminorm(f, s).stable for s in (0.5, 1.0, 2.0)]
        chain[name] = all((not lam or q) and (not q or bloch) for q in qs)
    ok = all(iff.values()) and all(chain.values())
    report(10, ok, f"decay_sup iff lambda12 {iff}; inclusion chain {chain}")


def _config_for(command):
    if command.startswith("sweep"):
        return ExperimentConfig(jmin=5, jmax=9)
    if command == "bench":
        return ExperimentConfig(sizes=(2**10, 2**12), repeats=3)
    return BASE


def test_criterion_11_determinism(report):
    differing = []
    for command, (run, to_csv) in sorted(COMMANDS.items()):
        cfg = _config_for(command)
        if to_csv(run(cfg)) != to_csv(run(cfg)):
            differing.append(command)
    report(11, not differing, f"commands with differing CSV across reruns: {differing}")
