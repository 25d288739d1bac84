"""
Desk-scale b-sweeps: the growth of ||H_mu f_b|| as b -> 1 tells bounded from
unbounded operators. The same runs are available as `hml sweep-h1` etc.
"""

from hankelmu.experiments import (ExperimentConfig, cmd_hinf_check, cmd_qs_check,
                                  cmd_sweep_h1, cmd_sweep_hp, sweep_csv)

cfg = ExperimentConfig()

## H^1: Lebesgue grows like log(1/(1-b)), a log-Carleson density stays bounded
for spec in ("powlog:alpha=1", "powlog:alpha=1,gamma=-1"):
    res = cmd_sweep_h1(ExperimentConfig(measure=spec))
    print(res.summary(), "\n")

## H^2: (1-t)^(-1/2) dt gives V ~ (1-b)^(-1/2)
res = cmd_sweep_hp(ExperimentConfig(measure="powlog:alpha=0.5", p=2))
print(res.summary(), "\n")
print(sweep_csv(res).splitlines()[:3])

## H^infinity and the log-weighted moments
print(cmd_hinf_check(ExperimentConfig(measure="atoms:0.5:1")).summary())
print(cmd_qs_check(cfg).summary())
