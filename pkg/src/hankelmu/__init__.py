"""Hankel operators induced by radial measures on [0, 1).

The package computes moments and Carleson quantities of radial measures,
builds the Hankel matrix ``(mu_{n+k})`` with a fast FFT apply, evaluates
function-space norms of truncated Taylor series and runs desk-scale
experiments comparing operator growth with the measure's tail.
"""

from .errors import ConvergenceError, HankelMuError, QuadratureError, SpecError
from .growth import (BOUNDED, DIVERGING, INCONCLUSIVE, GrowthFit, classify_growth,
                     fit_verdict, growth_exponent_fit, series_verdict)
from .hankel import (AgreementReport, HankelOperator, agreement_check, apply_fast,
                     apply_naive, apply_series, build, imu_eval, operator_norm_truncated)
from .measures import (LEBESGUE, Atomic, CarlesonReport, MomentTable, PowLog, RadialMeasure,
                       Tabulated, carleson_report, format_measure, is_log_carleson,
                       log_weighted, moment, moments_upto, parse_measure, tail_mass)
from .norms import (SeminormEstimate, besov_seminorm, bloch_seminorm, circle_mean,
                    coeff_proxy_bp, coeff_proxy_h1, coeff_proxy_hp, decay_sup, h2_norm,
                    lambda12_proxy, qs_seminorm)
from .series import (TaylorPoly, derivative, eval_poly, family_F_log, family_fb_h1,
                     family_fb_hp, family_gb_besov, family_one, parse_family)

__version__ = "0.1.0"
