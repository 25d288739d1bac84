import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankelmu import PowLog, tail_mass
from hankelmu.growth import (BOUNDED, DIVERGING, INCONCLUSIVE, GrowthFit, classify_growth,
                             fit_verdict, growth_exponent_fit, series_verdict)


def geometric_b(jmin, jmax, step=1.0):
    return 1 - 2.0 ** -np.arange(jmin, jmax + step / 2, step)


class TestFit:
    def test_pure_power(self):
        b = geometric_b(2, 20)
        fit = growth_exponent_fit(list(zip(b, (1 - b) ** -0.5)))
        assert fit.gamma == pytest.approx(0.5, abs=1e-6)
        assert fit.delta == pytest.approx(0.0, abs=1e-6)
        assert fit.residual < 1e-10

    def test_pure_log(self):
        # with offset 0 the log regressor is log log(1/(1-b)) and the fit is exact
        b = geometric_b(2, 20)
        fit = growth_exponent_fit(list(zip(b, -np.log1p(-b))), offset=0.0)
        assert fit.gamma == pytest.approx(0.0, abs=0.05)
        assert fit.delta == pytest.approx(1.0, abs=0.05)

    def test_pure_log_default_offset_nested(self):
        b = geometric_b(7, 13, 0.5)
        fit = growth_exponent_fit(list(zip(b, -np.log1p(-b))), nested=True)
        # log x against log(1 + x) on x in [4.9, 9] has slope about 1.15
        assert fit.gamma == 0.0
        assert 1.0 < fit.delta < 1.2

    def test_tail_ratio_log_decay(self):
        mu = PowLog(1, 1, -1)
        b = geometric_b(5, 40)
        pairs = [(bi, tail_mass(mu, bi) / (1 - bi)) for bi in b]
        fit = growth_exponent_fit(pairs, nested=True)
        assert fit.gamma == pytest.approx(0.0, abs=0.1)
        assert fit.delta == pytest.approx(-1.0, abs=0.1)

    def test_predict_round_trip(self):
        b = geometric_b(3, 15)
        v = 3.0 * (1 - b) ** -0.25 * np.log(np.e / (1 - b)) ** 0.7
        fit = growth_exponent_fit(list(zip(b, v)))
        np.testing.assert_allclose(fit.predict(b), v, rtol=1e-9)

    def test_errors(self):
        b = geometric_b(2, 5)
        with pytest.raises(ValueError):
            growth_exponent_fit(list(zip(b, np.ones_like(b))))
        with pytest.raises(ValueError):
            growth_exponent_fit([(0.5, 1.0)] * 10)
        with pytest.raises(ValueError):
            growth_exponent_fit([(0.5 + 0.01 * k, -1.0) for k in range(10)])
        with pytest.raises(ValueError):
            growth_exponent_fit([(0.0, 1.0)] + [(0.5 + 0.01 * k, 1.0) for k in range(9)],
                                offset=0.0)

    @given(st.floats(-1, 1), st.floats(-2, 2), st.floats(-3, 3))
    @settings(max_examples=40, deadline=None)
    def test_recovers_synthetic_exponents(self, gamma, delta, logc):
        b = geometric_b(1, 30)
        x = -np.log1p(-b)
        v = np.exp(logc + gamma * x + delta * np.log1p(x))
        fit = growth_exponent_fit(list(zip(b, v)))
        assert fit.gamma == pytest.approx(gamma, abs=1e-7)
        assert fit.delta == pytest.approx(delta, abs=1e-6)


@pytest.mark.parametrize("gamma,delta,verdict", [
    (0.0, 0.0, BOUNDED),
    (0.1, 0.1, BOUNDED),
    (-0.5, 3.0, BOUNDED),
    (0.5, 0.0, DIVERGING),
    (0.0, 1.0, DIVERGING),
    (0.2, 0.0, INCONCLUSIVE),
    (0.0, 0.25, INCONCLUSIVE),
])
def test_fit_verdict(gamma, delta, verdict):
    assert fit_verdict(GrowthFit(gamma, delta, 0.0, 0.0, 10)) == verdict


class TestClassifyGrowth:
    n = 2.0 ** np.arange(4, 15)

    def test_bounded(self):
        assert classify_growth(self.n, 1 - 1 / self.n) == BOUNDED
        assert classify_growth(self.n, 1 / self.n) == BOUNDED

    def test_log_growth(self):
        assert classify_growth(self.n, np.log(self.n)) == DIVERGING

    def test_sqrt_log_growth(self):
        assert classify_growth(self.n, np.sqrt(np.log(self.n))) == DIVERGING

    def test_power_growth(self):
        assert classify_growth(self.n, self.n**0.3) == DIVERGING

    def test_infinite(self):
        assert classify_growth(self.n, np.r_[np.ones(10), np.inf]) == DIVERGING

    def test_shape_check(self):
        with pytest.raises(ValueError):
            classify_growth([1.0], [1.0])


class TestSeriesVerdict:
    j = np.arange(8, 17)

    def test_geometric_finite(self):
        partials = 2 - 2.0 ** -(2.0**self.j)
        assert series_verdict(self.j, partials) == BOUNDED

    def test_harmonic_diverges(self):
        partials = np.log(2.0**self.j) + 0.5772
        assert series_verdict(self.j, partials) == DIVERGING

    def test_convergent_power_tail(self):
        # partial sums of 1/(n(n+1)) at n = 2^j
        partials = 1 - 2.0**-self.j
        assert series_verdict(self.j, partials) == BOUNDED

    def test_nonfinite(self):
        assert series_verdict(self.j, np.r_[np.ones(8), np.inf]) == DIVERGING
