import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankelmu import (SpecError, TaylorPoly, derivative, eval_poly, family_F_log,
                      family_fb_h1, family_fb_hp, family_gb_besov, family_one, parse_family)
from hankelmu.series import (auto_degree, is_nonneg_decreasing, read_series_csv,
                             write_series_csv)


def test_fb_h1_closed_form():
    b, z = 0.7, 0.3 + 0.2j
    f = family_fb_h1(b, 400)
    assert f(z) == pytest.approx((1 - b * b) / (1 - b * z) ** 2, rel=1e-13)
    assert f.tag.name == "fb_h1" and f.tag.nominal_norm == 1.0


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
def test_fb_hp_closed_form(p):
    b, z = 0.6, -0.4 + 0.1j
    f = family_fb_hp(b, p, 300)
    expected = ((1 - b * b) / (1 - b * z) ** 2) ** (1 / p)
    assert f(z) == pytest.approx(expected, rel=1e-13)


def test_fb_hp_reduces_to_h1():
    np.testing.assert_allclose(family_fb_hp(0.8, 1.0, 50).coeffs,
                               family_fb_h1(0.8, 50).coeffs, rtol=1e-13)


def test_gb_besov_closed_form():
    b, p, z = 0.9, 2.0, 0.5j
    f = family_gb_besov(b, p, 600)
    expected = (-np.log1p(-b * b)) ** (-1 / p) * -np.log(1 - b * z)
    assert f(z) == pytest.approx(expected, rel=1e-13)
    assert f.coeffs[0] == 0


def test_family_ranges():
    with pytest.raises(ValueError):
        family_fb_h1(1.0, 10)
    with pytest.raises(ValueError):
        family_fb_hp(0.5, 0.5, 10)
    with pytest.raises(ValueError):
        family_gb_besov(0.4, 2, 10)
    with pytest.raises(ValueError):
        family_gb_besov(0.7, 1.0, 10)


def test_flog_and_one():
    np.testing.assert_allclose(family_F_log(4).coeffs, [0, 1, 1 / 2, 1 / 3, 1 / 4])
    assert family_one(3).coeffs.tolist() == [1, 0, 0, 0]
    assert family_one().degree == 0


def test_derivative():
    assert derivative(TaylorPoly([5, 1, 2, 3])).coeffs.tolist() == [1, 4, 9]
    assert len(derivative(TaylorPoly([5]))) == 0


@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False), min_size=1,
                max_size=20),
       st.complex_numbers(max_magnitude=1, allow_nan=False))
@settings(max_examples=60, deadline=None)
def test_horner_matches_powers(coeffs, z):
    f = TaylorPoly(np.array(coeffs))
    direct = sum(c * z**k for k, c in enumerate(coeffs))
    assert eval_poly(f, z) == pytest.approx(direct, rel=1e-9, abs=1e-9)


def test_padding():
    f = TaylorPoly([1.0, 2.0])
    assert f.padded(4).coeffs.tolist() == [1, 2, 0, 0]
    with pytest.raises(ValueError):
        f.padded(1)


def test_nonneg_decreasing():
    assert is_nonneg_decreasing(family_F_log(10), 1)
    assert not is_nonneg_decreasing(family_F_log(10), 0)
    assert is_nonneg_decreasing(family_fb_h1(0.1, 10), 0)
    assert not is_nonneg_decreasing(TaylorPoly([1, -1.0]))


def test_auto_degree():
    assert auto_degree(0.5) == 24
    assert auto_degree(1 - 2.0**-20) == 2**17
    b = 0.99
    assert auto_degree(b) * (1 - b) >= 12 - 1e-9


def test_parse_family():
    spec = parse_family("fbp:b=0.5,p=3")
    assert (spec.name, spec.b, spec.p) == ("fbp", 0.5, 3.0)
    f = spec(20)
    np.testing.assert_allclose(f.coeffs, family_fb_hp(0.5, 3, 20).coeffs)
    assert parse_family("Flog")(5).degree == 5
    assert parse_family("fb1")(10, b=0.3).tag.params == {"b": 0.3}


@pytest.mark.parametrize("spec", ["fb2:b=0.5", "fb1:p=2", "gb:b=x", "fb1:b"])
def test_parse_family_errors(spec):
    with pytest.raises(SpecError):
        parse_family(spec)


@pytest.mark.parametrize("coeffs", [
    np.array([0.1, 1 / 3, 2.0**-60, 1e300]),
    np.array([1 + 2j, -0.5j, 1 / 3 + 0j]),
])
def test_csv_round_trip(tmp_path, coeffs):
    path = tmp_path / "f.csv"
    write_series_csv(TaylorPoly(coeffs), path)
    back = read_series_csv(path)
    assert back.coeffs.tolist() == coeffs.tolist()
    # byte-stable
    first = path.read_bytes()
    write_series_csv(back, path)
    assert path.read_bytes() == first


def test_csv_bad_line(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("1.0\nabc\n")
    with pytest.raises(SpecError):
        read_series_csv(path)
