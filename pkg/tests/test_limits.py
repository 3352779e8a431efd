import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gwfun.errors import DomainError, PoleAtHalf, ZeroT
from gwfun.limits import (VAR_AT_HALF, abs_second_moment, alpha_to_imag_var, alpha_to_zero_law,
                          centered_moment, centered_variance, kappa, kappa_hat, kappa_mixed,
                          kappa_via_hat, yinf_moment)
from gwfun.specfun import gamma_ratio

LOG2 = math.log(2)


def test_first_moment_formula():
    for a in (0.3, 1, 2, 1.7 + 2j, 0.6 - 0.1j):
        ref = gamma_ratio([a - 0.5], [a]) / math.sqrt(2)
        assert abs(kappa(a, 1) - ref) < 1e-15 * abs(ref)
    assert abs(kappa(2, 1) - math.sqrt(math.pi / 8)) < 1e-15


def test_excursion_area_moments():
    # Y(1) is twice the Brownian excursion area, whose moments are classical
    area = [math.sqrt(math.pi / 8), 5 / 12, 15 * math.sqrt(2 * math.pi) / 128, 221 / 1008]
    for ell, m in enumerate(area, start=1):
        assert abs(kappa(1, ell) - 2 ** ell * m) < 1e-13 * 2 ** ell * m


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 4), st.floats(-3, 3), st.integers(1, 8))
def test_routes_agree(re, im, ell):
    a = complex(re, im)
    if abs(a - 0.5) < 1e-3:
        return
    k1 = kappa(a, ell)
    assert abs(kappa_via_hat(a, ell) - k1) <= 1e-10 * abs(k1)
    assert abs(kappa_mixed(a, a, ell, 0) - k1) <= 1e-10 * abs(k1)


def test_mixed_symmetry_and_second_moment():
    a, b = 1.3 + 0.2j, 0.7
    assert abs(kappa_mixed(a, b, 2, 1) - kappa_mixed(b, a, 1, 2)) < 1e-13
    for a in (0.2 + 1j, 1.0, 2.5 - 0.5j, 0.9):
        assert abs(kappa_mixed(a, a.conjugate() if isinstance(a, complex) else a, 1, 1)
                   - abs_second_moment(a)) < 1e-12 * abs_second_moment(a)


def test_centered_quantities():
    assert abs(centered_variance(1) - (5 / 3 - math.pi / 2)) < 1e-14
    assert abs(centered_moment(1, 2) - centered_variance(1)) < 1e-14
    assert abs(centered_moment(2.2, 1)) < 1e-13
    assert abs(VAR_AT_HALF - 0.09714) < 1e-5
    assert centered_variance(0.5) == VAR_AT_HALF
    # continuity through the pole of the mean
    for eps in (1e-3, 1e-5):
        assert abs(centered_variance(0.5 + eps) - VAR_AT_HALF) < 50 * eps
        assert abs(centered_variance(0.5 - eps) - VAR_AT_HALF) < 50 * eps


def test_limit_as_alpha_to_infinity():
    for r in (1, 2, 3):
        a = 1e4
        scaled = a ** (r / 2) * kappa(a, r).real
        assert abs(scaled / yinf_moment(r).real - 1) < 0.01
    assert abs(yinf_moment(1) - 2 ** -0.5) < 1e-15
    assert abs(yinf_moment(2) - 2 ** -0.5) < 1e-15
    assert abs(yinf_moment(4) - math.sqrt(24) / 4) < 1e-14


@pytest.mark.parametrize("theta", [0.0, 0.6, -1.0])
def test_alpha_to_zero_law(theta):
    cov = alpha_to_zero_law(theta)
    r = 1e-5
    a = r * complex(math.cos(theta), math.sin(theta))
    abs2 = kappa_mixed(a, a.conjugate(), 1, 1) - abs(kappa(a, 1)) ** 2
    sq = centered_variance(a)
    assert abs(abs2.real / r / np.trace(cov) - 1) < 1e-3
    assert abs(sq / a / (cov[0, 0] - cov[1, 1]) - 1) < 1e-3


def test_alpha_to_imaginary_axis():
    for t in (1.0, 2.0, -0.5):
        target = alpha_to_imag_var(t)
        assert target > 0
        a = 1e-5
        got = a * kappa_mixed(a + 1j * t, a - 1j * t, 1, 1).real
        assert abs(got / target - 1) < 1e-3


def test_errors():
    with pytest.raises(PoleAtHalf):
        kappa(0.5, 2)
    with pytest.raises(DomainError):
        kappa(-0.2, 1)
    with pytest.raises(DomainError):
        yinf_moment(-1)
    with pytest.raises(DomainError):
        alpha_to_zero_law(math.pi / 2)
    with pytest.raises(ZeroT):
        alpha_to_imag_var(0)
    with pytest.raises(ValueError):
        kappa_mixed(1, 2, 0, 0)


def test_kappa_hat_normalisation():
    a = 1.4
    for ell in (1, 3, 5):
        norm = math.sqrt(2 * math.pi) / math.gamma(ell * (a + 0.5) - 0.5)
        assert abs(norm * kappa_hat(a, ell) - kappa(a, ell)) < 1e-12 * abs(kappa(a, ell))
