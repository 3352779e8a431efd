import math

import mpmath as mp
import numpy as np
import pytest

from gwfun.specfun import (IntegerAlphaOnExpansionBranch, OutsideDomain, PoleAtNonpositiveInteger,
                           PoleAtOne, digamma, gamma_ratio, log_gamma, polylog, zeta)

mp.mp.dps = 30


def test_log_gamma_against_mpmath(rng):
    for _ in range(50):
        z = complex(rng.uniform(-10, 20), rng.uniform(-30, 30))
        assert abs(log_gamma(z) - complex(mp.loggamma(z))) < 1e-12 * max(1, abs(z))


def test_gamma_poles():
    with pytest.raises(PoleAtNonpositiveInteger):
        log_gamma(-2)
    assert gamma_ratio([1.5], [-3]) == 0


def test_gamma_ratio_and_digamma():
    assert abs(gamma_ratio([0.5], [1]) - math.sqrt(math.pi)) < 1e-14
    assert abs(digamma(0.5) - (-mp.euler - 2 * mp.log(2))) < 1e-14


@pytest.mark.parametrize("s,a", [(2, 1), (1.5, 1), (0.5, 1), (-1.5, 1), (-3, 1), (2 + 3j, 1),
                                 (0.5 - 5j, 1), (1.5, 0.5), (2.5 - 1j, 0.25), (3.2, 17.5),
                                 (0.3 + 1j, 1000.0)])
def test_hurwitz_zeta(s, a):
    ref = complex(mp.zeta(s, a))
    assert abs(zeta(s, a) - ref) < 1e-12 * max(1, abs(ref))


def test_zeta_errors():
    with pytest.raises(PoleAtOne):
        zeta(1)
    with pytest.raises(ValueError):
        zeta(2, 0.0)
    assert zeta(-4) == 0


@pytest.mark.parametrize("alpha", [0.5, 1.5, -0.5, 2.5 + 1j, 0.3 - 2j, -3, 0, -1.2 + 0.5j])
@pytest.mark.parametrize("z", [0.3, 0.9, 0.999, 0.95j, -0.99, 0.7 + 0.6j, 0.9999 * np.exp(0.01j)])
def test_polylog_against_mpmath(alpha, z):
    ref = complex(mp.polylog(alpha, z))
    got = polylog(alpha, z)
    assert abs(got - ref) < 1e-10 * max(1, abs(ref))


def test_polylog_series_and_expansion_agree():
    for alpha in (0.5, -0.5 + 1j, 1.7):
        z = 0.8 + 0.1j
        assert abs(polylog(alpha, z, "series") - polylog(alpha, z, "expansion")) < 1e-11


def test_polylog_domain():
    with pytest.raises(OutsideDomain):
        polylog(0.5, 1.0)
    with pytest.raises(IntegerAlphaOnExpansionBranch):
        polylog(2, 0.9, "expansion")
