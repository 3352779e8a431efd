"""Moments of the limit variables Y(alpha), Y_infinity and the boundary laws.

Two independent routes give E Y(alpha)^l: the direct Gamma-ratio recursion
for kappa_l, and the recursion for the singular coefficients kappa_hat_l of
the generating functions followed by the normalisation
kappa_l = sqrt(2 pi) / Gamma(l alpha' - 1/2) * kappa_hat_l, alpha' = alpha + 1/2.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import DomainError, GammaPole, PoleAtHalf, ZeroT
from .specfun import PoleAtNonpositiveInteger, gamma_ratio, log_gamma

__all__ = [
    "LimitMoment",
    "kappa",
    "kappa_hat",
    "kappa_via_hat",
    "kappa_hat_mixed",
    "kappa_mixed",
    "abs_second_moment",
    "centered_variance",
    "centered_moment",
    "yinf_moment",
    "alpha_to_zero_law",
    "alpha_to_imag_var",
    "VAR_AT_HALF",
]

SQRT2 = math.sqrt(2.0)
SQRTPI = math.sqrt(math.pi)
SQRT2PI = math.sqrt(2 * math.pi)
VAR_AT_HALF = 4 * math.log(2) / math.pi - math.pi / 4
POLE_GUARD = 1e-8


class LimitMoment(complex):
    """A complex value tagged with the route that produced it."""

    def __new__(cls, value, route: str = "KK"):
        obj = super().__new__(cls, value)
        obj.route = route
        return obj


def _check_alpha(alpha: complex) -> None:
    if alpha.real <= 0:
        raise DomainError("limit moments need Re alpha > 0")
    if abs(alpha - 0.5) < POLE_GUARD:
        raise PoleAtHalf("alpha is within 1e-8 of the pole at 1/2")


def _gr(num, den) -> complex:
    try:
        return gamma_ratio(num, den)
    except PoleAtNonpositiveInteger as exc:
        raise GammaPole(str(exc)) from exc


@lru_cache(maxsize=None)
def _kappa(alpha: complex, ell: int) -> complex:
    if ell == 1:
        return _gr([alpha - 0.5], [alpha]) / SQRT2
    a1 = alpha + 0.5
    top = ell * a1 - 0.5
    out = ell * _gr([ell * a1 - 1], [top]) / SQRT2 * _kappa(alpha, ell - 1)
    acc = 0j
    for j in range(1, ell):
        acc += math.comb(ell, j) * _gr([j * a1 - 0.5, (ell - j) * a1 - 0.5], [top]) \
            * _kappa(alpha, j) * _kappa(alpha, ell - j)
    return out + acc / (4 * SQRTPI)


def kappa(alpha, ell: int) -> complex:
    """E Y(alpha)^ell from the kappa recursion.

    >>> round(kappa(1, 2).real, 12) == round(5 / 3, 12)
    True
    """
    alpha = complex(alpha)
    _check_alpha(alpha)
    if ell < 1:
        raise ValueError("ell must be >= 1")
    return _kappa(alpha, int(ell))


@lru_cache(maxsize=None)
def _kappa_hat(alpha: complex, ell: int) -> complex:
    if ell == 1:
        return complex(np.exp(log_gamma(alpha - 0.5))) / (2 * SQRTPI)
    a1 = alpha + 0.5
    acc = 0j
    for j in range(1, ell):
        acc += math.comb(ell, j) * _kappa_hat(alpha, j) * _kappa_hat(alpha, ell - j)
    lin = ell * _gr([ell * a1 - 1], [(ell - 1) * a1 - 0.5]) * _kappa_hat(alpha, ell - 1)
    return 2 ** -1.5 * acc + lin / SQRT2


def kappa_hat(alpha, ell: int) -> complex:
    """Singular coefficient of M_ell(z) at z = 1 (scaled by sigma^{ell+1})."""
    alpha = complex(alpha)
    _check_alpha(alpha)
    return _kappa_hat(alpha, int(ell))


def kappa_via_hat(alpha, ell: int) -> complex:
    """E Y(alpha)^ell through the kappa_hat route."""
    alpha = complex(alpha)
    _check_alpha(alpha)
    norm = SQRT2PI * complex(np.exp(-log_gamma(ell * (alpha + 0.5) - 0.5)))
    return norm * _kappa_hat(alpha, int(ell))


@lru_cache(maxsize=None)
def _kappa_hat_mixed(a1: complex, a2: complex, l1: int, l2: int) -> complex:
    if (l1, l2) == (1, 0):
        return _kappa_hat(a1, 1)
    if (l1, l2) == (0, 1):
        return _kappa_hat(a2, 1)
    p1, p2 = a1 + 0.5, a2 + 0.5
    L = l1 * p1 + l2 * p2
    acc = 0j
    for j1 in range(l1 + 1):
        for j2 in range(l2 + 1):
            if 0 < j1 + j2 < l1 + l2:
                acc += (math.comb(l1, j1) * math.comb(l2, j2)
                        * _kappa_hat_mixed(a1, a2, j1, j2)
                        * _kappa_hat_mixed(a1, a2, l1 - j1, l2 - j2))
    out = 2 ** -1.5 * acc
    if l1:
        out += l1 * _gr([L - 1], [L - 1 - a1]) * _kappa_hat_mixed(a1, a2, l1 - 1, l2) / SQRT2
    if l2:
        out += l2 * _gr([L - 1], [L - 1 - a2]) * _kappa_hat_mixed(a1, a2, l1, l2 - 1) / SQRT2
    return out


def kappa_hat_mixed(alpha1, alpha2, ell1: int, ell2: int) -> complex:
    a1, a2 = complex(alpha1), complex(alpha2)
    _check_alpha(a1)
    _check_alpha(a2)
    if ell1 < 0 or ell2 < 0 or ell1 + ell2 < 1:
        raise ValueError("need ell1, ell2 >= 0 with ell1 + ell2 >= 1")
    return _kappa_hat_mixed(a1, a2, int(ell1), int(ell2))


def kappa_mixed(alpha1, alpha2, ell1: int, ell2: int) -> complex:
    """E[Y(alpha1)^ell1 Y(alpha2)^ell2] through the kappa_hat recursion."""
    a1, a2 = complex(alpha1), complex(alpha2)
    k = kappa_hat_mixed(a1, a2, ell1, ell2)
    L = ell1 * (a1 + 0.5) + ell2 * (a2 + 0.5)
    return SQRT2PI * complex(np.exp(-log_gamma(L - 0.5))) * k


def abs_second_moment(alpha) -> float:
    """E|Y(alpha)|^2 in closed form."""
    alpha = complex(alpha)
    _check_alpha(alpha)
    a = alpha.real
    g = complex(np.exp(log_gamma(alpha - 0.5)))
    first = abs(g) ** 2 / (4 * SQRTPI) * float(np.exp(-log_gamma(2 * a + 0.5)).real)
    second = _gr([2 * a], [2 * a + 0.5]).real * _gr([alpha - 0.5], [alpha]).real
    return first + second


def centered_variance(alpha) -> complex:
    """E Y~(alpha)^2 = kappa_2 - kappa_1^2, continuous across alpha = 1/2."""
    alpha = complex(alpha)
    if alpha.real <= 0:
        raise DomainError("needs Re alpha > 0")
    if abs(alpha - 0.5) < POLE_GUARD:
        return complex(VAR_AT_HALF)
    return kappa(alpha, 2) - kappa(alpha, 1) ** 2


def centered_moment(alpha, ell: int) -> complex:
    """E Y~(alpha)^ell, the ell-th moment of Y(alpha) - E Y(alpha)."""
    alpha = complex(alpha)
    _check_alpha(alpha)
    k1 = kappa(alpha, 1)
    out = (-k1) ** ell
    for j in range(1, ell + 1):
        out += math.comb(ell, j) * kappa(alpha, j) * (-k1) ** (ell - j)
    return out


def yinf_moment(r) -> complex:
    """E Y_inf^r = 2^{-r/2} Gamma(r + 1)^{1/2} for Re r > -1."""
    r = complex(r)
    if r.real <= -1:
        raise DomainError("needs Re r > -1")
    return complex(np.exp(-r * math.log(2) / 2 + log_gamma(r + 1) / 2))


def alpha_to_zero_law(theta: float) -> np.ndarray:
    """Covariance of (Re, Im) of the limit of alpha^{-1/2} Y(alpha), alpha = r e^{i theta} -> 0."""
    if not abs(theta) < math.pi / 2:
        raise DomainError("needs |theta| < pi/2")
    c = 1 - math.log(2)
    sec = 1 / math.cos(theta)
    return np.diag([c * (sec + 1), c * (sec - 1)])


def alpha_to_imag_var(t: float) -> float:
    """E|zeta|^2 for the limit of a^{1/2} Y(a + i t) as a -> 0.

    Equals (1 / (2 sqrt(pi))) Re[Gamma(i t - 1/2) / Gamma(i t)]; this is the
    a -> 0 limit of a E|Y(a + i t)|^2 from the closed second moment.
    """
    t = float(t)
    if t == 0:
        raise ZeroT("t must be nonzero")
    z = 1j * t
    return float((_gr([z - 0.5], [z]) / (2 * SQRTPI)).real)
