"""Special functions over the complex plane.

log-gamma and digamma come from :mod:`scipy.special`; the Hurwitz zeta
function (complex ``s``) and the polylogarithm with its expansion near
``z = 1`` are implemented here because scipy only covers real arguments.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

__all__ = [
    "SpecialFunctionError",
    "PoleAtNonpositiveInteger",
    "PoleAtOne",
    "IntegerAlphaOnExpansionBranch",
    "OutsideDomain",
    "log_gamma",
    "gamma",
    "gamma_ratio",
    "digamma",
    "zeta",
    "polylog",
    "EULER_GAMMA",
]

EULER_GAMMA = 0.57721566490153286061
_LOG_2PI = math.log(2 * math.pi)

# B_2, B_4, ..., B_60
_B2K = _sp.bernoulli(60)[2::2]
_FACT2K = np.array([math.factorial(2 * k) for k in range(1, _B2K.size + 1)], dtype=float)
_EM_COEF = _B2K / _FACT2K


class SpecialFunctionError(ArithmeticError):
    pass


class PoleAtNonpositiveInteger(SpecialFunctionError):
    pass


class PoleAtOne(SpecialFunctionError):
    pass


class IntegerAlphaOnExpansionBranch(SpecialFunctionError):
    pass


class OutsideDomain(SpecialFunctionError):
    pass


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def log_gamma(z):
    """Principal branch of log Gamma(z) for complex ``z``."""
    arr = np.asarray(z, dtype=complex)
    if np.any((arr.imag == 0) & (arr.real <= 0) & (arr.real == np.floor(arr.real))):
        raise PoleAtNonpositiveInteger(f"Gamma has a pole at {z!r}")
    out = _sp.loggamma(arr)
    return out[()] if out.ndim == 0 else out


def gamma(z):
    return np.exp(log_gamma(z))


def gamma_ratio(num, den):
    """prod Gamma(num) / prod Gamma(den) evaluated in log space.

    A pole in the denominator gives an exact zero.
    """
    acc = 0j
    for z in num:
        acc += log_gamma(complex(z))
    for z in den:
        z = complex(z)
        if _is_nonpositive_integer(z):
            return 0j
        acc -= log_gamma(z)
    return complex(np.exp(acc))


def digamma(z):
    out = _sp.psi(np.asarray(z, dtype=complex))
    return out[()] if out.ndim == 0 else out


def _hurwitz_em(s: complex, a: float) -> complex:
    """Euler-Maclaurin summation for zeta(s, a)."""
    n_direct = int(max(16, abs(s) + 12, abs(s.imag)))
    k = np.arange(n_direct) + a
    head = np.sum(np.exp(-s * np.log(k)))
    x = n_direct + a
    logx = math.log(x)
    xs = np.exp(-s * logx)
    total = head + x * xs / (s - 1) + 0.5 * xs
    # rising factorial s(s+1)...(s+2j-2) times x^{-s-2j+1}
    fac = s * xs / x
    prev = math.inf
    for j, coef in enumerate(_EM_COEF, start=1):
        term = coef * fac
        total += term
        mag = abs(term)
        if mag < 1e-17 * abs(total) or mag > prev:
            break
        prev = mag
        fac *= (s + 2 * j - 1) * (s + 2 * j) / (x * x)
    return complex(total)


def _riemann_reflect(s: complex) -> complex:
    # zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s)
    one_minus = 1 - s
    log_pref = s * math.log(2) + (s - 1) * math.log(math.pi) + complex(_sp.loggamma(one_minus))
    return complex(np.exp(log_pref) * np.sin(math.pi * s / 2) * _hurwitz_em(one_minus, 1.0))


def zeta(s, a: float = 1.0) -> complex:
    """Hurwitz zeta(s, a) for complex ``s`` and real ``a > 0``.

    ``a = 1`` is the Riemann zeta function.  Offsets above one are accepted
    so that tails ``sum_{j >= J} (j + a)^{-s}`` can be taken directly.

    >>> round(zeta(2).real, 12) == round(math.pi**2 / 6, 12)
    True
    """
    s = complex(s)
    if s == 1:
        raise PoleAtOne("zeta has a pole at s = 1")
    if not a > 0:
        raise ValueError("Hurwitz parameter must be positive")
    if a == 1.0 and s.real < 0:
        if s.imag == 0 and s.real % 2 == 0:
            return 0j
        return _riemann_reflect(s)
    return _hurwitz_em(s, float(a))


def _zeta_term(alpha: complex, n: int, logz: complex, log_nfact: float) -> complex:
    """zeta(alpha - n) (log z)^n / n!, stable for large n."""
    s = alpha - n
    if s.imag == 0 and s.real <= 0 and s.real % 2 == 0:
        return -0.5 + 0j if s.real == 0 else 0j
    if s.real >= 0.5:
        return zeta(s) * np.exp(n * np.log(logz) - log_nfact) if n else zeta(s)
    one_minus = 1 - s
    log_pref = (
        s * math.log(2)
        + (s - 1) * math.log(math.pi)
        + complex(_sp.loggamma(one_minus))
        - log_nfact
    )
    if n:
        log_pref += n * np.log(logz)
    return complex(np.exp(log_pref) * np.sin(math.pi * s / 2) * _hurwitz_em(one_minus, 1.0))


def _polylog_series(alpha: complex, z: complex) -> complex:
    total = 0j
    zn = 1 + 0j
    n = 0
    absz = abs(z)
    while True:
        n += 1
        zn *= z
        term = zn * np.exp(-alpha * math.log(n))
        total += term
        if abs(term) < 1e-17 * max(abs(total), 1e-300) and n > 5:
            # remaining tail is geometric in |z| up to the n^{-alpha} factor
            ratio = absz * ((n + 1) / n) ** max(-alpha.real, 0.0)
            if ratio < 1 and abs(term) * ratio / (1 - ratio) < 1e-16 * abs(total):
                break
        if n > 200000:
            raise OutsideDomain("polylog series failed to converge")
    return complex(total)


def _polylog_expansion(alpha: complex, z: complex, max_terms: int = 200) -> complex:
    logz = complex(np.log(z))
    if abs(logz) >= 2 * math.pi:
        raise OutsideDomain("expansion needs |log z| < 2 pi")
    sing = complex(np.exp(complex(_sp.loggamma(1 - alpha)) + (alpha - 1) * np.log(-logz)))
    total = 0j
    small_run = 0
    for n in range(max_terms):
        term = _zeta_term(alpha, n, logz, math.lgamma(n + 1))
        total += term
        # odd/even terms can vanish individually; ask for two small in a row
        if n > alpha.real + 1 and abs(term) < 1e-16 * max(abs(total), abs(sing), 1e-300):
            small_run += 1
            if small_run >= 2:
                return sing + total
        else:
            small_run = 0
    raise OutsideDomain("polylog expansion did not converge in 200 terms")


def polylog(alpha, z, method: str = "auto") -> complex:
    """Polylogarithm Li_alpha(z) = sum_{n>=1} n^{-alpha} z^n for |z| < 1.

    ``method='series'`` sums the defining series; ``'expansion'`` uses the
    singular expansion around ``z = 1`` (needs non-integer alpha or
    alpha <= 0 and ``z`` off ``[1, inf)``).  ``'auto'`` picks the series for
    ``|z| <= 0.75`` and the expansion otherwise, falling back to the series
    for positive integer alpha.
    """
    alpha = complex(alpha)
    z = complex(z)
    if abs(z) >= 1:
        raise OutsideDomain("polylog is evaluated only inside the unit disc")
    positive_int = alpha.imag == 0 and alpha.real >= 1 and alpha.real == math.floor(alpha.real)
    if method == "series":
        return _polylog_series(alpha, z)
    if method == "expansion":
        if positive_int:
            raise IntegerAlphaOnExpansionBranch("expansion is singular for alpha in {1,2,...}")
        return _polylog_expansion(alpha, z)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if abs(z) <= 0.75 or positive_int or abs(np.log(z)) >= 2 * math.pi or z == 0:
        return _polylog_series(alpha, z)
    return _polylog_expansion(alpha, z)
