"""Exact discrete quantities of conditioned Galton-Watson trees.

Point probabilities of the random walk S_n = xi_1 + ... + xi_n on the two
diagonals that matter (S_k = k - 1 and S_m = m), the tree-size law
q_n = P(S_n = n - 1) / n, the exact mean of X_n(alpha), and four routes to
mu(alpha) = E |T|^alpha.
"""
from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .errors import (
    CapacityExceeded,
    CustomNotSupported,
    DomainError,
    NotTabulated,
    PoleAtHalf,
    QuadratureNonconvergence,
    UnreachableSize,
)
from .offspring import OffspringDist, char_fn, make_offspring
from .specfun import EULER_GAMMA, digamma, gamma_ratio, log_gamma, zeta

__all__ = [
    "BallotTable",
    "MuValue",
    "ClosedValue",
    "MeanAsymptotic",
    "ballot_table",
    "tree_size_pmf",
    "mean_xn",
    "mu_series",
    "mu_continued",
    "mu_integral",
    "mu_closed_form",
    "mu",
    "mean_asymptotic",
    "critical_constant",
    "llt_constant",
    "DEFAULT_MEMORY_BUDGET",
]

_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
ZETA3 = 1.2020569031595942854
LOG2 = math.log(2.0)

# entries of the DP table (n_max * support) allowed for custom laws
DEFAULT_MEMORY_BUDGET = 2 * 10**9
_PRUNE = 1e-300


# ---------------------------------------------------------------------------
# Saddle-point binomial and Poisson masses (Loader 2000).  These keep full
# relative precision for large arguments, which the residuals
# r(n) = P(S_n = n-1) - h/sqrt(2 pi sigma^2 n) depend on.

_S0, _S1, _S2, _S3, _S4 = 1 / 12, 1 / 360, 1 / 1260, 1 / 1680, 1 / 1188


def _stirlerr(n):
    """log(n!) - log(sqrt(2 pi n) (n/e)^n) for integer n >= 1."""
    n = np.asarray(n, dtype=float)
    out = np.empty_like(n)
    small = n <= 15
    ns = n[small]
    out[small] = gammaln(ns + 1) - (ns + 0.5) * np.log(ns) + ns - _HALF_LOG_2PI
    nl = n[~small]
    nn = nl * nl
    out[~small] = (_S0 - (_S1 - (_S2 - (_S3 - _S4 / nn) / nn) / nn) / nn) / nl
    return out


def _bd0(x, m):
    """x log(x/m) + m - x without cancellation when x is close to m."""
    x = np.asarray(x, dtype=float)
    m = np.asarray(m, dtype=float)
    x, m = np.broadcast_arrays(x, m)
    out = np.empty(x.shape)
    close = np.abs(x - m) < 0.1 * (x + m)
    xc, mc = x[close], m[close]
    v = (xc - mc) / (xc + mc)
    s = (xc - mc) * v
    ej = 2 * xc * v
    v2 = v * v
    for j in range(1, 60):
        ej = ej * v2
        s_new = s + ej / (2 * j + 1)
        if np.array_equal(s_new, s):
            break
        s = s_new
    out[close] = s
    xf, mf = x[~close], m[~close]
    with np.errstate(divide="ignore", invalid="ignore"):
        out[~close] = np.where(xf > 0, xf * np.log(xf / mf), 0.0) + mf - xf
    return out


def _dbinom_half(x, n):
    """P(Bin(n, 1/2) = x) for integer arrays, relative accuracy ~1e-15."""
    x = np.asarray(x, dtype=float)
    n = np.asarray(n, dtype=float)
    x, n = np.broadcast_arrays(x, n)
    out = np.zeros(x.shape)
    inside = (x >= 0) & (x <= n)
    edge = inside & ((x == 0) | (x == n))
    out[edge] = np.exp2(-n[edge])
    mid = inside & ~edge
    xm, nm = x[mid], n[mid]
    lc = (
        _stirlerr(nm) - _stirlerr(xm) - _stirlerr(nm - xm)
        - _bd0(xm, nm / 2) - _bd0(nm - xm, nm / 2)
    )
    out[mid] = np.exp(lc) * np.sqrt(nm / (2 * np.pi * xm * (nm - xm)))
    return out


def _dpois(x, lam):
    x = np.asarray(x, dtype=float)
    lam = np.asarray(lam, dtype=float)
    x, lam = np.broadcast_arrays(x, lam)
    out = np.zeros(x.shape)
    zero = x == 0
    out[zero] = np.exp(-lam[zero])
    pos = x > 0
    xp = x[pos]
    out[pos] = np.exp(-_stirlerr(xp) - _bd0(xp, lam[pos])) / np.sqrt(2 * np.pi * xp)
    return out


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BallotTable:
    """Diagonals of the law of S_k.

    ``diag1[k] = P(S_k = k - 1)`` and ``diag0[m] = P(S_m = m)`` for
    ``0 <= k, m <= n_max``.
    """

    dist: OffspringDist
    n_max: int
    diag1: np.ndarray = field(repr=False)
    diag0: np.ndarray = field(repr=False)
    method: str

    def tree_size(self, n):
        n = np.asarray(n)
        return self.diag1[n] / np.maximum(n, 1)

    def truncate(self, n_max: int) -> "BallotTable":
        if n_max > self.n_max:
            raise ValueError("cannot extend a table by truncation")
        return BallotTable(self.dist, n_max, self.diag1[: n_max + 1], self.diag0[: n_max + 1], self.method)


def _closed_form_diagonals(dist: OffspringDist, n_max: int):
    k = np.arange(n_max + 1, dtype=float)
    d1 = np.zeros(n_max + 1)
    d0 = np.zeros(n_max + 1)
    kp = k[1:]
    if dist.kind == "po1":
        d1[1:] = _dpois(kp - 1, kp)
        d0[1:] = _dpois(kp, kp)
    elif dist.kind == "ge12":
        # S_k is negative binomial: P(S_k = j) = C(j+k-1, j) 2^{-j-k}
        d1[1:] = 0.5 * _dbinom_half(kp - 1, 2 * kp - 2)
        d0[1:] = 0.5 * _dbinom_half(kp, 2 * kp - 1)
    elif dist.kind == "bi212":
        d1[1:] = _dbinom_half(kp - 1, 2 * kp)
        d0[1:] = _dbinom_half(kp, 2 * kp)
    elif dist.kind == "fullbin":
        odd = kp % 2 == 1
        d1[1:][odd] = _dbinom_half((kp[odd] - 1) / 2, kp[odd])
        even = ~odd
        d0[1:][even] = _dbinom_half(kp[even] / 2, kp[even])
    else:  # pragma: no cover
        raise CustomNotSupported(dist.kind)
    d0[0] = 1.0
    return d1, d0


def _dp_diagonals(dist: OffspringDist, n_max: int, budget: int):
    # infinite supports are cut where the tail mass drops below 1e-18
    p = dist.pmf()
    if n_max * p.size > budget:
        raise CapacityExceeded(
            f"n_max={n_max} with support {p.size} exceeds the memory budget {budget}"
        )
    d1 = np.zeros(n_max + 1)
    d0 = np.zeros(n_max + 1)
    d0[0] = 1.0
    row = np.ones(1)
    lo = 0  # row[i] = P(S_k = lo + i)
    for k in range(1, n_max + 1):
        row = np.convolve(row, p)
        # values above n_max never feed a diagonal entry we need
        if lo + row.size - 1 > n_max:
            row = row[: n_max - lo + 1]
        keep = np.flatnonzero(row >= _PRUNE)
        if keep.size == 0:
            break
        if keep[0] > 0 or keep[-1] < row.size - 1:
            row = row[keep[0]: keep[-1] + 1]
            lo += int(keep[0])
        i1 = k - 1 - lo
        if 0 <= i1 < row.size:
            d1[k] = row[i1]
        i0 = k - lo
        if 0 <= i0 < row.size:
            d0[k] = row[i0]
    return d1, d0


_TABLE_CACHE: dict = {}
_TABLE_LOCK = threading.Lock()


def ballot_table(dist, n_max: int, *, method: str | None = None,
                 memory_budget: int = DEFAULT_MEMORY_BUDGET) -> BallotTable:
    """Diagonal probabilities P(S_k = k - 1), P(S_m = m) for k, m <= n_max.

    Presets use closed forms; other laws use a pruned convolution DP.
    ``method='dp'`` forces the DP (used to cross-check the closed forms).

    >>> t = ballot_table("ge12", 2)
    >>> round(float(t.diag1[2]), 15)
    0.25
    """
    dist = make_offspring(dist)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    use_dp = method == "dp" or not dist.is_preset
    if method not in (None, "dp", "closed"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed" and not dist.is_preset:
        raise CustomNotSupported("closed forms exist only for presets")
    tag = "ConvolutionDP" if use_dp else "ClosedForm"
    key = (dist, tag)
    with _TABLE_LOCK:
        cached = _TABLE_CACHE.get(key)
    if cached is not None and cached.n_max >= n_max:
        return cached if cached.n_max == n_max else cached.truncate(n_max)
    if use_dp:
        d1, d0 = _dp_diagonals(dist, n_max, memory_budget)
    else:
        d1, d0 = _closed_form_diagonals(dist, n_max)
    d1.setflags(write=False)
    d0.setflags(write=False)
    table = BallotTable(dist, n_max, d1, d0, tag)
    with _TABLE_LOCK:
        _TABLE_CACHE[key] = table
    return table


def tree_size_pmf(dist, n: int) -> float:
    """q_n = P(|T| = n) = P(S_n = n - 1) / n."""
    dist = make_offspring(dist)
    if n < 1:
        raise ValueError("tree sizes start at 1")
    if (n - 1) % dist.span:
        return 0.0
    return float(ballot_table(dist, n).diag1[n] / n)


def _check_size(dist: OffspringDist, n: int) -> None:
    if n < 1 or (n - 1) % dist.span:
        raise UnreachableSize(f"trees of size {n} have probability zero (span {dist.span})")


def _powers(k: np.ndarray, alpha) -> np.ndarray:
    # n^alpha := exp(alpha log n) with real log n
    return np.exp(np.multiply.outer(np.asarray(alpha, dtype=complex), np.log(k)))


def mean_weights(dist, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Sizes k and weights w_k with E X_n(alpha) = n sum_k w_k k^{alpha-1}.

    ``n w_k / k`` is the expected number of fringe subtrees of size k.
    """
    dist = make_offspring(dist)
    _check_size(dist, n)
    tab = ballot_table(dist, n)
    k = np.arange(1, n + 1, dist.span)
    w = tab.diag0[n - k] * tab.diag1[k] / tab.diag1[n]
    return k, w


def mean_xn(dist, n: int, alpha):
    """Exact E X_n(alpha) for complex alpha (scalar or array).

    >>> abs(mean_xn("po1", 2, 1.5) - (2**1.5 + 1)) < 1e-12
    True
    """
    k, w = mean_weights(dist, n)
    out = n * (_powers(k, np.asarray(alpha) - 1.0) @ w)
    return complex(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MuValue:
    value: complex
    alpha: complex
    method: str
    error_bound: float
    note: str = ""

    def __complex__(self) -> complex:
        return self.value


def llt_constant(dist) -> float:
    """h / sqrt(2 pi sigma^2), the local-limit constant of sqrt(n) P(S_n = n-1)."""
    dist = make_offspring(dist)
    return dist.span / math.sqrt(2 * math.pi * dist.sigma2)


def _progression_tail(s: complex, last: int, h: int) -> complex:
    # sum over n = last + h, last + 2h, ... of n^{-s}
    return complex(np.exp(-s * math.log(h))) * zeta(s, last / h + 1.0)


def mu_series(dist, alpha, n_terms: int = 100_000) -> MuValue:
    """mu(alpha) from the defining series plus a local-limit tail.

    Valid for Re alpha < 1/2.  The error bound uses the largest
    ``|r(n)| n^{3/2}`` seen in the last half of the computed range.
    """
    dist = make_offspring(dist)
    alpha = complex(alpha)
    if alpha.real >= 0.5:
        raise DomainError("the series for mu(alpha) needs Re alpha < 1/2")
    h = dist.span
    n_terms = max(int(n_terms), 2 * h + 1)
    tab = ballot_table(dist, n_terms)
    n = np.arange(1, n_terms + 1, h)
    P = tab.diag1[n]
    terms = P * np.exp((alpha - 1.0) * np.log(n))
    partial = complex(terms.sum())
    last = int(n[-1])
    A = llt_constant(dist)
    tail = A * _progression_tail(1.5 - alpha, last, h)
    block = n >= last / 2
    C = float(np.max(np.abs(P[block] - A / np.sqrt(n[block])) * n[block] ** 1.5))
    defect = C * _progression_tail(2.5 - alpha.real, last, h).real
    err = 2 * defect + 1e-15 * float(np.abs(terms).sum()) + 1e-15 * abs(tail)
    note = "" if dist.is_preset else "heuristic error bound (tail defect not quantified)"
    return MuValue(partial + tail, alpha, "Series", err, note)


def _fit_tail_constant(n: np.ndarray, r: np.ndarray) -> float:
    # least squares r n^{3/2} = C + D/n over the supplied block
    y = r * n ** 1.5
    X = np.column_stack([np.ones_like(y), 1.0 / n])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    return float(coef[0])


def mu_continued(dist, alpha, n_terms: int = 100_000) -> MuValue:
    """Analytic continuation of mu(alpha) to Re alpha < 1, alpha != 1/2.

    Splits P(S_n = n-1) into its local-limit part, summed exactly with the
    Hurwitz zeta function, and a remainder r(n) = O(n^{-3/2}) whose series
    converges absolutely.  The remainder tail is estimated from a fit over
    the last decade of terms; the error bound is twice that estimate.
    """
    dist = make_offspring(dist)
    if not dist.is_preset:
        raise CustomNotSupported("continuation needs closed-form ballot values (presets only)")
    alpha = complex(alpha)
    if alpha.real >= 1:
        raise DomainError("continuation is implemented for Re alpha < 1")
    if alpha == 0.5:
        raise PoleAtHalf("mu has a pole at alpha = 1/2")
    h = dist.span
    tab = ballot_table(dist, n_terms)
    n = np.arange(1, n_terms + 1, h)
    A = llt_constant(dist)
    r = tab.diag1[n] - A / np.sqrt(n)
    terms = r * np.exp((alpha - 1.0) * np.log(n))
    main = A * complex(np.exp(-(1.5 - alpha) * math.log(h))) * zeta(1.5 - alpha, 1.0 / h)
    last = int(n[-1])
    block = n >= last / 10
    C = _fit_tail_constant(n[block].astype(float), r[block])
    tail = C * _progression_tail(2.5 - alpha, last, h)
    err = 2 * abs(tail) + 1e-15 * (float(np.abs(terms).sum()) + abs(main))
    return MuValue(main + complex(terms.sum()) + tail, alpha, "Continued", err)


def mu_integral(dist, alpha, *, epsabs: float = 1e-10, epsrel: float = 1e-10) -> MuValue:
    """mu(alpha) from its double-integral representation (Re alpha < 1/2).

    mu = (2 pi Gamma(1 - alpha))^{-1} int_{-pi}^{pi} int_0^inf
    x^{-alpha} phi(t) / (e^x - phi_tilde(t)) dx dt.  The inner integral
    uses x = u^2; e^x - phi_tilde = expm1(x) + rho(t) avoids cancellation.
    """
    dist = make_offspring(dist)
    alpha = complex(alpha)
    if alpha.real >= 0.5:
        raise DomainError("the integral representation needs Re alpha < 1/2")
    expo = 1.0 - 2.0 * alpha

    def inner(t: float) -> complex:
        phi = complex(char_fn(dist, t, "phi"))
        rho = complex(char_fn(dist, t, "rho"))

        def f(u):
            if u <= 0 or u * u > 700:
                return 0j
            return 2.0 * np.exp(expo * math.log(u)) * phi / (math.expm1(u * u) + rho)

        scale = math.sqrt(abs(rho)) if rho != 0 else 0.0
        pts = [0.0]
        if 0 < scale < 1:
            pts += [scale, min(10 * scale, 1.0)]
        pts += [1.0, 3.0, 7.0]
        total = 0j
        errsum = 0.0
        for a, b in zip(pts[:-1], pts[1:]):
            if b <= a:
                continue
            val, err = integrate.quad(f, a, b, complex_func=True, limit=200,
                                      epsabs=epsabs, epsrel=epsrel, full_output=False)
            total += val
            errsum += abs(err)
        val, err = integrate.quad(f, 7.0, 27.0, complex_func=True, limit=200,
                                  epsabs=epsabs, epsrel=epsrel)
        total += val
        errsum += abs(err)
        inner.err = max(getattr(inner, "err", 0.0), errsum)
        return total

    # For Re alpha > 0 the t-integrand blows up like |t|^{-2 alpha} at 0.  The
    # model singularity pi/sin(pi alpha) (sigma^2 t^2/2)^{-alpha} is removed
    # and integrated in closed form.
    subtract = alpha.real > 0
    if subtract:
        G = math.pi / complex(np.sin(math.pi * alpha))
        half_s2 = dist.sigma2 / 2

    def model(t: float) -> complex:
        return 2 * G * complex(np.exp(-alpha * math.log(half_s2 * t * t)))

    def both(t: float) -> complex:
        out = inner(t) + inner(-t)
        if subtract and t > 0:
            out -= model(t)
        return out

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            brk = [0.0, 1e-3, 1e-2, 0.1, 0.5, 1.5, math.pi]
            total = 0j
            errsum = 0.0
            for a, b in zip(brk[:-1], brk[1:]):
                val, err = integrate.quad(both, a, b, complex_func=True, limit=200,
                                          epsabs=epsabs, epsrel=epsrel)
                total += val
                errsum += abs(err)
        except integrate.IntegrationWarning as exc:
            raise QuadratureNonconvergence(str(exc)) from exc
    if subtract:
        total += (2 * G * complex(np.exp(-alpha * math.log(half_s2)))
                  * complex(np.exp((1 - 2 * alpha) * math.log(math.pi))) / (1 - 2 * alpha))
    pref = complex(np.exp(-log_gamma(1.0 - alpha))) / (2 * math.pi)
    value = pref * total
    err = abs(pref) * (errsum + 2 * math.pi * getattr(inner, "err", 0.0))
    if err > 1e-6:
        raise QuadratureNonconvergence(f"estimated error {err:.2e} above target")
    return MuValue(value, alpha, "Integral", max(err, 1e-12))


# ---------------------------------------------------------------------------
# Closed forms for mu(-k)

@dataclass(frozen=True)
class ClosedValue:
    value: float
    expression: str
    rational: Fraction | None = None

    def __float__(self) -> float:
        return self.value


_L = LOG2
_PI2 = math.pi ** 2

_CLOSED = {
    "po1": {
        0: Fraction(1), 1: Fraction(1, 2), 2: Fraction(5, 12), 3: Fraction(7, 18),
        4: Fraction(1631, 4320), 5: Fraction(96547, 259200),
    },
    "ge12": {
        0: (1.0, "1"),
        1: (2 - 2 * _L, "2 - 2 log 2"),
        2: (2 * _L**2 - 4 * _L - _PI2 / 6 + 4, "2 log^2 2 - 4 log 2 - pi^2/6 + 4"),
        3: ((_L - 1) * _PI2 / 3 - 4 * _L**3 / 3 + 4 * _L**2 - 8 * _L - 2 * ZETA3 + 8,
            "(log 2 - 1) pi^2/3 - 4/3 log^3 2 + 4 log^2 2 - 8 log 2 - 2 zeta(3) + 8"),
        4: (-math.pi**4 / 40 + (-_L**2 / 3 + 2 * _L / 3 - 2 / 3) * _PI2 + 2 * _L**4 / 3
            - 8 * _L**3 / 3 + 8 * _L**2 - 16 * _L + (4 * _L - 4) * ZETA3 + 16,
            "-pi^4/40 + (-log^2 2/3 + 2 log 2/3 - 2/3) pi^2 + 2/3 log^4 2 - 8/3 log^3 2"
            " + 8 log^2 2 - 16 log 2 + (4 log 2 - 4) zeta(3) + 16"),
    },
    "bi212": {
        0: (1.0, "1"),
        1: (2 * _L - 1, "2 log 2 - 1"),
        2: (_PI2 / 6 - 2 * _L**2 - 2 * _L + 1, "pi^2/6 - 2 log^2 2 - 2 log 2 + 1"),
    },
    "fullbin": {
        0: (1.0, "1"),
        1: (math.pi / 2 - 1, "pi/2 - 1"),
        2: (1 - (1 - _L) * math.pi / 2, "1 - (1 - log 2) pi/2"),
    },
}


def mu_closed_form(preset: str, k: int) -> ClosedValue:
    """Tabulated exact value of mu(-k) for the four presets.

    >>> mu_closed_form("po1", 4).rational
    Fraction(1631, 4320)
    """
    kind = make_offspring(preset).kind
    table = _CLOSED.get(kind)
    if table is None or k not in table:
        raise NotTabulated(f"mu(-{k}) is not tabulated for {preset!r}")
    entry = table[k]
    if isinstance(entry, Fraction):
        return ClosedValue(float(entry), str(entry), entry)
    return ClosedValue(float(entry[0]), entry[1])


def mu(dist, alpha, method: str = "auto", **kw) -> MuValue:
    """Dispatch to one of the mu(alpha) routes.

    ``'auto'`` uses the closed form when tabulated, the series for
    Re alpha < 1/2 and the continuation otherwise.
    """
    dist = make_offspring(dist)
    alpha = complex(alpha)
    if method in ("closed", "closedform"):
        k = -alpha.real
        if alpha.imag != 0 or k != int(k) or k < 0:
            raise NotTabulated("closed forms exist only for alpha = 0, -1, -2, ...")
        if not dist.is_preset:
            raise NotTabulated("closed forms are tabulated only for the presets")
        cv = mu_closed_form(dist.kind, int(k))
        return MuValue(complex(cv.value), alpha, "ClosedForm", 0.0, cv.expression)
    if method == "series":
        return mu_series(dist, alpha, **kw)
    if method in ("continued", "continuation"):
        return mu_continued(dist, alpha, **kw)
    if method == "integral":
        return mu_integral(dist, alpha, **kw)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if alpha.imag == 0 and alpha.real <= 0 and alpha.real == int(alpha.real):
        try:
            return mu(dist, alpha, "closed")
        except NotTabulated:
            pass
    if alpha.real < 0.5:
        return mu_series(dist, alpha, **kw)
    return mu_continued(dist, alpha, **kw)


# ---------------------------------------------------------------------------

def critical_constant(dist, n_terms: int = 1_000_000) -> float:
    """The constant c in E X_n(1/2) = (2 pi sigma^2)^{-1/2} n log n + c n + o(n).

    For span h the arithmetic progression n = 1 mod h contributes
    -c0 (log h + psi(1/h)) in place of c0 * Euler's gamma; for h = 1 this is
    the usual sum of k^{-1}[k^{1/2} P(S_k = k-1) - c0] - c0 psi(1/2).
    """
    dist = make_offspring(dist)
    h = dist.span
    c0 = 1.0 / math.sqrt(2 * math.pi * dist.sigma2)
    tab = ballot_table(dist, n_terms)
    k = np.arange(1, n_terms + 1, h).astype(float)
    r = tab.diag1[k.astype(int)] - h * c0 / np.sqrt(k)
    s = float(np.sum(r / np.sqrt(k)))
    last = int(k[-1])
    block = k >= last / 10
    C = _fit_tail_constant(k[block], r[block])
    s += C * _progression_tail(2.0, last, h).real
    psi = float(np.real(digamma(1.0 / h)))
    return s - c0 * (math.log(h) + psi) + 2 * LOG2 * c0


@dataclass(frozen=True)
class MeanAsymptotic:
    """Leading behaviour of E X_n(alpha).

    ``predict(n)`` evaluates ``mu * n + coef * n^power`` for the power
    regimes and ``coef * n log n + mu * n`` at alpha = 1/2 (with ``mu``
    holding the constant c when known).
    """

    regime: str
    alpha: complex
    mu: complex | None
    coef: complex
    power: complex

    def predict(self, n):
        n = np.asarray(n, dtype=float)
        if self.regime == "critical":
            out = self.coef * n * np.log(n)
            if self.mu is not None:
                out = out + self.mu * n
            return out
        out = self.coef * np.exp(self.power * np.log(n)) if self.coef != 0 else 0.0 * n
        if self.mu is not None:
            out = out + self.mu * n
        return out


def mean_asymptotic(dist, alpha, regime: str = "auto", **mu_kw) -> MeanAsymptotic:
    """Regime tag and coefficients of the large-n expansion of E X_n(alpha).

    Regimes: ``'linear'`` (Re alpha <= -1/2, mu n), ``'two-term'``
    (-1/2 < Re alpha < 1/2, mu n + K n^{alpha+1/2}), ``'power'``
    (Re alpha > 1/2, K n^{alpha+1/2}) and ``'critical'`` (alpha = 1/2).
    K = Gamma(alpha - 1/2) / (sqrt(2) sigma Gamma(alpha)).
    """
    dist = make_offspring(dist)
    alpha = complex(alpha)
    if regime == "auto":
        if alpha == 0.5:
            regime = "critical"
        elif alpha.real <= -0.5:
            regime = "linear"
        elif alpha.real < 0.5:
            regime = "two-term"
        else:
            regime = "power"
    if regime == "critical":
        c0 = 1.0 / math.sqrt(2 * math.pi * dist.sigma2)
        c = critical_constant(dist, **mu_kw) if dist.is_preset else None
        return MeanAsymptotic("critical", alpha, c, c0, 1.0)
    K = gamma_ratio([alpha - 0.5], [alpha]) / (math.sqrt(2) * dist.sigma)
    if regime == "linear":
        return MeanAsymptotic("linear", alpha, mu(dist, alpha, **mu_kw).value, 0.0, 1.0)
    if regime == "two-term":
        return MeanAsymptotic("two-term", alpha, mu(dist, alpha, **mu_kw).value, K, alpha + 0.5)
    if regime == "power":
        m = None
        if alpha.real < 1 and dist.is_preset and alpha != 0.5:
            m = mu_continued(dist, alpha, **mu_kw).value
        return MeanAsymptotic("power", alpha, m, K, alpha + 0.5)
    raise ValueError(f"unknown regime {regime!r}")
