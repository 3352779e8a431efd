"""Truncated power series and the generating-function moment recursion.

With F(T) = sum_v b_{|T_v|} and M_l(z) = E[F(T)^l z^{|T|}], the series
M_l satisfy

    M_l = (z y'/y) sum_{m=0}^{l} (1/m!) sum'' multinom(l; l_0..l_m)
          B^{(.) l_0} (.) [z M_{l_1} ... M_{l_m} Phi^{(m)}(y)]

where (.) is the Hadamard (coefficientwise) product, y(z) = E z^{|T|} and
sum'' runs over tuples with 1 <= l_i < l for i >= 1.  Dividing [z^n] M_l by
q_n = [z^n] y gives E[F(T_n)^l] exactly, for every n up to the truncation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import CenteredRequiresSubcriticalAlpha, DivisionByZeroLeadingCoefficient
from .exact import ballot_table, mu as _mu
from .offspring import OffspringDist, make_offspring

__all__ = [
    "TruncSeries",
    "MomentTable",
    "series_mul",
    "series_hadamard",
    "series_zlogderiv",
    "series_div",
    "series_exp",
    "y_series",
    "pgf_derivative_series",
    "moment_series",
    "mixed_moment_series",
    "power_coeffs",
]


class TruncSeries:
    """Power series sum_{n <= order} c_n z^n with complex coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex, copy=True)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty vector")
        self.coeffs = c

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def zeros(cls, order: int) -> "TruncSeries":
        return cls(np.zeros(order + 1))

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        c = np.zeros(order + 1)
        c[0] = 1
        return cls(c)

    def truncate(self, order: int) -> "TruncSeries":
        return TruncSeries(self.coeffs[: order + 1])

    def __add__(self, other):
        if isinstance(other, TruncSeries):
            k = min(self.order, other.order) + 1
            return TruncSeries(self.coeffs[:k] + other.coeffs[:k])
        c = self.coeffs.copy()
        c[0] += other
        return TruncSeries(c)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return series_mul(self, other)
        return TruncSeries(self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return series_div(self, other)
        return TruncSeries(self.coeffs / other)

    def shift(self, k: int = 1) -> "TruncSeries":
        """Multiply by z^k, keeping the order."""
        c = np.zeros_like(self.coeffs)
        if k < c.size:
            c[k:] = self.coeffs[: c.size - k]
        return TruncSeries(c)

    def derivative(self) -> "TruncSeries":
        n = np.arange(1, self.coeffs.size)
        return TruncSeries(self.coeffs[1:] * n if n.size else np.zeros(1))

    def __call__(self, z):
        return np.polyval(self.coeffs[::-1], z)

    def __repr__(self) -> str:
        head = ", ".join(f"{c:.6g}" for c in self.coeffs[:4])
        return f"TruncSeries(order={self.order}, [{head}{', ...' if self.order > 3 else ''}])"


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Cauchy product truncated to the smaller order."""
    k = min(a.order, b.order) + 1
    return TruncSeries(np.convolve(a.coeffs[:k], b.coeffs[:k])[:k])


def series_hadamard(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Coefficientwise product."""
    k = min(a.order, b.order) + 1
    return TruncSeries(a.coeffs[:k] * b.coeffs[:k])


def series_div(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """a / b for b_0 != 0."""
    k = min(a.order, b.order) + 1
    bc = b.coeffs[:k]
    if bc[0] == 0:
        raise DivisionByZeroLeadingCoefficient("series division needs b_0 != 0")
    ac = a.coeffs[:k]
    out = np.zeros(k, dtype=complex)
    for n in range(k):
        acc = ac[n]
        if n:
            acc = acc - np.dot(bc[1: n + 1], out[n - 1:: -1][:n])
        out[n] = acc / bc[0]
    return TruncSeries(out)


def series_zlogderiv(a: TruncSeries) -> TruncSeries:
    """z a'(z) / a(z) for a with a_0 = 0 and a_1 != 0.

    Writing a = z u, this is 1 + z u'/u; the result has order a.order - 1.
    """
    if a.coeffs[0] != 0:
        raise DivisionByZeroLeadingCoefficient("zlogderiv expects a_0 = 0")
    if a.order < 1 or a.coeffs[1] == 0:
        raise DivisionByZeroLeadingCoefficient("zlogderiv expects a_1 != 0")
    u = TruncSeries(a.coeffs[1:])
    zu = TruncSeries(u.coeffs * np.arange(u.coeffs.size))
    return series_div(zu, u) + 1.0


def series_exp(g: TruncSeries) -> TruncSeries:
    """exp(g) via n f_n = sum_k k g_k f_{n-k}."""
    N = g.order
    gc = g.coeffs
    kg = gc * np.arange(N + 1)
    f = np.zeros(N + 1, dtype=complex)
    f[0] = np.exp(gc[0])
    for n in range(1, N + 1):
        f[n] = np.dot(kg[1: n + 1], f[n - 1:: -1][:n]) / n
    return TruncSeries(f)


# ---------------------------------------------------------------------------

def y_series(dist, N: int) -> TruncSeries:
    """y(z) = sum q_n z^n with q_n = P(S_n = n-1)/n read from the ballot table."""
    dist = make_offspring(dist)
    if N < 1:
        raise ValueError("order must be >= 1")
    tab = ballot_table(dist, N)
    n = np.arange(N + 1)
    q = np.zeros(N + 1)
    q[1:] = tab.diag1[1:] / n[1:]
    return TruncSeries(q)


def pgf_derivative_series(dist, y: TruncSeries, m_max: int) -> list[TruncSeries]:
    """Series of Phi^{(m)}(y(z)) for m = 0..m_max."""
    dist = make_offspring(dist)
    N = y.order
    if dist.kind == "po1":
        e = series_exp(y - 1.0)
        return [e] * (m_max + 1)
    if dist.kind == "ge12":
        r = series_div(TruncSeries.one(N), 2.0 - y)
        out = []
        acc = r
        for m in range(m_max + 1):
            out.append(acc * math.factorial(m))
            acc = acc * r
        return out
    p = np.asarray(dist.probs, dtype=float)
    K = p.size - 1
    powers = [TruncSeries.one(N)]
    for _ in range(K):
        powers.append(powers[-1] * y)
    out = []
    for m in range(m_max + 1):
        acc = TruncSeries.zeros(N)
        for k in range(m, K + 1):
            if p[k]:
                acc = acc + powers[k - m] * (p[k] * math.perm(k, m))
        out.append(acc)
    return out


def power_coeffs(alpha, N: int, mu: complex | None = None) -> np.ndarray:
    """b_n = n^alpha (or n^alpha - mu) for n = 0..N, with b_0 = 0."""
    b = np.zeros(N + 1, dtype=complex)
    n = np.arange(1, N + 1)
    b[1:] = np.exp(complex(alpha) * np.log(n))
    if mu is not None:
        b[1:] -= mu
    return b


@dataclass
class MomentTable:
    """Moments E[F_1(T_n)^l1 F_2(T_n)^l2] for n <= N.

    ``data[(l1, l2)]`` is an array indexed by n; entries with q_n = 0 are nan.
    """

    dist: OffspringDist
    alpha: complex
    alpha2: complex | None
    centered: tuple
    provenance: str
    data: dict = field(default_factory=dict)
    mu_used: tuple = (None, None)

    @property
    def N(self) -> int:
        return next(iter(self.data.values())).size - 1

    def get(self, n: int, l1: int, l2: int = 0) -> complex:
        return complex(self.data[(l1, l2)][n])

    @property
    def entries(self) -> dict:
        out = {}
        for (l1, l2), arr in self.data.items():
            for n in np.flatnonzero(np.isfinite(arr)):
                out[(int(n), l1, l2)] = complex(arr[n])
        return out


def _resolve_centering(dist, alpha, centered, mu):
    alpha = complex(alpha)
    if centered == "auto":
        centered = 0 < alpha.real < 0.5
    if centered:
        if alpha.real >= 0.5:
            raise CenteredRequiresSubcriticalAlpha("centering by mu(alpha) needs Re alpha < 1/2")
        if mu is None:
            mu = _mu(dist, alpha).value
        return True, complex(mu)
    return False, None


def _normalize(dist, M: TruncSeries, q: np.ndarray, N: int) -> np.ndarray:
    out = np.full(N + 1, np.nan + 0j)
    ok = q[: N + 1] > 0
    out[ok] = M.coeffs[: N + 1][ok] / q[: N + 1][ok]
    return out


def moment_series(dist, alpha, ell: int, N: int = 512, centered="auto",
                  mu: complex | None = None) -> MomentTable:
    """Exact E[F(T_n)^j] for j <= ell and n <= N, with F = sum_v b_{|T_v|}.

    ``centered`` selects b_n = n^alpha - mu(alpha) (``True``) or n^alpha
    (``False``); ``'auto'`` centres exactly when 0 < Re alpha < 1/2.
    """
    dist = make_offspring(dist)
    if ell < 1:
        raise ValueError("ell must be >= 1")
    is_c, mu_v = _resolve_centering(dist, alpha, centered, mu)
    Np = N + 1
    y = y_series(dist, Np)
    D = series_zlogderiv(y)                # order N
    y = y.truncate(N)
    phis = [s.truncate(N) for s in pgf_derivative_series(dist, y, ell)]
    b = power_coeffs(alpha, N, mu_v)
    bpow = [np.ones(N + 1, dtype=complex)]
    for _ in range(ell):
        bpow.append(bpow[-1] * b)
    M: dict[int, TruncSeries] = {0: y}
    for l in range(1, ell + 1):
        # P[m][s]: sum over ordered m-tuples in 1..l-1 with sum s of prod M_j / j!
        P = [{0: TruncSeries.one(N)}]
        for m in range(1, l + 1):
            cur: dict[int, TruncSeries] = {}
            for s_prev, ser in P[-1].items():
                for j in range(1, l):
                    s = s_prev + j
                    if s > l:
                        break
                    term = ser * (M[j] / math.factorial(j))
                    cur[s] = cur[s] + term if s in cur else term
            if not cur:
                break
            P.append(cur)
        total = TruncSeries.zeros(N)
        for l0 in range(l + 1):
            s = l - l0
            inner = TruncSeries.zeros(N)
            for m, Pm in enumerate(P):
                if s in Pm:
                    inner = inner + (Pm[s] * phis[m]) / math.factorial(m)
            if not np.any(inner.coeffs):
                continue
            inner = inner.shift(1) * (math.factorial(l) / math.factorial(l0))
            total = total + TruncSeries(bpow[l0] * inner.coeffs)
        M[l] = D * total
    q = y.coeffs.real
    table = MomentTable(dist, complex(alpha), None, (is_c, False), "GenFunc", mu_used=(mu_v, None))
    for l in range(1, ell + 1):
        table.data[(l, 0)] = _normalize(dist, M[l], q, N)
    return table


def mixed_moment_series(dist, alpha1, alpha2, ell1: int, ell2: int, N: int = 512,
                        centered1="auto", centered2="auto",
                        mu1: complex | None = None, mu2: complex | None = None) -> MomentTable:
    """Exact mixed moments E[F_1(T_n)^j1 F_2(T_n)^j2] for j1 <= ell1, j2 <= ell2.

    Bottom-up over j1 + j2; the inner sum starts at m = 0 so that the
    terms B_1^{l} (.) B_2^{r} (.) y are included.
    """
    dist = make_offspring(dist)
    if ell1 < 0 or ell2 < 0 or ell1 + ell2 < 1:
        raise ValueError("need ell1, ell2 >= 0 with ell1 + ell2 >= 1")
    c1, m1 = _resolve_centering(dist, alpha1, centered1, mu1)
    c2, m2 = _resolve_centering(dist, alpha2, centered2, mu2)
    y = y_series(dist, N + 1)
    D = series_zlogderiv(y)
    y = y.truncate(N)
    L = ell1 + ell2
    phis = [s.truncate(N) for s in pgf_derivative_series(dist, y, L)]
    b1 = power_coeffs(alpha1, N, m1)
    b2 = power_coeffs(alpha2, N, m2)
    bp1 = [np.ones(N + 1, dtype=complex)]
    bp2 = [np.ones(N + 1, dtype=complex)]
    for _ in range(ell1):
        bp1.append(bp1[-1] * b1)
    for _ in range(ell2):
        bp2.append(bp2[-1] * b2)
    M: dict[tuple, TruncSeries] = {(0, 0): y}
    order = sorted(((i, j) for i in range(ell1 + 1) for j in range(ell2 + 1) if i + j >= 1),
                   key=lambda t: (t[0] + t[1], t))
    for (l, r) in order:
        tot = l + r
        parts = [(i, j) for (i, j) in M if 1 <= i + j < tot and i <= l and j <= r]
        P = [{(0, 0): TruncSeries.one(N)}]
        for m in range(1, tot + 1):
            cur: dict[tuple, TruncSeries] = {}
            for (s1, s2), ser in P[-1].items():
                for (i, j) in parts:
                    t1, t2 = s1 + i, s2 + j
                    if t1 > l or t2 > r:
                        continue
                    term = ser * (M[(i, j)] / (math.factorial(i) * math.factorial(j)))
                    cur[(t1, t2)] = cur[(t1, t2)] + term if (t1, t2) in cur else term
            if not cur:
                break
            P.append(cur)
        total = TruncSeries.zeros(N)
        for l0 in range(l + 1):
            for r0 in range(r + 1):
                key = (l - l0, r - r0)
                inner = TruncSeries.zeros(N)
                for m, Pm in enumerate(P):
                    if key in Pm:
                        inner = inner + (Pm[key] * phis[m]) / math.factorial(m)
                if not np.any(inner.coeffs):
                    continue
                coef = math.factorial(l) * math.factorial(r) / (math.factorial(l0) * math.factorial(r0))
                inner = inner.shift(1) * coef
                total = total + TruncSeries(bp1[l0] * bp2[r0] * inner.coeffs)
        M[(l, r)] = D * total
    q = y.coeffs.real
    table = MomentTable(dist, complex(alpha1), complex(alpha2), (c1, c2), "GenFunc", mu_used=(m1, m2))
    for key in order:
        table.data[key] = _normalize(dist, M[key], q, N)
    return table
