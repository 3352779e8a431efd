"""Brownian excursion functionals and the supremum integral Y_inf.

An excursion is stored on the grid t_i = i/m together with the minimum of
each grid cell, drawn from the conditional law of a Brownian bridge between
the cell endpoints.  Double integrals over 0 < s < t < 1 are discretised
cell pair by cell pair: the kernel (t - s)^(alpha - 2) is integrated
exactly over each pair, and m(e; s, t) is replaced by the average of the
minima over the stretch strictly between the two cells and over the stretch
including them.  Within a single cell the path is taken to be linear.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError
from .sampler import McEstimate, _run_chunks, mc_estimate, rep_rng

__all__ = [
    "SparseTable",
    "ExcursionPath",
    "MotionPath",
    "sample_excursion",
    "eval_Y",
    "sample_yinf",
    "excursion_samples",
    "excursion_moment",
    "yinf_samples",
    "FORMS",
]

FORMS = ("wa0", "wa1", "wa2", "wb")


class SparseTable:
    """O(1) range-minimum queries after O(m log m) preprocessing."""

    def __init__(self, values):
        v = np.asarray(values, dtype=float)
        levels = [v]
        span = 1
        while 2 * span <= v.size:
            prev = levels[-1]
            levels.append(np.minimum(prev[:-span], prev[span:]))
            span *= 2
        self.levels = levels

    def query(self, i: int, j: int) -> float:
        """min(values[i..j]) for i <= j, both inclusive."""
        i, j = int(i), int(j)
        if i > j:
            i, j = j, i
        k = (j - i + 1).bit_length() - 1
        lv = self.levels[k]
        return float(min(lv[i], lv[j - (1 << k) + 1]))


@dataclass
class ExcursionPath:
    """Excursion on the grid i/m; ``cell_min[i]`` is the minimum over [i/m, (i+1)/m]."""

    values: np.ndarray
    cell_min: np.ndarray
    _rmq: SparseTable | None = field(default=None, repr=False, compare=False)

    @property
    def m(self) -> int:
        return self.values.size - 1

    @property
    def rmq(self) -> SparseTable:
        if self._rmq is None:
            self._rmq = SparseTable(self.values)
        return self._rmq

    def grid_min(self, i: int, j: int) -> float:
        return self.rmq.query(i, j)

    def reversed(self) -> "ExcursionPath":
        return ExcursionPath(self.values[::-1].copy(), self.cell_min[::-1].copy())

    def area(self) -> float:
        return float(np.trapezoid(self.values, dx=1.0 / self.m))


@dataclass
class MotionPath:
    """Brownian motion on a grid with its running supremum."""

    values: np.ndarray
    sup: np.ndarray
    dt: float


def _bridge_min(a, b, dt, u):
    # minimum of a Brownian bridge from a to b over time dt
    return 0.5 * (a + b - np.sqrt((b - a) ** 2 - 2.0 * dt * np.log(u)))


def sample_excursion(m: int, rng, method: str = "bessel3") -> ExcursionPath:
    """Standard Brownian excursion on m grid cells.

    ``'bessel3'`` takes the norm of a three-dimensional Brownian bridge,
    which has the excursion's finite-dimensional laws exactly.
    ``'vervaat'`` rotates a mean-shifted Gaussian random-walk bridge at its
    minimum; its grid values are biased low by order m^{-1/2}.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    dt = 1.0 / m
    if method == "bessel3":
        steps = rng.standard_normal((3, m)) * math.sqrt(dt)
        b = np.zeros((3, m + 1))
        np.cumsum(steps, axis=1, out=b[:, 1:])
        b -= np.linspace(0.0, 1.0, m + 1) * b[:, -1:]
        e = np.sqrt(np.einsum("ij,ij->j", b, b))
        e[0] = e[-1] = 0.0
    elif method == "vervaat":
        x = rng.standard_normal(m)
        x -= x.mean()
        w = np.concatenate(([0.0], np.cumsum(x)))
        k = int(np.argmin(w[:-1]))
        e = (np.concatenate((w[k:-1], w[: k + 1])) - w[k]) / math.sqrt(m)
        e[0] = e[-1] = 0.0
    else:
        raise ValueError(f"unknown method {method!r}")
    c = np.maximum(_bridge_min(e[:-1], e[1:], dt, rng.random(m)), 0.0)
    return ExcursionPath(e, c)


def _pow(alpha: complex, x):
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    pos = x > 0
    out[pos] = np.exp(alpha * np.log(x[pos]))
    return out


def _single_weights(alpha: complex, m: int):
    """Weights w with sum_i w_i e_i = int_0^1 t^(alpha-1) e(t) dt for piecewise-linear e.

    Times alpha, i.e. returns alpha * int t^(alpha-1) e for the hat basis.
    """
    # alpha int_{cell} t^(alpha-1) hat_i(t) dt computed from moments of each cell
    t = np.arange(m + 1) / m
    P1 = _pow(alpha, t)                      # t^alpha
    P2 = _pow(alpha + 1, t) * alpha / (alpha + 1)  # alpha int_0^t u^alpha du
    A = np.diff(P1)                          # alpha int_cell u^(alpha-1)
    B = np.diff(P2)                          # alpha int_cell u^alpha
    # on cell [t_i, t_i+1]: e = e_i (t_i+1 - u)/dt + e_i+1 (u - t_i)/dt
    w = np.zeros(m + 1, dtype=complex)
    w[:-1] += (t[1:] * A - B) * m
    w[1:] += (B - t[:-1] * A) * m
    return w


def eval_Y(path: ExcursionPath, alpha, form: str = "wa2") -> complex:
    """Discretised Y(alpha) on one excursion path.

    Forms ``wa0``, ``wa1``, ``wa2`` need Re alpha > 1/2 and ``wb`` needs
    Re alpha > 1.  At alpha = 1 every form reduces to 2 int e.
    """
    alpha = complex(alpha)
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}")
    if form == "wb":
        if alpha.real <= 1:
            raise DomainError("form wb needs Re alpha > 1")
    elif alpha.real <= 0.5:
        raise DomainError("forms wa0/wa1/wa2 need Re alpha > 1/2")
    e = path.values
    m = path.m
    dt = 1.0 / m
    if alpha == 1:
        return complex(2 * np.trapezoid(e, dx=dt))

    inner, outer = _kernels.lag_cell_min_sums(e, path.cell_min)
    M = 0.5 * (inner[1:] + outer[1:])        # lags d = 1..m-1
    d = np.arange(m + 1, dtype=float)
    pw = _pow(alpha, d)
    lap = pw[2:] + pw[:-2] - 2 * pw[1:-1]   # second difference at d = 1..m-1
    scale = complex(np.exp(alpha * math.log(dt)))
    delta = np.abs(np.diff(e))
    # within one cell the path is linear: m(s, t) = min(e(s), e(t))
    diag_lin = (alpha - 1) / (alpha + 1)

    if form == "wb":
        ebar = 0.5 * (e[:-1] + e[1:])
        dbl = 2 * ebar.sum() - diag_lin * delta.sum() + 2 * (lap @ M)
        return complex(scale * dbl)

    ebar = 0.5 * (e[:-1] + e[1:])
    cs = np.concatenate(([0.0], np.cumsum(ebar)))
    lags = np.arange(1, m)
    right = cs[m] - cs[lags]                  # sum_i ebar_{i+d}
    left = cs[m - lags]                       # sum_i ebar_i
    w = _single_weights(alpha, m)
    if form == "wa0":
        single = 2 * (w @ e)
        gap = 2 * (right - M)
        diag = diag_lin * np.clip(np.diff(e), 0, None).sum() * 2
    elif form == "wa1":
        single = 2 * (w[::-1] @ e)
        gap = 2 * (left - M)
        diag = diag_lin * np.clip(-np.diff(e), 0, None).sum() * 2
    else:
        single = (w + w[::-1]) @ e
        gap = left + right - 2 * M
        diag = diag_lin * delta.sum()
    return complex(single - scale * (lap @ gap + diag))


def sample_yinf(T: float, m: int, rng, return_path: bool = False):
    """One draw of int_0^T e^{-t} S(t) dt, S the running supremum of Brownian motion.

    The grid has m points per unit time; the supremum at each grid point is
    exact, using the maximum of the Brownian bridge inside every cell.  The
    dropped tail beyond T has mean at most e^{-T} (sqrt(2T/pi) + 2^{-1/2}).
    """
    if T < 10 or m < 1024:
        raise ValueError("needs T >= 10 and m >= 1024 per unit time")
    k = int(round(T * m))
    dt = T / k
    b = np.zeros(k + 1)
    np.cumsum(rng.standard_normal(k) * math.sqrt(dt), out=b[1:])
    s = _kernels.bridge_max_integral(b, rng.random(k), dt)
    t = np.arange(k + 1) * dt
    val = float(np.trapezoid(np.exp(-t) * s, dx=dt))
    if return_path:
        return val, MotionPath(b, s, dt)
    return val


def yinf_tail_bound(T: float) -> float:
    return math.exp(-T) * (math.sqrt(2 * T / math.pi) + 2 ** -0.5)


# ---------------------------------------------------------------------------
# replicated runs

def _exc_chunk(alphas, form, m, method, start, stop, seed):
    out = np.empty((stop - start, len(alphas)), dtype=complex)
    for r in range(start, stop):
        path = sample_excursion(m, rep_rng(seed, r), method)
        for j, a in enumerate(alphas):
            out[r - start, j] = eval_Y(path, a, form)
    return out


def excursion_samples(alphas, form: str = "wa2", m: int = 4096, reps: int = 1000,
                      seed: int = 0, method: str = "bessel3", workers: int | None = None) -> np.ndarray:
    """reps x len(alphas) array of discretised Y(alpha) over independent excursions."""
    alphas = [complex(a) for a in np.atleast_1d(alphas)]
    return _run_chunks(_exc_chunk, (alphas, form, m, method), reps, seed, workers)


def excursion_moment(alpha, ell: int = 1, form: str = "wa2", m: int = 4096, reps: int = 1000,
                     seed: int = 0, method: str = "bessel3", workers: int | None = None) -> McEstimate:
    """Monte Carlo estimate of E Y(alpha)^ell from the excursion representation."""
    x = excursion_samples([alpha], form, m, reps, seed, method, workers)[:, 0]
    return mc_estimate(x ** ell, seed, {"form": form, "m": m, "method": method})


def _yinf_chunk(T, m, start, stop, seed):
    return np.array([sample_yinf(T, m, rep_rng(seed, r)) for r in range(start, stop)])


def yinf_samples(reps: int, seed: int, T: float = 20.0, m: int = 1024,
                 workers: int | None = None) -> np.ndarray:
    return _run_chunks(_yinf_chunk, (T, m), reps, seed, workers)
