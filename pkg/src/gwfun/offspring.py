"""Critical offspring distributions and their analytic quantities.

Four named presets are provided (``po1``, ``ge12``, ``bi212``, ``fullbin``)
together with arbitrary finitely supported laws.  Everything downstream
(ballot probabilities, generating-function recursions, samplers) consumes
an :class:`OffspringDist`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import reduce
from typing import Mapping, Sequence, Union

import numpy as np

__all__ = [
    "OffspringDist",
    "OffspringError",
    "NotCritical",
    "DegenerateVariance",
    "NegativeMass",
    "OutsideDisc",
    "PRESETS",
    "make_offspring",
    "pgf_and_derivatives",
    "char_fn",
]

PRESETS = ("po1", "ge12", "bi212", "fullbin")

_ALIASES = {
    "po1": "po1", "poisson1": "po1", "poisson": "po1",
    "ge12": "ge12", "geometric12": "ge12", "geometric": "ge12",
    "bi212": "bi212", "binomial212": "bi212", "binary": "bi212",
    "fullbin": "fullbin", "fullbinary": "fullbin",
}

CRITICAL_TOL = 1e-9
_SUM_TOL = 1e-9
_TAIL_CUTOFF = 1e-18


class OffspringError(ValueError):
    pass


class NotCritical(OffspringError):
    pass


class DegenerateVariance(OffspringError):
    pass


class NegativeMass(OffspringError):
    pass


class OutsideDisc(OffspringError):
    pass


@dataclass(frozen=True)
class OffspringDist:
    """An offspring law with mean one.

    ``probs`` holds ``p_0, ..., p_K`` for finitely supported laws and is
    ``None`` for the infinite-support presets, whose masses are produced on
    demand by :meth:`pmf`.
    """

    kind: str
    probs: tuple | None
    sigma2: float
    span: int
    third_moment_finite: bool = True

    @property
    def mean(self) -> float:
        return 1.0

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @property
    def is_preset(self) -> bool:
        return self.kind in PRESETS

    @property
    def max_degree(self) -> int | None:
        return None if self.probs is None else len(self.probs) - 1

    @property
    def p0(self) -> float:
        return float(self.pmf(0)[0])

    def pmf(self, cap: int | None = None) -> np.ndarray:
        """Masses ``p_0..p_cap``.

        For infinite-support laws with ``cap=None`` the vector is cut where
        the remaining tail drops below 1e-18 relative to the total.
        """
        if self.probs is not None:
            p = np.asarray(self.probs, dtype=float)
            if cap is None:
                return p.copy()
            out = np.zeros(cap + 1)
            k = min(cap + 1, p.size)
            out[:k] = p[:k]
            return out
        if cap is None:
            cap = 1
            while self._tail(cap) > _TAIL_CUTOFF:
                cap *= 2
            while cap > 1 and self._tail(cap - 1) <= _TAIL_CUTOFF:
                cap -= 1
        k = np.arange(cap + 1)
        if self.kind == "po1":
            from scipy.special import gammaln

            return np.exp(-1.0 - gammaln(k + 1.0))
        return np.exp2(-(k + 1.0))

    def _tail(self, cap: int) -> float:
        # P(xi > cap)
        if self.kind == "ge12":
            return 2.0 ** -(cap + 1)
        from scipy.stats import poisson

        return float(poisson.sf(cap, 1.0))

    def to_json(self) -> str:
        if self.is_preset:
            return json.dumps(self.kind)
        return json.dumps({str(k): p for k, p in enumerate(self.probs) if p > 0})

    def pgf(self, w, m: int = 0):
        return pgf_and_derivatives(self, w, m)

    def char_fn(self, t, which: str = "phi"):
        return char_fn(self, t, which)

    def __repr__(self) -> str:
        if self.is_preset:
            return f"OffspringDist({self.kind!r})"
        support = {k: p for k, p in enumerate(self.probs) if p > 0}
        return f"OffspringDist(custom, {support})"


def _from_probs(probs: np.ndarray, kind: str = "custom") -> OffspringDist:
    if np.any(probs < 0):
        raise NegativeMass("offspring masses must be nonnegative")
    if probs.size == 0:
        raise OffspringError("empty offspring law")
    total = probs.sum()
    if abs(total - 1.0) > _SUM_TOL:
        raise OffspringError(f"masses sum to {total!r}, not 1")
    if abs(total - 1.0) > 4 * np.finfo(float).eps:
        # renormalise decimal input; sums already within a few ulp are kept
        # as given so that serialisation round-trips bit for bit
        probs = probs / total
    while probs[-1] == 0:
        probs = probs[:-1]
    k = np.arange(probs.size)
    mean = float(k @ probs)
    if abs(mean - 1.0) > CRITICAL_TOL:
        raise NotCritical(f"mean is {mean!r}; a critical law needs mean 1")
    sigma2 = float(((k - 1.0) ** 2) @ probs)
    if sigma2 <= 0:
        raise DegenerateVariance("variance must be positive")
    support = [int(i) for i in np.nonzero(probs)[0] if i > 0]
    span = reduce(math.gcd, support, 0)
    return OffspringDist(kind, tuple(float(x) for x in probs), sigma2, span)


_PRESET_DISTS = {
    "po1": OffspringDist("po1", None, 1.0, 1),
    "ge12": OffspringDist("ge12", None, 2.0, 1),
    "bi212": OffspringDist("bi212", (0.25, 0.5, 0.25), 0.5, 1),
    "fullbin": OffspringDist("fullbin", (0.5, 0.0, 0.5), 1.0, 2),
}


def _parse_pairs(text: str) -> dict:
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        k, _, p = item.partition(":")
        if not _:
            raise OffspringError(f"cannot parse {item!r}; expected k:p")
        out[int(k)] = float(p)
    return out


PmfSpec = Union[str, Mapping, Sequence[float], OffspringDist]


def make_offspring(spec: PmfSpec) -> OffspringDist:
    """Build a validated offspring law.

    ``spec`` may be a preset name (``'po1'``, ``'ge12'``, ``'bi212'``,
    ``'fullbin'``), a ``'k:p,k:p'`` string, a JSON object string, a mapping
    ``{k: p}`` or a list ``[p_0, p_1, ...]``.

    >>> make_offspring("bi212").sigma2
    0.5
    >>> make_offspring({0: 0.5, 2: 0.5}).span
    2
    """
    if isinstance(spec, OffspringDist):
        return spec
    if isinstance(spec, str):
        key = spec.strip().lower().replace("_", "").replace("-", "")
        if key in _ALIASES:
            return _PRESET_DISTS[_ALIASES[key]]
        text = spec.strip()
        if text.startswith("{"):
            spec = {int(k): float(v) for k, v in json.loads(text).items()}
        elif ":" in text:
            spec = _parse_pairs(text)
        else:
            raise OffspringError(f"unknown offspring spec {spec!r}")
    if isinstance(spec, Mapping):
        items = {int(k): float(v) for k, v in spec.items()}
        if any(k < 0 for k in items):
            raise OffspringError("offspring values must be nonnegative integers")
        if any(v < 0 for v in items.values()):
            raise NegativeMass("offspring masses must be nonnegative")
        probs = np.zeros(max(items) + 1)
        for k, v in items.items():
            probs[k] += v
    else:
        probs = np.asarray(list(spec), dtype=float)
    return _from_probs(probs)


def _check_disc(w) -> None:
    if np.any(np.abs(w) > 1 + 1e-12):
        raise OutsideDisc("pgf evaluated outside the closed unit disc")


def pgf_and_derivatives(dist: OffspringDist, w, m: int = 0):
    """``m``-th derivative of the offspring pgf at ``w`` (|w| <= 1)."""
    if m < 0:
        raise ValueError("derivative order must be >= 0")
    dist = make_offspring(dist)
    w = np.asarray(w, dtype=complex)
    _check_disc(w)
    if dist.kind == "po1":
        out = np.exp(w - 1.0)
    elif dist.kind == "ge12":
        out = math.factorial(m) * (2.0 - w) ** (-m - 1)
    else:
        p = np.asarray(dist.probs)
        out = np.zeros_like(w)
        for k in range(p.size - 1, m - 1, -1):
            if p[k] == 0:
                continue
            ff = math.perm(k, m)
            out = out + p[k] * ff * w ** (k - m)
    return out[()] if out.ndim == 0 else out


def _sin_minus_id(t):
    # sin(t) - t without cancellation near 0
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < 0.1
    ts = np.where(small, t, 0.0)
    t2 = ts * ts
    series = -ts * t2 / 6.0 * (1 - t2 / 20.0 * (1 - t2 / 42.0 * (1 - t2 / 72.0)))
    return np.where(small, series, np.sin(t) - t)


def char_fn(dist: OffspringDist, t, which: str = "phi"):
    """Characteristic functions of the offspring law.

    ``which='phi'`` gives E exp(i t xi), ``'phi_tilde'`` the recentred
    exp(-i t) phi(t), and ``'rho'`` the defect 1 - phi_tilde(t), computed
    without cancellation for small ``t``.
    """
    dist = make_offspring(dist)
    t = np.asarray(t, dtype=float)
    if which == "phi":
        if dist.kind == "po1":
            out = np.exp(np.expm1(1j * t))
        elif dist.kind == "ge12":
            out = 1.0 / (2.0 - np.exp(1j * t))
        else:
            k = np.arange(len(dist.probs))
            out = np.exp(1j * np.multiply.outer(t, k)) @ np.asarray(dist.probs)
    elif which == "phi_tilde":
        out = 1.0 - char_fn(dist, t, "rho")
    elif which == "rho":
        if dist.kind == "po1":
            # 1 - exp(e^{it} - 1 - it)
            arg = -2.0 * np.sin(t / 2) ** 2 + 1j * _sin_minus_id(t)
            out = -np.expm1(arg)
        elif dist.kind == "ge12":
            out = 4.0 * np.sin(t / 2) ** 2 / (2.0 - np.exp(1j * t))
        else:
            # sum_k p_k (1 - e^{i(k-1)t})
            k = np.arange(len(dist.probs)) - 1.0
            theta = np.multiply.outer(t, k)
            terms = 2.0 * np.sin(theta / 2) ** 2 - 1j * np.sin(theta)
            out = terms @ np.asarray(dist.probs)
    else:
        raise ValueError(f"unknown characteristic function {which!r}")
    out = np.asarray(out, dtype=complex)
    return out[()] if out.ndim == 0 else out
