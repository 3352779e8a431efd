"""Monte Carlo on conditioned Galton-Watson trees.

Trees are drawn exactly from the conditioned law: an exchangeable degree
vector with sum n - 1 is drawn first, then rotated into a valid preorder
sequence by the cycle lemma.  Replication ``r`` of a run with seed ``s``
uses the stream ``SeedSequence([s, r])``, so results do not depend on how
replications are split across worker processes.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError, UnreachableSize
from .exact import ballot_table, mean_xn, mu as _mu
from .offspring import OffspringDist, make_offspring

__all__ = [
    "TreeShape",
    "McEstimate",
    "EmpiricalMoments",
    "rep_rng",
    "worker_count",
    "sample_degrees",
    "cycle_rotate",
    "sample_conditioned",
    "sample_unconditioned",
    "functional",
    "sample_functionals",
    "normalization",
    "empirical_moments",
    "fringe_ratio",
    "neg_alpha_cov",
    "depth_first_walk",
    "walk_intervals",
    "mc_estimate",
]


# ---------------------------------------------------------------------------

@dataclass
class TreeShape:
    """An ordered tree stored as its preorder outdegree sequence."""

    degrees: np.ndarray
    _sizes: np.ndarray | None = field(default=None, repr=False, compare=False)
    _depths: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.degrees = np.ascontiguousarray(self.degrees, dtype=np.int64)

    @property
    def n(self) -> int:
        return int(self.degrees.size)

    @property
    def subtree_sizes(self) -> np.ndarray:
        if self._sizes is None:
            self._sizes = _kernels.subtree_sizes(self.degrees)
        return self._sizes

    @property
    def depths(self) -> np.ndarray:
        if self._depths is None:
            self._depths = _kernels.depths(self.degrees)
        return self._depths

    @property
    def height(self) -> int:
        return int(self.depths.max())

    def is_valid(self) -> bool:
        """Preorder feasibility: partial sums of (deg - 1) stay >= 0 until the end."""
        w = np.cumsum(self.degrees - 1)
        return bool(w[-1] == -1 and (w.size == 1 or w[:-1].min() >= 0))

    def to_bytes(self) -> bytes:
        return self.degrees.astype("<i8").tobytes()

    @classmethod
    def from_bytes(cls, raw: bytes) -> "TreeShape":
        return cls(np.frombuffer(raw, dtype="<i8").copy())


@dataclass(frozen=True)
class McEstimate:
    """Sample mean with a 95% half-width per real/imaginary component."""

    mean: complex
    half_width: tuple
    reps: int
    seed: int
    info: dict = field(default_factory=dict, compare=False)

    def covers(self, target: complex, slack: float = 0.0) -> bool:
        """True when the target lies within half-width + slack in both components."""
        target = complex(target)
        return (abs(self.mean.real - target.real) <= self.half_width[0] + slack
                and abs(self.mean.imag - target.imag) <= self.half_width[1] + slack)


def mc_estimate(values, seed: int, info: dict | None = None) -> McEstimate:
    v = np.asarray(values, dtype=complex)
    reps = v.size
    if reps < 2:
        raise ValueError("need at least two replications")
    sd_re = float(np.std(v.real, ddof=1))
    sd_im = float(np.std(v.imag, ddof=1))
    hw = (1.96 * sd_re / math.sqrt(reps), 1.96 * sd_im / math.sqrt(reps))
    return McEstimate(complex(v.mean()), hw, reps, int(seed), dict(info or {}))


def rep_rng(seed: int, rep: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(rep)]))


def worker_count(workers: int | None = None) -> int:
    if workers is None:
        workers = int(os.environ.get("GWFUN_WORKERS", "1"))
    return max(1, int(workers))


def _run_chunks(func, args: tuple, reps: int, seed: int, workers: int | None):
    """Evaluate func(*args, start, stop, seed) over contiguous rep ranges, in order."""
    workers = worker_count(workers)
    if workers == 1 or reps < 2 * workers:
        return func(*args, 0, reps, seed)
    bounds = np.linspace(0, reps, workers + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futs = [ex.submit(func, *args, int(a), int(b), seed)
                for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        parts = [f.result() for f in futs]
    if isinstance(parts[0], tuple):
        return tuple(np.concatenate([p[i] for p in parts]) for i in range(len(parts[0])))
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# exact-size sampling

def _choose_mask(rng, total: int, k: int) -> np.ndarray:
    mask = np.zeros(total, dtype=np.int64)
    mask[rng.choice(total, size=k, replace=False)] = 1
    return mask


def _iid(dist: OffspringDist, rng, size: int) -> np.ndarray:
    if dist.kind == "po1":
        return rng.poisson(1.0, size)
    if dist.kind == "ge12":
        return rng.geometric(0.5, size) - 1
    p = np.asarray(dist.probs)
    return rng.choice(p.size, size=size, p=p)


def sample_degrees(dist, n: int, rng, method: str = "auto") -> np.ndarray:
    """Exchangeable vector (xi_1..xi_n | sum = n - 1), not yet rotated.

    ``'auto'`` uses the exact combinatorial form of each preset and, for
    other laws, rejection on the multinomial vector of degree counts
    followed by a uniform shuffle.  ``'rejection'`` draws whole iid
    sequences until the sum matches (a slow oracle for small n).
    """
    dist = make_offspring(dist)
    if n < 1 or (n - 1) % dist.span:
        raise UnreachableSize(f"trees of size {n} have probability zero")
    if method == "rejection":
        while True:
            d = _iid(dist, rng, n)
            if d.sum() == n - 1:
                return d.astype(np.int64)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    kind = dist.kind
    if kind == "po1":
        # iid Po(1) given the total is multinomial with equal cells
        return np.bincount(rng.integers(0, n, size=n - 1), minlength=n).astype(np.int64)
    if kind == "ge12":
        # uniform weak composition of n - 1 into n parts (stars and bars)
        bars = np.flatnonzero(_choose_mask(rng, 2 * n - 2, n - 1))
        edges = np.concatenate(([-1], bars, [2 * n - 2]))
        return (np.diff(edges) - 1).astype(np.int64)
    if kind == "bi212":
        bits = _choose_mask(rng, 2 * n, n - 1)
        return bits[0::2] + bits[1::2]
    if kind == "fullbin":
        return 2 * _choose_mask(rng, n, (n - 1) // 2)
    p = np.asarray(dist.probs)
    k = np.arange(p.size)
    while True:
        counts = rng.multinomial(n, p)
        if counts @ k == n - 1:
            break
    d = np.repeat(k, counts)
    rng.shuffle(d)
    return d.astype(np.int64)


def cycle_rotate(d: np.ndarray) -> np.ndarray:
    """The unique rotation of d (sum(d - 1) = -1) that is a preorder sequence."""
    c = np.cumsum(d - 1)
    j = (int(np.argmin(c)) + 1) % d.size
    return np.roll(d, -j)


def sample_conditioned(dist, n: int, rng=None, method: str = "auto") -> TreeShape:
    """Draw T_n, the Galton-Watson tree conditioned on n nodes."""
    rng = np.random.default_rng(rng)
    d = sample_degrees(dist, n, rng, method)
    return TreeShape(cycle_rotate(d))


def sample_unconditioned(dist, rng, cap: int):
    """An unconditioned GW tree, or None when it exceeds ``cap`` nodes."""
    dist = make_offspring(dist)
    chunk = 64
    parts = []
    level = 0
    total = 0
    while total < cap:
        take = min(chunk, cap - total)
        d = _iid(dist, rng, take).astype(np.int64)
        idx, level = _kernels.first_passage(d - 1, level)
        if idx >= 0:
            parts.append(d[: idx + 1])
            return TreeShape(np.concatenate(parts))
        parts.append(d)
        total += take
        chunk *= 2
    return None


# ---------------------------------------------------------------------------

def functional(tree: TreeShape, alphas, derivative: bool = False) -> np.ndarray:
    """X_n(alpha) = sum_v |T_v|^alpha for each alpha.

    With ``derivative=True`` returns sum_v |T_v|^alpha log |T_v| instead.
    """
    counts = np.bincount(tree.subtree_sizes)
    k = np.flatnonzero(counts)
    logk = np.log(k)
    a = np.atleast_1d(np.asarray(alphas, dtype=complex))
    if np.all(a.imag == 0):
        # real powers are exact for integer exponents
        w = np.power(k.astype(float)[None, :], a.real[:, None]).astype(complex)
    else:
        w = np.exp(np.multiply.outer(a, logk))
    if derivative:
        w = w * logk
    return w @ counts[k]


def _functional_chunk(dist, n, alphas, start, stop, seed):
    out = np.empty((stop - start, len(alphas)), dtype=complex)
    for r in range(start, stop):
        tree = sample_conditioned(dist, n, rep_rng(seed, r))
        out[r - start] = functional(tree, alphas)
    return out


def sample_functionals(dist, n: int, alphas, reps: int, seed: int,
                       workers: int | None = None) -> np.ndarray:
    """reps x len(alphas) array of X_n(alpha) over independent trees."""
    dist = make_offspring(dist)
    alphas = [complex(a) for a in np.atleast_1d(alphas)]
    return _run_chunks(_functional_chunk, (dist, n, alphas), reps, seed, workers)


def normalization(dist, n: int, alpha) -> float | complex:
    """Scale s with s (X_n - E X_n) converging in law.

    sigma n^{-alpha-1/2} for Re alpha > 0, n^{-1/2} for Re alpha < 0 and
    (n log n)^{-1/2} on the imaginary axis.
    """
    dist = make_offspring(dist)
    alpha = complex(alpha)
    if alpha.real > 0:
        return dist.sigma * complex(np.exp(-(alpha + 0.5) * math.log(n)))
    if alpha.real < 0:
        return 1 / math.sqrt(n)
    if alpha == 0:
        return 1.0
    return 1 / math.sqrt(n * math.log(n))


@dataclass
class EmpiricalMoments:
    dist: OffspringDist
    n: int
    alpha: complex
    estimates: dict
    centering: str
    samples: np.ndarray = field(repr=False)

    def to_table(self):
        from .genfunc import MomentTable

        t = MomentTable(self.dist, self.alpha, None, (True, False), "MonteCarlo")
        for j, est in self.estimates.items():
            arr = np.full(self.n + 1, np.nan + 0j)
            arr[self.n] = est.mean
            t.data[(j, 0)] = arr
        return t


def empirical_moments(dist, n: int, alpha, ell_max: int, reps: int, seed: int,
                      workers: int | None = None, exact_limit: int = 10**7) -> EmpiricalMoments:
    """Moments E[s (X_n - E X_n)]^j, j <= ell_max, with s from :func:`normalization`.

    Centering uses the exact mean when the ballot table is affordable and
    the sample mean otherwise (flagged in ``centering``).
    """
    dist = make_offspring(dist)
    if reps < 2:
        raise ValueError("reps must be >= 2")
    if n < 1 or (n - 1) % dist.span:
        raise UnreachableSize(f"trees of size {n} have probability zero")
    x = sample_functionals(dist, n, [alpha], reps, seed, workers)[:, 0]
    centering = "exact"
    try:
        if n > exact_limit:
            raise MemoryError
        m = mean_xn(dist, n, alpha)
    except (MemoryError, Exception):
        m = complex(x.mean())
        centering = "sample"
    z = normalization(dist, n, alpha) * (x - m)
    est = {j: mc_estimate(z ** j, seed, {"centering": centering}) for j in range(1, ell_max + 1)}
    return EmpiricalMoments(dist, n, complex(alpha), est, centering, z)


def fringe_ratio(dist, n: int, alpha, reps: int, seed: int, workers: int | None = None) -> McEstimate:
    """Mean of X_n(alpha)/n, which tends to mu(alpha) for Re alpha <= 0."""
    alpha = complex(alpha)
    if alpha.real > 0:
        raise DomainError("the fringe ratio converges only for Re alpha <= 0")
    x = sample_functionals(dist, n, [alpha], reps, seed, workers)[:, 0]
    return mc_estimate(x / n, seed)


def _cov_chunk(dist, alpha, beta, mua, mub, cap, start, stop, seed):
    vals = np.empty(stop - start, dtype=complex)
    sizes = np.empty(stop - start, dtype=np.int64)
    discards = np.zeros(stop - start, dtype=np.int64)
    for r in range(start, stop):
        rng = rep_rng(seed, r)
        while True:
            tree = sample_unconditioned(dist, rng, cap)
            if tree is not None:
                break
            discards[r - start] += 1
        N = tree.n
        Fa, Fb = functional(tree, [alpha, beta])
        fa = complex(np.exp(alpha * math.log(N)))
        fb = complex(np.exp(beta * math.log(N)))
        vals[r - start] = fa * (Fb - N * mub) + fb * (Fa - N * mua)
        sizes[r - start] = N
    return vals, sizes, discards


def neg_alpha_cov(dist, alpha, beta, reps: int, cap: int = 10**7, seed: int = 0,
                  workers: int | None = None) -> McEstimate:
    """Monte Carlo estimate of the limit covariance E[X^(alpha) X^(beta)] for Re alpha, Re beta < 0.

    Uses unconditioned GW trees T: E[f_a(T)(F_b(T) - |T| mu(b))] + (a <-> b)
    - mu(a + b) + (1 - sigma^{-2}) mu(a) mu(b), with f_a(T) = |T|^a and
    F_a(T) = sum_v |T_v|^a.  Trees above ``cap`` nodes are redrawn; the
    number of redraws and the 0.999 quantile of sizes are reported.
    """
    dist = make_offspring(dist)
    alpha, beta = complex(alpha), complex(beta)
    if alpha.real >= 0 or beta.real >= 0:
        raise DomainError("needs Re alpha, Re beta < 0")
    mua = _mu(dist, alpha).value
    mub = _mu(dist, beta).value
    muab = _mu(dist, alpha + beta).value
    vals, sizes, discards = _run_chunks(_cov_chunk, (dist, alpha, beta, mua, mub, cap), reps, seed, workers)
    shift = -muab + (1 - 1 / dist.sigma2) * mua * mub
    info = {
        "discards": int(discards.sum()),
        "size_q999": float(np.quantile(sizes, 0.999)),
        "cap": int(cap),
    }
    return mc_estimate(vals + shift, seed, info)


# ---------------------------------------------------------------------------

def depth_first_walk(tree: TreeShape) -> np.ndarray:
    """W(0..2n): depths along the contour, with W(0) = W(2n) = 0."""
    w, _, _ = _kernels.contour(tree.depths)
    return w


def walk_intervals(tree: TreeShape) -> tuple[np.ndarray, np.ndarray]:
    """First and last walk indices at which each node is visited."""
    _, first, last = _kernels.contour(tree.depths)
    return first, last
