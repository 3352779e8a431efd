"""Exhaustive enumeration of ordered trees, used as an exact oracle.

Every ordered tree with n nodes is listed as its preorder degree sequence
and weighted by prod_v p_{deg(v)}; normalising by the total weight gives
the law of the conditioned tree T_n.  Practical for n up to about 10.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .offspring import make_offspring

__all__ = ["enumerate_trees", "subtree_sizes_py", "depths_py", "brute_moment", "brute_law"]


def enumerate_trees(n: int, max_degree: int | None = None):
    """Yield preorder degree sequences of all ordered trees with n nodes."""
    if n < 1:
        return
    cap = n - 1 if max_degree is None else min(max_degree, n - 1)
    seq = [0] * n

    def rec(i: int, open_slots: int):
        # open_slots: children still to be placed after position i - 1
        remaining = n - i
        if remaining == 0:
            if open_slots == 0:
                yield tuple(seq)
            return
        if open_slots == 0:
            return
        # node i fills one slot and opens d new ones
        for d in range(0, min(cap, remaining - open_slots) + 1):
            seq[i] = d
            yield from rec(i + 1, open_slots - 1 + d)

    yield from rec(0, 1)


def subtree_sizes_py(degrees) -> np.ndarray:
    """Subtree sizes from a preorder degree sequence (reverse scan)."""
    n = len(degrees)
    size = np.ones(n, dtype=np.int64)
    stack: list[int] = []
    for i in range(n - 1, -1, -1):
        s = 1
        for _ in range(degrees[i]):
            s += stack.pop()
        size[i] = s
        stack.append(s)
    return size


def depths_py(degrees) -> np.ndarray:
    n = len(degrees)
    depth = np.zeros(n, dtype=np.int64)
    stack: list[list[int]] = []  # [depth of children, children left]
    for i in range(n):
        if stack:
            d = stack[-1][0]
            stack[-1][1] -= 1
            if stack[-1][1] == 0:
                stack.pop()
        else:
            d = 0
        depth[i] = d
        if degrees[i]:
            stack.append([d + 1, degrees[i]])
    return depth


@lru_cache(maxsize=64)
def brute_law(dist_key, n: int):
    """(degree sequences, probabilities) of the conditioned tree T_n."""
    dist = make_offspring(dist_key)
    p = dist.pmf(n)
    seqs = [s for s in enumerate_trees(n, dist.max_degree) if all(p[d] > 0 for d in s)]
    w = np.array([np.prod([p[d] for d in s]) for s in seqs])
    if w.sum() == 0:
        return [], w
    return seqs, w / w.sum()


def brute_moment(dist, n: int, alpha, ell: int = 1, alpha2=None, ell2: int = 0,
                 mu1: complex | None = None, mu2: complex | None = None) -> complex:
    """E[F_1(T_n)^ell F_2(T_n)^ell2] by enumeration.

    F_i = sum_v (|T_v|^{alpha_i} - mu_i), with mu_i = 0 when not given.
    """
    dist = make_offspring(dist)
    seqs, prob = brute_law(dist, n)
    total = 0j
    for s, w in zip(seqs, prob):
        sizes = subtree_sizes_py(s).astype(float)
        f1 = np.sum(np.exp(complex(alpha) * np.log(sizes)) - (mu1 or 0))
        val = f1 ** ell
        if ell2:
            f2 = np.sum(np.exp(complex(alpha2) * np.log(sizes)) - (mu2 or 0))
            val *= f2 ** ell2
        total += w * val
    return complex(total)
