import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from gwfun.errors import DomainError, UnreachableSize
from gwfun.exact import mean_xn
from gwfun.offspring import make_offspring
from gwfun.sampler import (TreeShape, cycle_rotate, depth_first_walk, fringe_ratio, functional,
                           neg_alpha_cov, normalization, sample_conditioned, sample_degrees,
                           sample_functionals, sample_unconditioned, walk_intervals)


def _preorders(n, prefix=(), open_slots=1):
    """Every preorder degree sequence of length n (plane trees on n nodes)."""
    left = n - len(prefix)
    if left == 0:
        if open_slots == 0:
            yield prefix
        return
    if open_slots == 0:
        return
    for k in range(left):
        slots = open_slots - 1 + k
        if slots <= left - 1:
            yield from _preorders(n, prefix + (k,), slots)


def _enumerate(dist, n):
    """All plane trees of size n with their conditioned GW probabilities."""
    p = make_offspring(dist).pmf(n)
    out = {}
    for seq in _preorders(n):
        w = math.prod(p[k] if k < p.size else 0.0 for k in seq)
        if w > 0:
            out[seq] = w
    z = sum(out.values())
    return {k: v / z for k, v in out.items()}


def test_single_node():
    for d in ("po1", "ge12", "bi212", "fullbin", "0:0.4,1:0.4,3:0.2"):
        t = sample_conditioned(d, 1, 0)
        assert t.degrees.tolist() == [0]


def test_bi212_three_nodes_path_probability():
    # weights p1 p1 p0 = 1/16 against p2 p0 p0 = 1/64
    p = (1 / 16) / (1 / 16 + 1 / 64)
    rng = np.random.default_rng(1)
    reps = 100000
    paths = sum(sample_conditioned("bi212", 3, rng).degrees.tolist() == [1, 1, 0] for _ in range(reps))
    assert abs(paths / reps - p) < 3 * math.sqrt(p * (1 - p) / reps)


def test_ge12_root_degree_chi_square():
    n = 8
    law = _enumerate("ge12", n)
    expected = Counter()
    for seq, w in law.items():
        expected[seq[0]] += w
    rng = np.random.default_rng(2)
    reps = 20000
    obs = Counter(int(sample_conditioned("ge12", n, rng).degrees[0]) for _ in range(reps))
    ks = sorted(expected)
    f_obs = np.array([obs[k] for k in ks], dtype=float)
    f_exp = np.array([expected[k] for k in ks]) * reps
    assert stats.chisquare(f_obs, f_exp).pvalue > 0.01


@pytest.mark.parametrize("dist", ["po1", "ge12", "bi212", "fullbin", "0:0.4,1:0.4,3:0.2"])
def test_tree_law_matches_enumeration(dist):
    n = 5 if dist != "fullbin" else 7
    law = _enumerate(dist, n)
    rng = np.random.default_rng(3)
    reps = 20000
    obs = Counter(tuple(sample_conditioned(dist, n, rng).degrees.tolist()) for _ in range(reps))
    assert set(obs) <= set(law)
    tv = 0.5 * sum(abs(obs[k] / reps - w) for k, w in law.items())
    # expected TV of the empirical law is about sqrt(K / (2 pi reps))
    assert tv < 2.5 * math.sqrt(len(law) / (2 * math.pi * reps)) + 1e-3


@pytest.mark.parametrize("dist", ["po1", "ge12", "bi212"])
def test_functional_law_tv(dist):
    n = 6
    law = _enumerate(dist, n)
    exact = Counter()
    for seq, w in law.items():
        exact[round(functional(TreeShape(np.array(seq)), [2]).real[0])] += w
    rng = np.random.default_rng(4)
    reps = 100000
    vals = np.array([round(functional(sample_conditioned(dist, n, rng), [2]).real[0])
                     for _ in range(reps)])
    emp = Counter(vals.tolist())
    tv = 0.5 * sum(abs(emp[k] / reps - exact[k]) for k in set(emp) | set(exact))
    assert tv <= 0.01


def test_rejection_oracle_agrees():
    rng = np.random.default_rng(5)
    n, reps = 6, 8000
    a = Counter(tuple(cycle_rotate(sample_degrees("0:0.4,1:0.4,3:0.2", n, rng, "rejection")).tolist())
                for _ in range(reps))
    b = Counter(tuple(sample_conditioned("0:0.4,1:0.4,3:0.2", n, rng).degrees.tolist())
                for _ in range(reps))
    keys = sorted(set(a) | set(b))
    table = np.array([[a[k] for k in keys], [b[k] for k in keys]])
    assert stats.chi2_contingency(table).pvalue > 0.01


def test_unreachable_size():
    with pytest.raises(UnreachableSize):
        sample_conditioned("fullbin", 4, 0)


def test_cycle_lemma_and_structure(rng):
    for dist in ("po1", "ge12", "bi212", "fullbin"):
        for n in (1, 3, 51, 1001):
            t = sample_conditioned(dist, n, rng)
            assert t.is_valid()
            assert t.subtree_sizes[0] == n
            assert t.degrees.sum() == n - 1
            w = depth_first_walk(t)
            assert w.size == 2 * n + 1 and w[0] == 0 and w[-1] == 0
            assert w.max() == t.height
            first, last = walk_intervals(t)
            assert np.all(last - first + 2 == 2 * t.subtree_sizes)


def test_walk_of_a_path():
    t = TreeShape(np.array([1, 1, 0]))
    assert depth_first_walk(t).tolist() == [0, 0, 1, 2, 1, 0, 0]


def test_functional_identities(rng):
    t = TreeShape(np.array([1, 1, 0]))
    assert functional(t, [2])[0] == 14
    for _ in range(5):
        t = sample_conditioned("po1", 200, rng)
        f0, f1 = functional(t, [0, 1]).real
        assert f0 == 200
        assert f1 == 200 + t.depths.sum()
        d = functional(t, [1], derivative=True).real[0]
        assert abs(d - np.sum(t.subtree_sizes * np.log(t.subtree_sizes))) < 1e-9 * d


def test_serialization_round_trip(rng):
    t = sample_conditioned("ge12", 500, rng)
    raw = t.to_bytes()
    u = TreeShape.from_bytes(raw)
    assert u.to_bytes() == raw
    assert np.array_equal(u.degrees, t.degrees)


def test_seed_determinism_across_workers():
    a = sample_functionals("po1", 300, [0.5, 1, -1], reps=12, seed=42, workers=1)
    b = sample_functionals("po1", 300, [0.5, 1, -1], reps=12, seed=42, workers=3)
    assert a.tobytes() == b.tobytes()
    c = sample_functionals("po1", 300, [0.5, 1, -1], reps=12, seed=43, workers=1)
    assert not np.array_equal(a, c)


def test_mean_matches_exact():
    n = 400
    x = sample_functionals("ge12", n, [1.5], reps=2000, seed=8)[:, 0].real
    m = mean_xn("ge12", n, 1.5).real
    assert abs(x.mean() - m) < 4 * x.std() / math.sqrt(x.size)


def test_normalization_regimes():
    assert normalization("ge12", 100, 1) == pytest.approx(math.sqrt(2) * 100 ** -1.5)
    assert normalization("po1", 100, -2) == 0.1
    assert normalization("po1", 100, 0) == 1.0
    assert normalization("po1", 100, 2j) == pytest.approx(1 / math.sqrt(100 * math.log(100)))


def test_fringe_ratio():
    est = fringe_ratio("po1", 2000, -1, reps=200, seed=1)
    assert abs(est.mean.real - 0.5) < 0.01
    assert fringe_ratio("po1", 50, 0, reps=4, seed=0).mean == 1
    with pytest.raises(DomainError):
        fringe_ratio("po1", 50, 0.5, reps=4, seed=0)


def test_unconditioned_trees(rng):
    sizes = []
    for _ in range(2000):
        # |T| has a heavy n^{-3/2} tail, so a few draws may exceed the cap
        t = sample_unconditioned("ge12", rng, 10**5)
        if t is not None:
            assert t.is_valid()
            sizes.append(t.n)
    assert len(sizes) > 1900
    # P(|T| = 1) = p0 = 1/2
    assert abs(np.mean(np.array(sizes) == 1) - 0.5) < 0.04
    # a cap of one node rejects every tree with a root of positive degree
    capped = [sample_unconditioned("ge12", np.random.default_rng(s), 1) for s in range(50)]
    assert all(t is None or t.n == 1 for t in capped)
    assert any(t is None for t in capped)


def test_neg_alpha_cov_against_finite_n_variance():
    est = neg_alpha_cov("po1", -1, -1, reps=40000, seed=3)
    assert abs(est.mean.imag) < 1e-12
    assert est.mean.real > 0
    assert set(est.info) >= {"discards", "size_q999", "cap"}
    n = 2000
    x = sample_functionals("po1", n, [-1], reps=3000, seed=4)[:, 0].real
    v = x.var(ddof=1) / n
    # both are noisy; agreement to about 15% is what these sizes support
    assert abs(est.mean.real / v - 1) < 0.15 + 2 * est.half_width[0] / est.mean.real


def test_neg_alpha_cov_symmetric():
    a = neg_alpha_cov("ge12", -0.5, -1.5, reps=2000, seed=5)
    b = neg_alpha_cov("ge12", -1.5, -0.5, reps=2000, seed=5)
    assert a.mean == pytest.approx(b.mean, rel=1e-12)


def test_height_scaling():
    # E sup W sigma / sqrt(n) -> 2 E sup e = sqrt(2 pi)
    n, reps = 4000, 400
    rng = np.random.default_rng(9)
    h = np.array([sample_conditioned("ge12", n, rng).height for _ in range(reps)])
    scaled = h * math.sqrt(2) / math.sqrt(n)
    assert abs(scaled.mean() / math.sqrt(2 * math.pi) - 1) < 0.05


def test_enumerator_counts_plane_trees():
    for n in range(1, 9):
        assert sum(1 for _ in _preorders(n)) == math.comb(2 * n - 2, n - 1) // n
