import math

import mpmath as mp
import numpy as np
import pytest

from gwfun.brute import brute_law, depths_py
from gwfun.errors import CustomNotSupported, DomainError, PoleAtHalf, UnreachableSize
from gwfun.exact import (ballot_table, critical_constant, llt_constant, mean_asymptotic,
                         mean_weights, mean_xn, mu, mu_closed_form, mu_continued, mu_integral,
                         mu_series, tree_size_pmf)

PRESETS = ["po1", "ge12", "bi212", "fullbin"]


def _q_reference(name, n):
    # tree-size laws from classical counting formulas
    if name == "po1":
        return float(mp.exp(-n) * mp.mpf(n) ** (n - 1) / mp.factorial(n))
    if name == "ge12":
        return float(mp.binomial(2 * n - 2, n - 1) / n / mp.mpf(2) ** (2 * n - 1))
    if name == "bi212":
        return float(mp.binomial(2 * n, n - 1) / mp.mpf(4) ** n / n)
    m = (n - 1) // 2
    return float(mp.binomial(2 * m, m) / (m + 1) / mp.mpf(2) ** n) if n % 2 else 0.0


@pytest.mark.parametrize("name", PRESETS)
def test_tree_size_pmf_counting_formulas(name):
    for n in (1, 2, 3, 5, 10, 101, 1001, 20001):
        ref = _q_reference(name, n)
        got = tree_size_pmf(name, n)
        if ref == 0:
            assert got == 0
        else:
            assert abs(got / ref - 1) < 1e-12


@pytest.mark.parametrize("name", PRESETS)
def test_dp_matches_closed_form(name):
    a = ballot_table(name, 400, method="closed")
    b = ballot_table(name, 400, method="dp")
    for x, y in ((a.diag1, b.diag1), (a.diag0, b.diag0)):
        ok = x > 0
        assert np.array_equal(ok, y > 1e-300)
        assert np.max(np.abs(x[ok] / y[ok] - 1)) < 1e-12


def test_custom_law_dp_matches_enumeration():
    d = "0:0.4,1:0.4,3:0.2"
    for n in range(1, 8):
        _, w = brute_law(d, n)
        # total probability of all trees of size n is q_n
        p = np.array([0.4, 0.4, 0.0, 0.2])
        from gwfun.brute import enumerate_trees
        total = sum(np.prod(p[list(s)]) for s in enumerate_trees(n, 3))
        assert abs(tree_size_pmf(d, n) - total) < 1e-15


@pytest.mark.parametrize("name", PRESETS)
def test_local_limit(name):
    n = 100_001
    tab = ballot_table(name, n)
    assert abs(math.sqrt(n) * tab.diag1[n] / llt_constant(name) - 1) < 0.01


@pytest.mark.parametrize("name", PRESETS)
def test_tree_size_tail(name):
    N = 10_000
    q = ballot_table(name, N).tree_size(np.arange(1, N + 1))
    cum = np.cumsum(q)
    assert np.all(np.diff(cum) >= 0) and cum[-1] < 1
    d = ballot_table(name, 1).dist
    predicted = 2 / math.sqrt(2 * math.pi * d.sigma2) / math.sqrt(N)
    assert 0.5 < (1 - cum[-1]) / predicted < 2


def test_unreachable_size():
    with pytest.raises(UnreachableSize):
        mean_xn("fullbin", 4, 1.0)
    assert tree_size_pmf("fullbin", 4) == 0


@pytest.mark.parametrize("name", PRESETS)
def test_mean_trivial_and_pathlength(name):
    for n in (1, 3, 5, 7):
        assert abs(mean_xn(name, n, 0) - n) < 1e-12 * n
        seqs, prob = brute_law(name, n)
        path = sum(p * depths_py(s).sum() for s, p in zip(seqs, prob))
        assert abs(mean_xn(name, n, 1) - (n + path)) < 1e-12 * n ** 2
    k, w = mean_weights(name, 1001)
    # expected fringe-subtree counts sum to n
    assert abs(1001 * np.sum(w / k) - 1001) < 1e-9


def test_mean_vectorised():
    a = np.array([-1, 0.5, 1 + 1j])
    v = mean_xn("ge12", 50, a)
    assert np.allclose(v, [mean_xn("ge12", 50, x) for x in a], rtol=1e-14)


@pytest.mark.parametrize("name", PRESETS)
def test_mu_routes_agree(name):
    for a in (-2.5, -1.0 + 0.5j, -0.3, 0.2 + 1j, 0.4):
        s = mu_series(name, a)
        c = mu_continued(name, a)
        i = mu_integral(name, a)
        tol = 2 * max(s.error_bound, c.error_bound, i.error_bound, 1e-12)
        assert abs(s.value - c.value) <= tol
        assert abs(s.value - i.value) <= tol + 1e-8


def test_mu_integral_domain():
    with pytest.raises(DomainError):
        mu_integral("po1", 0.7)
    assert abs(mu_integral("bi212", 0).value - 1) < 1e-8


def test_mu_zero_and_closed_forms():
    for name in PRESETS:
        v = mu_series(name, 0)
        assert abs(v.value - 1) <= v.error_bound
    for name, ks in (("ge12", (3, 4)), ("po1", (1, 2, 3, 4, 5))):
        for k in ks:
            cv = mu_closed_form(name, k)
            assert abs(mu_series(name, -k).value - cv.value) < 1e-10
    assert mu_closed_form("fullbin", 2).value == pytest.approx(0.5180, abs=1e-4)
    assert mu("ge12", -2).value == pytest.approx(0.5434, abs=1e-4)


def test_mu_closed_form_against_taylor_coefficients():
    # mu(-1) = int_0^1 y(t)/t dt with y = 1 - sqrt(1 - t) the tree-size pgf of Ge(1/2)
    mp.mp.dps = 30
    ref = mp.quad(lambda t: (1 - mp.sqrt(1 - t)) / t, [0, 1])
    assert abs(mu_closed_form("ge12", 1).value - float(ref)) < 1e-14
    # and for Po(1), y = -W(-t/e), the tree function
    ref = mp.quad(lambda t: -mp.lambertw(-t / mp.e).real / t, [0, 1])
    assert abs(mu_closed_form("po1", 1).value - float(ref)) < 1e-14


def test_mu_errors():
    with pytest.raises(PoleAtHalf):
        mu("po1", 0.5)
    with pytest.raises(DomainError):
        mu_series("po1", 0.6)
    with pytest.raises(CustomNotSupported):
        mu_continued("0:0.4,1:0.4,3:0.2", 0.2)


def test_mean_asymptotic_coefficients():
    A = mean_asymptotic("po1", 1)
    assert A.regime == "power" and abs(A.coef - math.sqrt(math.pi / 2)) < 1e-14
    A = mean_asymptotic("ge12", 1)
    assert abs(A.coef - math.sqrt(math.pi / 2) / math.sqrt(2)) < 1e-14
    A = mean_asymptotic("po1", 0.5)
    assert A.regime == "critical" and abs(A.coef - 1 / math.sqrt(2 * math.pi)) < 1e-15
    A = mean_asymptotic("po1", -1)
    assert A.regime == "linear" and A.mu == 0.5


def test_refined_two_term_limit():
    # n^{-3/4}[E X_n(a) - n mu(a)] tends to the constant K of the n^{a+1/2} term
    a = 0.25
    n = 100_000
    K = mean_asymptotic("po1", a).coef
    got = (mean_xn("po1", n, a) - n * mu("po1", a).value) / n ** 0.75
    assert abs(got / K - 1) < 0.03


@pytest.mark.parametrize("name", PRESETS)
def test_critical_constant_predicts_mean(name):
    c = critical_constant(name)
    c0 = 1 / math.sqrt(2 * math.pi * ballot_table(name, 1).dist.sigma2)
    for n in (20_001, 100_001):
        m = mean_xn(name, n, 0.5).real
        assert abs((m - c0 * n * math.log(n)) / n - c) < 5e-3


def test_auto_route_for_custom_law_at_integer_alpha():
    # same law as the fullbin preset, but entered as a custom list
    v = mu("0:0.5,2:0.5", -1)
    assert v.method == "Series"
    assert abs(v.value - (math.pi / 2 - 1)) < 1e-12
