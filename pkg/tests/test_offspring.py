import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gwfun.offspring import (DegenerateVariance, NegativeMass, NotCritical, OutsideDisc,
                             char_fn, make_offspring, pgf_and_derivatives)

PRESET_MOMENTS = {"po1": (1.0, 1), "ge12": (2.0, 1), "bi212": (0.5, 1), "fullbin": (1.0, 2)}


@pytest.mark.parametrize("name", list(PRESET_MOMENTS))
def test_preset_moments(name):
    d = make_offspring(name)
    s2, h = PRESET_MOMENTS[name]
    assert d.sigma2 == s2 and d.span == h
    p = d.pmf()
    k = np.arange(p.size)
    assert abs(p.sum() - 1) < 1e-15
    assert abs(p @ k - 1) < 1e-14
    assert abs(p @ (k - 1.0) ** 2 - s2) < 1e-13


def test_custom_parsing_and_span():
    d = make_offspring("0:0.5,2:0.5")
    assert d.span == 2 and d.sigma2 == 1.0
    d2 = make_offspring({0: 0.4, 1: 0.4, 3: 0.2})
    assert d2.span == 1
    assert math.isclose(d2.sigma2, 0.4 * 1 + 0.2 * 4)
    assert make_offspring([0.25, 0.5, 0.25]).sigma2 == 0.5


def test_invalid_laws():
    with pytest.raises(NotCritical):
        make_offspring({0: 0.3, 1: 0.45, 3: 0.25})
    with pytest.raises(DegenerateVariance):
        make_offspring({1: 1.0})
    with pytest.raises(NegativeMass):
        make_offspring({0: 1.5, 2: -0.5})


@pytest.mark.parametrize("name", list(PRESET_MOMENTS) + ["0:0.4,1:0.4,3:0.2"])
def test_pgf_derivatives_match_power_series(name):
    d = make_offspring(name)
    p = d.pmf(60)
    k = np.arange(p.size)
    for w in (0.3, -0.5 + 0.2j, 1.0):
        for m in range(4):
            ff = np.array([math.perm(int(j), m) for j in k], dtype=float)
            ref = np.sum(p * ff * np.where(k >= m, complex(w) ** np.maximum(k - m, 0), 0))
            assert abs(pgf_and_derivatives(d, w, m) - ref) < 1e-12 * max(1, abs(ref))


def test_pgf_outside_disc():
    with pytest.raises(OutsideDisc):
        pgf_and_derivatives(make_offspring("po1"), 1.5)


@pytest.mark.parametrize("name", list(PRESET_MOMENTS))
def test_char_fn_relations(name):
    d = make_offspring(name)
    t = np.linspace(-math.pi, math.pi, 201)
    phi = char_fn(d, t, "phi")
    assert np.all(np.abs(phi) <= 1 + 1e-14)
    rho = char_fn(d, t, "rho")
    tilde = char_fn(d, t, "phi_tilde")
    assert np.allclose(tilde, np.exp(-1j * t) * phi, atol=1e-14)
    assert np.allclose(1 - tilde, rho, atol=1e-14)
    # small t: rho ~ sigma^2 t^2 / 2
    ts = 1e-6
    assert abs(char_fn(d, ts, "rho") / (d.sigma2 * ts ** 2 / 2) - 1) < 1e-5
    if d.span == 1:
        tt = t[t != 0]
        assert np.all(char_fn(d, tt, "rho").real >= 0.05 * tt ** 2)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.45), st.floats(0.0, 1.0))
def test_custom_round_trip(p2, frac):
    # mean one: p1 + 2 p2 + 3 p3 = 1 with p3 a fraction of what is left
    p3 = frac * (1 - 2 * p2) / 3 * 0.9
    p1 = 1 - 2 * p2 - 3 * p3
    p0 = 1 - p1 - p2 - p3
    if min(p0, p1) < 0:
        return
    d = make_offspring([p0, p1, p2, p3])
    again = make_offspring(d.to_json())
    assert again.sigma2 == d.sigma2 and again.span == d.span
