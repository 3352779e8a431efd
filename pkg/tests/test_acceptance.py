"""Acceptance criteria 1-10, each at its stated tolerance and full scale.

Every check prints one PASS/FAIL line.  The Monte Carlo criteria take a few
minutes in total on one core.
"""
import pytest

from gwfun.harness import run_criterion


def _run(k, capsys):
    checks = run_criterion(k, quick=False)
    with capsys.disabled():
        print()
        for c in checks:
            print(c.line())
    failed = [c.line() for c in checks if not c.passed]
    assert not failed, "\n".join(failed)


def test_criterion_1_mu_routes(capsys):
    _run(1, capsys)


def test_criterion_2_generating_function_recursion(capsys):
    _run(2, capsys)


def test_criterion_3_mean_asymptotics(capsys):
    _run(3, capsys)


def test_criterion_4_critical_constant(capsys):
    _run(4, capsys)


def test_criterion_5_limit_moments(capsys):
    _run(5, capsys)


@pytest.mark.slow
def test_criterion_6_tree_moments(capsys):
    _run(6, capsys)


@pytest.mark.slow
def test_criterion_7_excursion(capsys):
    _run(7, capsys)


def test_criterion_8_small_alpha_limits(capsys):
    _run(8, capsys)


@pytest.mark.slow
def test_criterion_9_shape_of_laws(capsys):
    _run(9, capsys)


def test_criterion_10_determinism(capsys):
    _run(10, capsys)
