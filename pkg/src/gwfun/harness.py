"""Acceptance checks shared by ``gwfun verify`` and the test suite.

Each ``criterion_k`` returns a list of :class:`Check` records with the
measured value, the target, the tolerance and the verdict.  ``quick=True``
shrinks sample sizes for smoke runs; the tolerances stay the same.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats

from .brute import brute_moment
from .exact import (critical_constant, mean_asymptotic, mean_xn, mu_continued, mu_series)
from .excursion import eval_Y, excursion_samples, sample_excursion, yinf_samples
from .genfunc import mixed_moment_series, moment_series
from .limits import (VAR_AT_HALF, abs_second_moment, alpha_to_imag_var, centered_moment,
                     centered_variance, kappa, kappa_mixed, kappa_via_hat, yinf_moment)
from .offspring import make_offspring
from .sampler import empirical_moments, normalization, rep_rng, sample_functionals

__all__ = ["Check", "CRITERIA", "SUITES", "run_criterion", "run_suite"]

LOG2 = math.log(2)
PI = math.pi
PRESETS = ("po1", "ge12", "bi212", "fullbin")


@dataclass
class Check:
    criterion: int
    name: str
    measured: float
    expected: float
    tol: float
    passed: bool
    note: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        s = (f"{tag} [{self.criterion}] {self.name}: measured={self.measured:.10g} "
             f"expected={self.expected:.10g} tol={self.tol:.3g}")
        return s + (f" ({self.note})" if self.note else "")

    def as_dict(self) -> dict:
        d = asdict(self)
        for k in ("measured", "expected", "tol"):
            d[k] = float(d[k])
        d["passed"] = bool(d["passed"])
        return d


def _abs_check(crit, name, measured, expected, tol, note=""):
    err = abs(measured - expected)
    return Check(crit, name, float(np.real(measured)), float(np.real(expected)), tol,
                 bool(err <= tol), note or f"abs err {err:.3g}")


def _rel_check(crit, name, measured, expected, tol, note=""):
    err = abs(measured - expected) / abs(expected)
    return Check(crit, name, float(np.real(measured)), float(np.real(expected)), tol,
                 bool(err <= tol), note or f"rel err {err:.3g}")


# ---------------------------------------------------------------------------
# 1. tabulated values of mu at negative integers

TABULATED_MU = {
    ("po1", -1): 0.5,
    ("po1", -2): 5 / 12,
    ("po1", -3): 7 / 18,
    ("po1", -4): 1631 / 4320,
    ("po1", -5): 96547 / 259200,
    ("ge12", -1): 2 - 2 * LOG2,
    ("ge12", -2): 2 * LOG2 ** 2 - 4 * LOG2 - PI ** 2 / 6 + 4,
    ("bi212", -1): 2 * LOG2 - 1,
    ("bi212", -2): PI ** 2 / 6 - 2 * LOG2 ** 2 - 2 * LOG2 + 1,
    ("fullbin", -1): PI / 2 - 1,
    ("fullbin", -2): 1 - (1 - LOG2) * PI / 2,
}


def criterion_1(quick: bool = False) -> list[Check]:
    out = []
    for (d, a), target in TABULATED_MU.items():
        for name, fn in (("series", mu_series), ("continued", mu_continued)):
            v = fn(d, a).value
            out.append(_abs_check(1, f"mu_{name}({d}, {a})", v.real, target, 1e-7))
    return out


# ---------------------------------------------------------------------------
# 2. generating-function recursion against enumeration

def criterion_2(quick: bool = False) -> list[Check]:
    n_max = 6 if quick else 8
    alphas = [-1, 0.25, 1, 2, 1 + 1j]
    out = []
    for d in PRESETS:
        worst = {"mean": 0.0, "moment": 0.0, "mixed": 0.0}
        for a in alphas:
            a2 = np.conj(a) if np.iscomplex(a) else 2.0
            T = moment_series(d, a, 3, N=n_max, centered=False)
            X = mixed_moment_series(d, a, a2, 2, 1, N=n_max, centered1=False, centered2=False)
            for n in range(1, n_max + 1):
                if not np.isfinite(T.data[(1, 0)][n]):
                    continue
                ref1 = brute_moment(d, n, a, 1)
                worst["mean"] = max(worst["mean"], abs(mean_xn(d, n, a) - ref1) / abs(ref1))
                for ell in (1, 2, 3):
                    ref = ref1 if ell == 1 else brute_moment(d, n, a, ell)
                    worst["moment"] = max(worst["moment"], abs(T.get(n, ell) - ref) / abs(ref))
                for l1, l2 in ((1, 0), (0, 1), (1, 1), (2, 1)):
                    ref = brute_moment(d, n, a, l1, a2, l2) if l1 else brute_moment(d, n, a2, l2)
                    worst["mixed"] = max(worst["mixed"], abs(X.get(n, l1, l2) - ref) / abs(ref))
        for k, v in worst.items():
            out.append(Check(2, f"{k} vs enumeration ({d}, n<={n_max})", v, 0.0, 1e-10, v <= 1e-10,
                             "worst relative error"))
    return out


# ---------------------------------------------------------------------------
# 3. large-n behaviour of the exact mean

def criterion_3(quick: bool = False) -> list[Check]:
    n = 10 ** 4 if quick else 10 ** 5
    out = []
    m1 = mean_xn("po1", n, 1).real
    out.append(_rel_check(3, f"E X_n(1) n^(-3/2), n={n}", m1 / n ** 1.5, math.sqrt(PI / 2), 0.03))

    c0 = 1 / math.sqrt(2 * PI)
    mh = mean_xn("po1", n, 0.5).real
    out.append(_rel_check(3, f"E X_n(1/2)/(n ln n), n={n}", mh / (n * math.log(n)), c0, 0.05))
    # the same quantity with the linear correction c n removed (supplementary)
    c = critical_constant("po1")
    out.append(_rel_check(3, f"(E X_n(1/2) - c n)/(n ln n), n={n} [supplementary]",
                          (mh - c * n) / (n * math.log(n)), c0, 0.05))

    A = mean_asymptotic("po1", 0.25)
    m = mean_xn("po1", n, 0.25)
    second = abs(A.coef * n ** 0.75)
    err = abs(m - A.predict(n))
    out.append(Check(3, f"alpha=0.25 two-term prediction, n={n}", err / second, 0.0, 0.03,
                     err / second <= 0.03, "|exact - prediction| / |second term|"))

    mneg = mean_xn("po1", n, -1).real / n
    out.append(_abs_check(3, f"E X_n(-1)/n, n={n}", mneg, 0.5, 0.5 / math.sqrt(n)))
    return out


# ---------------------------------------------------------------------------
# 4. pole at 1/2 and the critical line

def criterion_4(quick: bool = False) -> list[Check]:
    c0 = 1 / math.sqrt(2 * PI)
    out = []
    for eps in (1e-4, -1e-4):
        a = 0.5 + eps
        r = eps * mu_continued("po1", a).value.real
        out.append(_abs_check(4, f"(alpha-1/2) mu(alpha) at alpha=1/2{eps:+g}", r, -c0, 1e-4))
    on_line = mu_continued("po1", 0.5 + 1j).value
    xs = [0.5 - 0.01 * j for j in (1, 2, 3)]
    vals = [mu_series("po1", x + 1j).value for x in xs]
    extrap = 3 * vals[0] - 3 * vals[1] + vals[2]
    diff = abs(on_line - extrap)
    out.append(Check(4, "mu(1/2+i): continuation vs extrapolated series", diff, 0.0, 1e-4,
                     bool(np.isfinite(on_line) and diff <= 1e-4),
                     f"continued={on_line:.10g}, extrapolated={extrap:.10g}"))
    return out


# ---------------------------------------------------------------------------
# 5. identities for the limit moments

def criterion_5(quick: bool = False) -> list[Check]:
    rng = np.random.default_rng(2024)
    worst = 0.0
    count = 0
    while count < 30:
        a = complex(rng.uniform(0.05, 3), rng.uniform(-2, 2))
        if abs(a - 0.5) < 0.05:
            continue
        count += 1
        for ell in range(1, 11):
            k1 = kappa(a, ell)
            worst = max(worst, abs(k1 - kappa_via_hat(a, ell)) / abs(k1))
    out = [Check(5, "kappa vs kappa_hat route, l<=10, 30 alphas", worst, 0.0, 1e-9, worst <= 1e-9,
                 "worst relative difference")]
    out.append(_abs_check(5, "kappa_1(1)", kappa(1, 1).real, math.sqrt(PI / 2), 1e-12))
    out.append(_abs_check(5, "kappa_2(1)", kappa(1, 2).real, 5 / 3, 1e-12))
    for eps in (-1e-4, 1e-4):
        v = centered_variance(0.5 + eps).real
        out.append(_abs_check(5, f"Var Y~(1/2{eps:+g})", v, VAR_AT_HALF, 1e-4))
    w = 0.0
    for _ in range(10):
        a = complex(rng.uniform(0.05, 3), rng.uniform(-2, 2))
        if abs(a - 0.5) < 0.05:
            a += 0.2
        v = kappa_mixed(a, a.conjugate(), 1, 1)
        w = max(w, abs(v - abs_second_moment(a)) / abs(v))
    out.append(Check(5, "E|Y|^2 closed form vs mixed recursion, 10 alphas", w, 0.0, 1e-10, w <= 1e-10,
                     "worst relative difference"))
    return out


# ---------------------------------------------------------------------------
# 6. tree simulation against the limit law

def _mc_check(crit, name, est, target, rel_slack):
    hw = est.half_width[0]
    err = abs(est.mean.real - target)
    tol = hw + rel_slack * abs(target)
    return Check(crit, name, est.mean.real, target, tol, bool(err <= tol),
                 f"CI half-width {hw:.3g} + {rel_slack:.0%}")


def criterion_6(quick: bool = False, seed: int = 6, workers=None) -> list[Check]:
    n = 10 ** 4
    reps = 500 if quick else 5000
    e1 = empirical_moments("po1", n, 1, 3, reps, seed, workers)
    eh = empirical_moments("po1", n, 0.5, 2, reps, seed + 1, workers)
    return [
        _mc_check(6, f"Var sigma n^-3/2 X~_n(1), n={n}, reps={reps}", e1.estimates[2],
                  (5 / 3 - PI / 2), 0.05),
        _mc_check(6, f"Var sigma n^-1 X~_n(1/2), n={n}, reps={reps}", eh.estimates[2], 0.09714, 0.10),
        _mc_check(6, f"third centered moment at alpha=1, n={n}, reps={reps}", e1.estimates[3],
                  centered_moment(1, 3).real, 0.10),
    ]


# ---------------------------------------------------------------------------
# 7. excursion functionals and Y_inf

def criterion_7(quick: bool = False, seed: int = 7, workers=None) -> list[Check]:
    m = 1024 if quick else 4096
    reps = 10 ** 4
    x = excursion_samples([1.0, 2.0], "wa2", m, reps, seed, workers=workers)
    area = x[:, 0].real
    y2 = x[:, 1].real
    se = lambda v: 1.96 * v.std(ddof=1) / math.sqrt(v.size)
    out = [
        _rel_check(7, f"mean 2 int e, m={m}, reps={reps}", area.mean(), math.sqrt(PI / 2), 0.01,
                   f"CI half-width {se(area):.3g}"),
        _rel_check(7, f"mean 4 iint m(e;s,t), m={m}, reps={reps}", y2.mean(), math.sqrt(PI / 8), 0.02,
                   f"CI half-width {se(y2):.3g}"),
    ]
    worst = 0.0
    for r in range(20):
        p = sample_excursion(m, rep_rng(seed + 1, r))
        a, b = eval_Y(p, 2.5, "wb"), eval_Y(p, 2.5, "wa2")
        worst = max(worst, abs(a - b) / abs(a))
    out.append(Check(7, "pathwise wb vs wa2 at alpha=2.5 (20 paths)", worst, 0.0, 1e-3, worst <= 1e-3,
                     "worst relative difference"))
    yreps = 10 ** 4 if quick else 10 ** 5
    yi = yinf_samples(yreps, seed + 2, T=20.0, m=1024, workers=workers)
    out.append(_rel_check(7, f"E Y_inf, reps={yreps}", yi.mean(), yinf_moment(1).real, 0.01,
                          f"CI half-width {se(yi):.3g}"))
    out.append(_rel_check(7, f"E Y_inf^2, reps={yreps}", (yi ** 2).mean(), yinf_moment(2).real, 0.02,
                          f"CI half-width {se(yi ** 2):.3g}"))
    return out


# ---------------------------------------------------------------------------
# 8. boundary laws

def criterion_8(quick: bool = False) -> list[Check]:
    out = []
    target = alpha_to_imag_var(1.0)
    for a in (1e-3, 1e-4):
        v = a * kappa_mixed(a + 1j, a - 1j, 1, 1).real
        out.append(_rel_check(8, f"a E|Y(a+i)|^2 at a={a:g}", v, target, 0.01))
    a = 1e-4
    out.append(_rel_check(8, "alpha^-1 Var Y(alpha) at alpha=1e-4", centered_variance(a).real / a,
                          2 - 2 * LOG2, 1e-3))
    return out


# ---------------------------------------------------------------------------
# 9. distributional sanity

def criterion_9(quick: bool = False, seed: int = 9, workers=None) -> list[Check]:
    n = 10 ** 4 if quick else 10 ** 5
    reps = 1000 if quick else 5000
    x = sample_functionals("po1", n, [-1.0], reps, seed, workers)[:, 0].real
    z = (x - mean_xn("po1", n, -1).real) / math.sqrt(n)
    skew = float(stats.skew(z))
    kurt = float(stats.kurtosis(z))
    se_s = math.sqrt(6 * reps * (reps - 1) / ((reps - 2) * (reps + 1) * (reps + 3)))
    se_k = 2 * se_s * math.sqrt((reps ** 2 - 1) / ((reps - 3) * (reps + 5)))
    out = [
        Check(9, f"skewness of X~_n(-1), n={n}, reps={reps}", skew, 0.0, 4 * se_s, abs(skew) <= 4 * se_s),
        Check(9, f"excess kurtosis of X~_n(-1), n={n}, reps={reps}", kurt, 0.0, 4 * se_k,
              abs(kurt) <= 4 * se_k),
    ]
    nt = 10 ** 4
    kreps = 1000 if quick else 5000
    y = sample_functionals("po1", nt, [1.0], kreps, seed + 1, workers)[:, 0].real
    y = normalization("po1", nt, 1).real * y
    area = excursion_samples([1.0], "wa2", 4096, kreps, seed + 2, workers=workers)[:, 0].real
    ks = stats.ks_2samp(y, area)
    crit = 1.628 * math.sqrt(2 / kreps)
    out.append(Check(9, f"KS sigma Y_n(1) (n={nt}) vs 2 int e, {kreps} each", ks.statistic, 0.0, crit,
                     ks.statistic < crit, f"p-value {ks.pvalue:.3g}"))
    return out


# ---------------------------------------------------------------------------
# 10. determinism across worker counts

def criterion_10(quick: bool = False) -> list[Check]:
    import io
    from contextlib import redirect_stdout

    from .cli import main

    runs = {
        "simulate": ["simulate", "--dist", "po1", "--n", "1000", "--alpha", "0.5+0i",
                     "--reps", "40" if quick else "200", "--seed", "42"],
        "excursion": ["excursion", "--alpha", "2+0i", "--form", "wb", "--grid", "256",
                      "--reps", "20" if quick else "100", "--seed", "7"],
    }
    out = []
    for name, argv in runs.items():
        texts = []
        for w in ("1", "2"):
            buf = io.StringIO()
            with redirect_stdout(buf):
                code = main(argv + ["--workers", w])
            texts.append((code, buf.getvalue()))
        same = texts[0] == texts[1] and texts[0][0] == 0
        out.append(Check(10, f"{name}: identical CSV with 1 and 2 workers", float(same), 1.0, 0.0, same))
    return out


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}

SUITES = {
    "exact": (1, 2, 3, 4),
    "genfunc": (2,),
    "limits": (5, 8),
    "mc-tree": (6, 9, 10),
    "mc-excursion": (7,),
    "all": tuple(range(1, 11)),
}


def run_criterion(k: int, quick: bool = False, **kw) -> list[Check]:
    fn = CRITERIA[k]
    if k in (6, 7, 9):
        return fn(quick=quick, **kw)
    return fn(quick=quick)


def run_suite(suite: str, quick: bool = False, workers=None, echo=None) -> dict:
    """Run every criterion of a suite; returns a JSON-ready report."""
    if suite not in SUITES:
        raise ValueError(f"suite must be one of {sorted(SUITES)}")
    checks = []
    timings = {}
    for k in SUITES[suite]:
        t0 = time.perf_counter()
        kw = {"workers": workers} if k in (6, 7, 9) else {}
        res = run_criterion(k, quick, **kw)
        timings[k] = time.perf_counter() - t0
        for c in res:
            if echo:
                echo(c.line())
            checks.append(c)
    return {
        "suite": suite,
        "quick": quick,
        "passed": all(c.passed for c in checks),
        "checks": [c.as_dict() for c in checks],
        "seconds": {str(k): round(v, 3) for k, v in timings.items()},
    }
