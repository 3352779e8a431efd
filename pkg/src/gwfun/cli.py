"""Command-line front end: ``gwfun <subcommand> [options]``.

Exit codes: 0 on success, 2 on invalid input, 3 on numerical failure
(including any failed check in ``verify``).
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import CapacityExceeded, QuadratureNonconvergence
from .specfun import SpecialFunctionError

__all__ = ["ExperimentConfig", "parse_alpha", "parse_range", "main"]

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

STOCHASTIC = {"simulate", "excursion"}
VALUE_FLAGS = {"--alpha", "--alpha2", "--beta"}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# parsing helpers

_I_RE = re.compile(r"(?<![0-9.eE])([+-]?)i")


def parse_alpha(text: str) -> complex:
    """Parse '1', '-1+0i', '0.5-2i', 'i', '2i', '1e-3+1i' into a complex number."""
    s = str(text).strip().replace(" ", "").replace("j", "i")
    if not s:
        raise UsageError("empty alpha")
    s = _I_RE.sub(lambda m: f"{m.group(1)}1i", s)
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse alpha {text!r}") from None


def parse_alphas(text) -> list[complex]:
    if isinstance(text, (list, tuple)):
        return [parse_alpha(t) for t in text]
    return [parse_alpha(t) for t in str(text).split(",") if t.strip()]


def parse_range(text) -> list[int]:
    """'5', '1..10', '1..100:10' (step) or '3,7,9' into a list of integers."""
    if isinstance(text, int):
        return [text]
    if isinstance(text, (list, tuple)):
        return [int(t) for t in text]
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            a, rest = part.split("..", 1)
            b, _, step = rest.partition(":")
            try:
                out.extend(range(int(float(a)), int(float(b)) + 1, int(step) if step else 1))
            except ValueError:
                raise UsageError(f"bad range {part!r}") from None
        elif part:
            try:
                out.append(int(float(part)))
            except ValueError:
                raise UsageError(f"bad integer {part!r}") from None
    if not out:
        raise UsageError(f"empty range {text!r}")
    return out


def _bool(text) -> bool | str:
    if isinstance(text, bool):
        return text
    t = str(text).lower()
    if t in ("auto",):
        return "auto"
    if t in ("1", "true", "yes"):
        return True
    if t in ("0", "false", "no"):
        return False
    raise UsageError(f"expected auto/true/false, got {text!r}")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _fix_negative_values(argv: list[str]) -> list[str]:
    # '--alpha -1+0i' would otherwise be read as an unknown option
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


# ---------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    """Resolved settings of one invocation; serialises to canonical JSON."""

    command: str
    dist: str | dict | None = None
    alphas: list = field(default_factory=list)
    ns: list = field(default_factory=list)
    reps: int | None = None
    seed: int | None = None
    methods: dict = field(default_factory=dict)
    output: str | None = None
    format: str = "csv"
    tolerances: dict = field(default_factory=dict)

    def to_json(self) -> str:
        d = asdict(self)
        d["alphas"] = [[a.real, a.imag] for a in self.alphas]
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        d = json.loads(text)
        d["alphas"] = [complex(a, b) for a, b in d.get("alphas", [])]
        return cls(**d)


DEFAULTS = {
    "dist": "po1",
    "method": "auto",
    "ell": "1",
    "centered": "auto",
    "N": None,
    "reps": 1000,
    "format": "csv",
    "form": "wa2",
    "grid": 4096,
    "stat": "moments",
    "cap": 10 ** 7,
    "suite": "all",
    "horizon": 20.0,
    "excursion_method": "bessel3",
}


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gwfun", description="Subtree-size power functionals of conditioned Galton-Watson trees.")
    sub = p.add_subparsers(dest="command")

    def common(sp, dist=True):
        if dist:
            sp.add_argument("--dist", help="po1, ge12, bi212, fullbin or a 'k:p,...' list")
        sp.add_argument("--format", choices=["csv", "json"])
        sp.add_argument("--out", help="output path, or 'csv'/'json' to pick the format on stdout")
        sp.add_argument("--config", help="JSON file with default values for the flags")
        return sp

    s = common(sub.add_parser("mu", help="mu(alpha) = E|T|^alpha"))
    s.add_argument("--alpha", help="comma-separated complex values, e.g. -1+0i")
    s.add_argument("--method", choices=["auto", "series", "continued", "integral", "closed"])

    s = common(sub.add_parser("mean", help="exact E X_n(alpha) with the asymptotic prediction"))
    s.add_argument("--alpha")
    s.add_argument("--n", help="size(s): 100, 1..50 or 10,100,1000")

    s = common(sub.add_parser("moments-exact", help="exact moments from the generating-function recursion"))
    s.add_argument("--alpha")
    s.add_argument("--ell", help="moment order(s), e.g. 3 or 1..3")
    s.add_argument("--n")
    s.add_argument("--centered", help="auto, true or false")
    s.add_argument("--alpha2")
    s.add_argument("--ell2", type=int)

    s = common(sub.add_parser("limit-moments", help="moments of the limit variable Y(alpha)"), dist=False)
    s.add_argument("--alpha")
    s.add_argument("--ell")
    s.add_argument("--alpha2")
    s.add_argument("--ell2", type=int)
    s.add_argument("--centered", help="report E Y~^ell instead of E Y^ell")

    s = common(sub.add_parser("simulate", help="Monte Carlo on conditioned trees"))
    s.add_argument("--alpha")
    s.add_argument("--beta", help="second exponent for --stat cov")
    s.add_argument("--n", type=int)
    s.add_argument("--ell", help="moment orders j reported (default 1..2)")
    s.add_argument("--reps", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--stat", choices=["moments", "fringe", "cov"])
    s.add_argument("--cap", type=int)
    s.add_argument("--workers", type=int)

    s = common(sub.add_parser("excursion", help="Monte Carlo on Brownian excursions / Y_inf"), dist=False)
    s.add_argument("--alpha", help="exponent(s), or 'inf' for Y_inf")
    s.add_argument("--form", choices=["wa0", "wa1", "wa2", "wb"])
    s.add_argument("--grid", type=int)
    s.add_argument("--ell")
    s.add_argument("--reps", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--horizon", type=float)
    s.add_argument("--excursion-method", dest="excursion_method", choices=["bessel3", "vervaat"])
    s.add_argument("--workers", type=int)

    s = common(sub.add_parser("verify", help="run acceptance checks"), dist=False)
    s.add_argument("--suite", choices=["exact", "genfunc", "limits", "mc-tree", "mc-excursion", "all"])
    s.add_argument("--quick", action="store_true", default=None)
    s.add_argument("--report", help="path of the JSON report")
    s.add_argument("--workers", type=int)
    return p


def _resolve(args) -> argparse.Namespace:
    """Flags > config file > defaults."""
    cfg = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
    for key, val in vars(args).items():
        if val is None:
            if key in cfg:
                v = cfg[key]
                if key == "dist" and isinstance(v, dict):
                    v = ",".join(f"{k}:{p}" for k, p in v.items())
                setattr(args, key, v)
            elif key in DEFAULTS:
                setattr(args, key, DEFAULTS[key])
    if args.out in ("csv", "json"):
        args.format = args.out
        args.out = None
    return args


def _dist(args):
    from .offspring import make_offspring

    d = args.dist
    try:
        return make_offspring(d)
    except Exception as exc:
        raise UsageError(f"bad --dist {d!r}: {exc}") from None


def _require(args, *names):
    for n in names:
        if getattr(args, n, None) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required for {args.command}")


# ---------------------------------------------------------------------------
# subcommands: each returns (header, rows)

def _cmd_mu(args):
    from .exact import mu

    _require(args, "alpha")
    dist = _dist(args)
    rows = []
    for a in parse_alphas(args.alpha):
        v = mu(dist, a, args.method)
        rows.append([_fmt(a.real), _fmt(a.imag), _fmt(v.value.real), _fmt(v.value.imag),
                     v.method, _fmt(v.error_bound)])
    return ["alpha_re", "alpha_im", "value_re", "value_im", "method", "error_bound"], rows


def _cmd_mean(args):
    from .exact import mean_asymptotic, mean_xn

    _require(args, "alpha", "n")
    dist = _dist(args)
    ns = parse_range(args.n)
    rows = []
    for a in parse_alphas(args.alpha):
        A = mean_asymptotic(dist, a)
        for n in ns:
            m = mean_xn(dist, n, a)
            p = complex(A.predict(n))
            rows.append([str(n), _fmt(a.real), _fmt(a.imag), _fmt(m.real), _fmt(m.imag),
                         _fmt(p.real), _fmt(p.imag), A.regime])
    return ["n", "alpha_re", "alpha_im", "mean_re", "mean_im", "pred_re", "pred_im", "regime"], rows


def _cmd_moments_exact(args):
    from .genfunc import mixed_moment_series, moment_series

    _require(args, "alpha", "n")
    dist = _dist(args)
    ns = parse_range(args.n)
    ells = parse_range(args.ell)
    centered = _bool(args.centered)
    N = max(ns)
    rows = []
    for a in parse_alphas(args.alpha):
        if args.alpha2 is not None:
            a2 = parse_alpha(args.alpha2)
            l2 = args.ell2 if args.ell2 is not None else 1
            T = mixed_moment_series(dist, a, a2, max(ells), l2, N, centered, centered)
            header = ["n", "ell", "ell2", "re", "im"]
            for n in ns:
                for l in ells:
                    for r in range(0 if l else 1, l2 + 1):
                        v = T.get(n, l, r)
                        rows.append([str(n), str(l), str(r), _fmt(v.real), _fmt(v.imag)])
        else:
            T = moment_series(dist, a, max(ells), N, centered)
            header = ["n", "ell", "re", "im"]
            for n in ns:
                for l in ells:
                    v = T.get(n, l)
                    rows.append([str(n), str(l), _fmt(v.real), _fmt(v.imag)])
    return header, rows


def _cmd_limit_moments(args):
    from .limits import centered_moment, kappa, kappa_mixed

    _require(args, "alpha")
    ells = parse_range(args.ell)
    centered = _bool(args.centered or "false") is True
    rows = []
    for a in parse_alphas(args.alpha):
        if args.alpha2 is not None:
            a2 = parse_alpha(args.alpha2)
            l2 = args.ell2 if args.ell2 is not None else 1
            for l in ells:
                v = kappa_mixed(a, a2, l, l2)
                rows.append([_fmt(a.real), _fmt(a.imag), str(l), _fmt(a2.real), _fmt(a2.imag), str(l2),
                             _fmt(v.real), _fmt(v.imag)])
            header = ["alpha_re", "alpha_im", "ell", "alpha2_re", "alpha2_im", "ell2", "re", "im"]
        else:
            for l in ells:
                v = centered_moment(a, l) if centered else kappa(a, l)
                rows.append([_fmt(a.real), _fmt(a.imag), str(l), _fmt(v.real), _fmt(v.imag)])
            header = ["alpha_re", "alpha_im", "ell", "re", "im"]
    return header, rows


def _est_row(a, j, est, n=None):
    row = [_fmt(a.real), _fmt(a.imag), str(j), _fmt(est.mean.real), _fmt(est.mean.imag),
           _fmt(est.half_width[0]), _fmt(est.half_width[1]), str(est.reps), str(est.seed)]
    return row if n is None else [str(n)] + row


EST_HEADER = ["alpha_re", "alpha_im", "j", "est_re", "est_im", "ci_re", "ci_im", "reps", "seed"]


def _cmd_simulate(args):
    from .sampler import empirical_moments, fringe_ratio, neg_alpha_cov

    _require(args, "seed", "alpha")
    dist = _dist(args)
    rows = []
    if args.stat == "cov":
        _require(args, "beta")
        b = parse_alpha(args.beta)
        for a in parse_alphas(args.alpha):
            est = neg_alpha_cov(dist, a, b, args.reps, args.cap, args.seed, args.workers)
            rows.append(_est_row(a, 0, est) + [_fmt(b.real), _fmt(b.imag), str(est.info["discards"]),
                                              _fmt(est.info["size_q999"])])
        return EST_HEADER + ["beta_re", "beta_im", "discards", "size_q999"], rows
    _require(args, "n")
    for a in parse_alphas(args.alpha):
        if args.stat == "fringe":
            est = fringe_ratio(dist, args.n, a, args.reps, args.seed, args.workers)
            rows.append(_est_row(a, 1, est, args.n))
            continue
        ells = parse_range(args.ell or "1..2")
        em = empirical_moments(dist, args.n, a, max(ells), args.reps, args.seed, args.workers)
        for j in ells:
            rows.append(_est_row(a, j, em.estimates[j], args.n) + [em.centering])
    header = ["n"] + EST_HEADER + ([] if args.stat == "fringe" else ["centering"])
    return header, rows


def _cmd_excursion(args):
    from .excursion import excursion_samples, yinf_samples
    from .sampler import mc_estimate

    _require(args, "seed", "alpha")
    ells = parse_range(args.ell or "1")
    rows = []
    if str(args.alpha).strip().lower() in ("inf", "infinity"):
        y = yinf_samples(args.reps, args.seed, T=args.horizon, workers=args.workers)
        for j in ells:
            est = mc_estimate(y ** j, args.seed, {})
            rows.append(["inf", "0", str(j), _fmt(est.mean.real), _fmt(est.mean.imag),
                         _fmt(est.half_width[0]), _fmt(est.half_width[1]), str(est.reps), str(est.seed)])
        return EST_HEADER, rows
    alphas = parse_alphas(args.alpha)
    x = excursion_samples(alphas, args.form, args.grid, args.reps, args.seed,
                          args.excursion_method, args.workers)
    for k, a in enumerate(alphas):
        for j in ells:
            est = mc_estimate(x[:, k] ** j, args.seed, {})
            rows.append(_est_row(a, j, est))
    return EST_HEADER, rows


def config_from_args(args) -> ExperimentConfig:
    alphas = []
    if getattr(args, "alpha", None) is not None and str(args.alpha).strip().lower() not in ("inf", "infinity"):
        alphas = parse_alphas(args.alpha)
    ns = parse_range(args.n) if getattr(args, "n", None) is not None else []
    methods = {k: getattr(args, k) for k in ("method", "form", "centered", "stat", "excursion_method")
               if getattr(args, k, None) is not None}
    return ExperimentConfig(args.command, getattr(args, "dist", None), alphas, ns,
                            getattr(args, "reps", None), getattr(args, "seed", None), methods,
                            args.out, args.format)


def _emit(header, rows, args):
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        if args.format == "json":
            recs = [dict(zip(header, r)) for r in rows]
            for rec in recs:
                for k, v in rec.items():
                    try:
                        rec[k] = int(v) if re.fullmatch(r"-?\d+", v) else float(v)
                    except ValueError:
                        pass
            cfg = json.loads(config_from_args(args).to_json())
            json.dump({"config": cfg, "records": recs}, fh, indent=1)
            fh.write("\n")
        else:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    finally:
        if args.out:
            fh.close()


def _cmd_verify(args):
    from .harness import run_suite

    rep = run_suite(args.suite, bool(args.quick), args.workers, echo=lambda s: print(s, file=sys.stderr))
    text = json.dumps(rep, indent=1)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    if args.format == "json":
        print(text)
    else:
        n = len(rep["checks"])
        bad = sum(not c["passed"] for c in rep["checks"])
        print(f"suite {rep['suite']}: {n - bad}/{n} checks passed")
    return EXIT_OK if rep["passed"] else EXIT_NUMERIC


COMMANDS = {
    "mu": _cmd_mu,
    "mean": _cmd_mean,
    "moments-exact": _cmd_moments_exact,
    "limit-moments": _cmd_limit_moments,
    "simulate": _cmd_simulate,
    "excursion": _cmd_excursion,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(_fix_negative_values(argv))
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        args = _resolve(args)
        if args.command in STOCHASTIC and args.seed is None:
            raise UsageError(f"{args.command} needs --seed (results are reproducible only with a seed)")
        if getattr(args, "workers", None) is None and "GWFUN_WORKERS" in os.environ:
            args.workers = int(os.environ["GWFUN_WORKERS"])
        if args.command == "verify":
            return _cmd_verify(args)
        header, rows = COMMANDS[args.command](args)
        _emit(header, rows, args)
        return EXIT_OK
    except UsageError as exc:
        print(f"gwfun: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureNonconvergence, CapacityExceeded, SpecialFunctionError, ArithmeticError) as exc:
        print(f"gwfun: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, TypeError, KeyError) as exc:
        print(f"gwfun: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
