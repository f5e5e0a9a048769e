"""Command-line front end.

Subcommands::

    leibniz-lab verify    --suite leibniz --n 6 --norm p=3 --trials 10000 --seed 42
    leibniz-lab search    --target strong-leibniz --n 5 --norm p=3 --trials 100000
    leibniz-lab reproduce --case cs-bimodule-l1
    leibniz-lab eval      --op sigma_p --f '[1,-1]' --mu '[0.5,0.5]' --p 2

Vector, matrix and measure flags take a JSON literal or ``@path`` to a JSON
file.  Exit status: 0 when every check holds, 1 when a violation or value
mismatch is found, 2 on usage or input errors.
"""
import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .calculus import div, div0, grad, grad0, partial_seminorm
from .harness import (
    CASES, SUITES, TARGETS, SearchConfig, bimodule_slack, contraction_slack,
    kato_ponce_slack, leibniz_slack, module_slack, perm_inv_leibniz_slack,
    reproduce, run_suite, search, strong_leibniz_slack,
)
from .norms import (
    decompose_in_dual_ball, dual_eval, extreme_points_dual_kfan,
    is_doubly_stochastic, is_substochastic, is_weakly_majorized, norm_eval,
    parse_norm, sort_abs_desc,
)
from .operators import (
    Laplacian, dirichlet_eval, i_matrix, l_matrix, opnorm_on_centered, theta,
    unit_contraction,
)
from .probability import DiscreteMeasure, expectation, sigma_p, weighted_leibniz_slack
from .records import to_jsonable

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
CSV_COLUMNS = ("case", "lhs", "rhs", "slack", "holds", "seed", "trial")


class InputError(Exception):
    pass


def _load_json(text, flag):
    if text is None:
        return None
    if text.startswith("@"):
        try:
            with open(text[1:]) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"{flag}: cannot read {text[1:]}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{flag}: invalid JSON ({exc.msg})") from None


def _vector(args, name, required=True):
    value = _load_json(getattr(args, name), f"--{name}")
    if value is None:
        if required:
            raise InputError(f"--{name} is required")
        return None
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 1:
        raise InputError(f"--{name} must be a JSON array of numbers")
    return arr


def _matrix(args, required=True):
    value = _load_json(args.matrix, "--matrix")
    if value is None:
        if required:
            raise InputError("--matrix is required")
        return None
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 2:
        raise InputError("--matrix must be a JSON array of rows")
    return arr


def _measure(args, required=True):
    w = _vector(args, "mu", required)
    return None if w is None else DiscreteMeasure(w, tol=1e-9, normalize=True)


def _p_value(text):
    if text is None:
        return None
    s = str(text).strip().lower()
    if s in ("inf", "infinity"):
        return math.inf
    try:
        return float(s)
    except ValueError:
        raise InputError(f"--p: cannot parse {text!r}") from None


def _norm(args, required=True):
    if args.norm is not None:
        return parse_norm(args.norm)
    p = _p_value(getattr(args, "p", None))
    if p is not None:
        return parse_norm("p=inf" if math.isinf(p) else f"p={p}")
    if required:
        raise InputError("--norm (or --p) is required")
    return None


def emit_report(report, fmt="json", destination=None):
    """Write a report as JSON (the full schema) or CSV (one row per record)."""
    if fmt == "json":
        text = report.to_json(indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in report.records:
            d = rec.to_dict()
            writer.writerow(["" if d[c] is None else d[c] for c in CSV_COLUMNS])
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if destination is None or destination == "-":
        sys.stdout.write(text)
    else:
        with open(destination, "w") as fh:
            fh.write(text)


def _common(p, trials=True):
    p.add_argument("--n", type=int)
    p.add_argument("--norm")
    p.add_argument("--p")
    if trials:
        p.add_argument("--trials", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    for name in ("f", "g", "h", "mu", "matrix"):
        p.add_argument(f"--{name}")


def build_parser():
    parser = argparse.ArgumentParser(prog="leibniz-lab", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a named property suite")
    p.add_argument("--suite", required=True, choices=SUITES)
    _common(p)

    p = sub.add_parser("search", help="seeded randomized search on one inequality")
    p.add_argument("--target", required=True, choices=TARGETS)
    _common(p)

    p = sub.add_parser("reproduce", help="recompute a built-in worked example")
    p.add_argument("--case", required=True, choices=CASES)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("eval", help="evaluate a single operation")
    p.add_argument("--op", required=True, choices=sorted(EVAL_OPS))
    _common(p)
    return parser


def _cmd_verify(args):
    norms = [_norm(args)] if (args.norm or args.p) and args.suite != "weighted-leibniz" else None
    n = args.n if args.n is not None else 6
    delta = _matrix(args, required=False)
    if delta is not None:
        delta = Laplacian(delta)
        n = delta.n
    report = run_suite(args.suite, n, args.trials, args.seed, norms=norms,
                       tolerance=args.tolerance, p=_p_value(args.p), delta=delta)
    return report


def _cmd_search(args):
    if args.n is None:
        raise InputError("--n is required")
    delta = _matrix(args, required=False)
    cfg = SearchConfig(
        args.target, args.n,
        norm=None if args.target == "weighted-leibniz" else _norm(args),
        trials=args.trials, seed=args.seed, tolerance=args.tolerance,
        p=_p_value(args.p) if args.target == "weighted-leibniz" else None,
        delta=None if delta is None else Laplacian(delta),
    )
    return search(cfg)


# -- eval ------------------------------------------------------------------

def _slack_result(rec):
    return rec.to_dict(), rec.holds


def _eval_opnorm(args):
    spec = _norm(args)
    a = _matrix(args)
    if spec.polyhedral:
        return opnorm_on_centered(a, spec)
    return opnorm_on_centered(a, spec, "monte-carlo", trials=args.trials, seed=args.seed)


EVAL_OPS = {
    "sort_abs_desc": lambda a: sort_abs_desc(_vector(a, "f")),
    "norm": lambda a: norm_eval(_norm(a), _vector(a, "f")),
    "dual": lambda a: dual_eval(_norm(a), _vector(a, "f")),
    "expectation": lambda a: expectation(_vector(a, "f"), _measure(a)),
    "sigma_p": lambda a: sigma_p(_vector(a, "f"), _measure(a), _p_value(a.p) or 2.0),
    "theta": lambda a: theta(_vector(a, "f")),
    "i_matrix": lambda a: i_matrix(_vector(a, "f")),
    "l_matrix": lambda a: l_matrix(_vector(a, "f")),
    "unit_contraction": lambda a: unit_contraction(_vector(a, "f")),
    "grad": lambda a: grad(_vector(a, "f")),
    "grad0": lambda a: grad0(_vector(a, "f")),
    "div": lambda a: div(_matrix(a)),
    "div0": lambda a: div0(_matrix(a)),
    "partial_seminorm": lambda a: partial_seminorm(_matrix(a), _norm(a)),
    "dirichlet": lambda a: dirichlet_eval(Laplacian(_matrix(a)), _vector(a, "f"), _vector(a, "g")),
    "is_weakly_majorized": lambda a: is_weakly_majorized(_vector(a, "f"), _vector(a, "g")),
    "is_substochastic": lambda a: is_substochastic(_matrix(a)),
    "is_doubly_stochastic": lambda a: is_doubly_stochastic(_matrix(a)),
    "extreme_points": lambda a: extreme_points_dual_kfan(a.n, _norm(a).param),
    "decompose": lambda a: [{"weight": w, "point": pt}
                            for w, pt in decompose_in_dual_ball(_vector(a, "f"), _norm(a).param)],
    "opnorm": _eval_opnorm,
    "leibniz": lambda a: _slack_result(leibniz_slack(_norm(a), _vector(a, "f"), _vector(a, "g"), a.tolerance)),
    "perm-inv-leibniz": lambda a: _slack_result(
        perm_inv_leibniz_slack(_norm(a), _vector(a, "f"), _vector(a, "g"), a.tolerance)),
    "contraction": lambda a: _slack_result(
        contraction_slack(_norm(a), _vector(a, "f"), _vector(a, "g"), a.tolerance)),
    "module": lambda a: _slack_result(module_slack(_norm(a), _vector(a, "f"), _vector(a, "g"),
                                                   tolerance=a.tolerance)),
    "bimodule": lambda a: _slack_result(
        bimodule_slack(_norm(a), _vector(a, "f"), _vector(a, "g"), _vector(a, "h"), a.tolerance)),
    "strong-leibniz": lambda a: _slack_result(strong_leibniz_slack(
        _vector(a, "f"), _norm(a), _matrix(a, required=False), tolerance=a.tolerance)),
    "kato-ponce": lambda a: _slack_result(kato_ponce_slack(
        Laplacian(_matrix(a)), _norm(a), _vector(a, "f"), _vector(a, "g"), a.tolerance)),
    "weighted-leibniz": lambda a: _slack_result(weighted_leibniz_slack(
        _vector(a, "f"), _vector(a, "g"), _measure(a), _p_value(a.p) or 2.0, a.tolerance)),
}


def _format_value(value):
    text = json.dumps(to_jsonable(value), sort_keys=True)
    if text.endswith(".0") and text.lstrip("-").replace(".", "", 1).isdigit():
        text = text[:-2]
    return text


def _cmd_eval(args):
    result = EVAL_OPS[args.op](args)
    holds = True
    if isinstance(result, tuple):
        result, holds = result
    text = _format_value(result) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if holds else EXIT_VIOLATION


def run(argv=None):
    """Parse ``argv`` and execute; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "reproduce":
            report = reproduce(args.case)
        elif args.command == "verify":
            report = _cmd_verify(args)
        else:
            report = _cmd_search(args)
        emit_report(report, args.format, args.out)
    except (InputError, ValueError) as exc:
        print(f"leibniz-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"leibniz-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ok = report.holds and report.violations == 0
    return EXIT_OK if ok else EXIT_VIOLATION


def main():
    sys.exit(run())


__all__ = ["run", "main", "emit_report", "build_parser"]
