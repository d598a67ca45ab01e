"""Command-line front end.

Exit codes: 0 success (a "not minimal" finding is a success), 2 bad input or
usage, 3 numerical failure or violated bound, 4 a hypothesis of the requested
operation does not hold.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .dualbasis import compute_dual, verify_duality
from .eigenstructure import (certify_minimal_basis, certify_minimal_basis_full_rank,
                             classical_grid, is_ftsr, minimal_indices)
from .errors import HypothesisError, InputError, NumericalError
from .experiments import CHECKS, genericity_experiment, perturbation_experiment
from .polymat import DegreeProfile, from_dict
from .robustness import robustness_report
from .sylvester import build_sylvester, build_trimmed, to_csv

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_HYPOTHESIS = 0, 2, 3, 4


def _positive_float(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return x


def _positive_int(text):
    try:
        x = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if x < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return x


def _profile(text):
    try:
        return DegreeProfile.parse(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from None


def parse_grid(text: str) -> list[complex]:
    """``"r1,r2,...:P"``: the origin plus ``P`` equispaced points on each circle."""
    try:
        radii, _, points = text.partition(":")
        rs = [float(x) for x in radii.split(",") if x.strip()]
        p = int(points) if points else 64
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 0.5,1,2:64, got {text!r}") from None
    if not rs or p < 1 or any(r <= 0 for r in rs):
        raise argparse.ArgumentTypeError("grid needs positive radii and at least one point")
    return classical_grid(rs, p)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--tol", type=_positive_float, help="absolute rank tolerance override")

    matrix = argparse.ArgumentParser(add_help=False)
    matrix.add_argument("--input", "-i", required=True,
                        help="polynomial matrix JSON file ('-' for stdin)")

    exp = argparse.ArgumentParser(add_help=False)
    exp.add_argument("--trials", type=_positive_int, default=100)
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--csv", dest="csv_path", help="also write the per-trial CSV here")

    parser = argparse.ArgumentParser(prog="minbasis", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common, matrix],
                   help="rank sequences, minimal indices and certificates")
    sub.add_parser("certify", parents=[common, matrix], help="minimal-basis certificates")
    sub.add_parser("ftsr", parents=[common, matrix], help="full trimmed Sylvester rank test")
    sub.add_parser("dual", parents=[common, matrix], help="compute a dual minimal basis")
    p = sub.add_parser("radius", parents=[common, matrix], help="robustness radii")
    p.add_argument("--grid", type=parse_grid, help="sample grid as radii:points, e.g. 0.5,1,2:64")
    p = sub.add_parser("perturb", parents=[common, matrix, exp],
                       help="Monte Carlo check of a perturbation radius")
    p.add_argument("--fractions", type=_float_list, default=[0.5, 0.9, 0.99])
    p.add_argument("--check", choices=CHECKS, default="ftsr")
    p = sub.add_parser("genericity", parents=[common, exp],
                       help="Monte Carlo FTSR rate and index histogram")
    p.add_argument("--profile", type=_profile, required=True, help="m,n:d1,...,dm")
    p.add_argument("--field", choices=("real", "complex"), default="real")
    p = sub.add_parser("dump-sylvester", parents=[common, matrix],
                       help="print T_k (or S_k with --full)")
    p.add_argument("--k", type=_positive_int, default=1)
    p.add_argument("--full", action="store_true", help="untrimmed Sylvester matrix S_k")
    return parser


def _load(path):
    try:
        if path == "-":
            doc = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("the matrix file must hold a JSON object")
    return from_dict(doc)


def _text(doc: dict) -> str:
    lines = []
    for key, val in doc.items():
        if val is None:
            val = "n/a"
        elif isinstance(val, bool):
            val = str(val).lower()
        elif isinstance(val, (list, dict)):
            val = json.dumps(val)
        lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"


def _render(doc: dict, fmt: str) -> str:
    if fmt == "text":
        return _text(doc)
    if fmt == "csv":
        return "key,value\n" + "".join(
            f"{k},{json.dumps(v) if isinstance(v, (list, dict, bool)) or v is None else v}\n"
            for k, v in doc.items())
    return json.dumps(doc, indent=2) + "\n"


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _certificates(M, tol) -> dict:
    c = certify_minimal_basis(M, tol)
    f = certify_minimal_basis_full_rank(M, tol)
    return {
        "isMinimalBasis": c.holds,
        "rankHr": c.rank_hr,
        "lhs": c.lhs,
        "rhs": c.rhs,
        "dPrime": c.d_prime,
        "reason": c.reason,
        "fullRankCertificate": f.holds,
        "smallestFullRowRankK": f.k,
    }


def run(args) -> int:
    tol = args.tol
    cmd = args.command
    if cmd == "genericity":
        res = genericity_experiment(args.profile, args.trials, args.seed, field=args.field,
                                    tol=tol)
        return _experiment_output(res, args)
    M = _load(args.input)
    if cmd == "analyze":
        doc = minimal_indices(M, tol).to_dict()
    elif cmd == "certify":
        doc = _certificates(M, tol)
    elif cmd == "ftsr":
        r = is_ftsr(M, tol)
        doc = {"isFTSR": r.holds, "kPrime": r.k_prime, "t": r.t, "branch": r.branch,
               "ranks": {str(k): v for k, v in sorted(r.ranks.items())},
               "shapes": {str(k): list(v) for k, v in sorted(r.shapes.items())}}
    elif cmd == "dual":
        dual = compute_dual(M, tol=tol)
        doc = dual.to_dict()
        doc["residual"] = verify_duality(M, dual, tol).residual
    elif cmd == "radius":
        rep = robustness_report(M, args.grid, tol)
        if args.format == "text":
            _emit(rep.to_text(), args.output)
            return EXIT_OK
        doc = rep.to_dict()
    elif cmd == "perturb":
        res = perturbation_experiment(M, args.trials, args.seed, args.fractions, args.check,
                                      raise_on_violation=False, tol=tol)
        code = _experiment_output(res, args)
        return EXIT_NUMERICAL if not res.clean else code
    elif cmd == "dump-sylvester":
        A = build_sylvester(M, args.k).data if args.full else build_trimmed(M, args.k).data
        if args.format == "csv":
            _emit(to_csv(A), args.output)
            return EXIT_OK
        doc = {"k": args.k, "trimmed": not args.full, "shape": list(A.shape),
               "data": [[[float(x.real), float(x.imag)] if np.iscomplexobj(A) else float(x)
                         for x in row] for row in A]}
    else:  # pragma: no cover - argparse restricts the choices
        raise InputError(f"unknown command {cmd}")
    _emit(_render(doc, args.format), args.output)
    return EXIT_OK


def _experiment_output(res, args) -> int:
    if args.csv_path:
        _emit(res.to_csv(), args.csv_path)
    if args.format == "csv":
        _emit(res.to_csv(), args.output)
    else:
        _emit(_render(res.summary(), args.format), args.output)
    return EXIT_OK if res.clean else EXIT_NUMERICAL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except InputError as exc:
        print(f"minbasis: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HypothesisError as exc:
        print(f"minbasis: hypothesis not satisfied: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except NumericalError as exc:
        print(f"minbasis: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
