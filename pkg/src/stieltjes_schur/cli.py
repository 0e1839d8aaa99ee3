"""Command-line front end.

Every verb reads JSON documents (a path, or ``-`` for stdin) and writes one
JSON document to stdout.  Exit codes: 0 success, 2 invalid input or a failed
precondition, 3 a verify run with failures.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import wire
from .classify import classify
from .errors import SchurError, ValidationError
from .gen import random_in_class
from .parametrize import parametrize, reconstruct
from .transforms import TransformTag, apply, inverse1
from .verify import SuiteConfig, check_identity, run_suite

EXIT_OK, EXIT_INVALID, EXIT_VERIFY_FAILED = 0, 2, 3
TRANSFORM_KINDS = ("reciprocal", "alpha_shift", "splus", "reza", "short", "schur1", "schurk")


def _load(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def _alpha(args):
    return None if args.alpha is None else wire.scalar_from_wire(args.alpha)


def _sequence(path, args=None):
    return wire.seq_from_wire(_load(path), _alpha(args) if args is not None else None)


def _matrix(path):
    doc = _load(path)
    if isinstance(doc, dict):
        for key in ("A", "matrix"):
            if key in doc:
                return wire.matrix_from_wire(doc[key])
        raise ValidationError("a matrix document is a nested array or has an 'A' or 'matrix' key")
    return wire.matrix_from_wire(doc)


def _classify(args):
    return classify(_sequence(args.file, args)).to_wire(), EXIT_OK


def _transform(args):
    if args.kind != "schurk" and args.k is not None:
        raise ValidationError("--k only applies to --kind schurk")
    tag = TransformTag(args.kind, args.k if args.k is not None else 0)
    return wire.seq_to_wire(apply(tag, _sequence(args.file, args))), EXIT_OK


def _parametrize(args):
    return wire.param_to_wire(parametrize(_sequence(args.file))), EXIT_OK


def _reconstruct(args):
    return wire.seq_to_wire(reconstruct(wire.param_from_wire(_load(args.file)))), EXIT_OK


def _invert(args):
    t = _sequence(args.file, args)
    return wire.seq_to_wire(inverse1(t, _matrix(args.A))), EXIT_OK


def _verify(args):
    if args.suite is not None:
        summary = run_suite(SuiteConfig.from_wire(_load(args.suite)))
        return summary, EXIT_VERIFY_FAILED if summary["total_failures"] else EXIT_OK
    name, path = args.identity
    A = _matrix(args.A) if args.A else None
    check = check_identity(name, _sequence(path), A)
    return check.to_wire(), EXIT_VERIFY_FAILED if check.status == "fail" else EXIT_OK


def _gen(args):
    s = random_in_class(args.cls, args.q, args.len, wire.scalar_from_wire(args.alpha), args.seed)
    return wire.seq_to_wire(s), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stieltjes-schur",
                                     description="Exact Schur-type algorithm for matrix sequences.")
    parser.add_argument("--pretty", action="store_true", help="indent the output document")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, handler, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS,
                       help="indent the output document")
        p.set_defaults(handler=handler)
        return p

    p = verb("classify", _classify, "class verdicts with witnesses")
    p.add_argument("--alpha")
    p.add_argument("file")

    p = verb("transform", _transform, "apply one transform")
    p.add_argument("--kind", required=True, choices=TRANSFORM_KINDS)
    p.add_argument("--k", type=int)
    p.add_argument("--alpha")
    p.add_argument("file")

    p = verb("parametrize", _parametrize, "the parametrization Q_0..Q_kappa")
    p.add_argument("file")

    p = verb("reconstruct", _reconstruct, "rebuild a sequence from a parametrization document")
    p.add_argument("file")

    p = verb("invert", _invert, "inverse Schur step with first term A")
    p.add_argument("--A", required=True, metavar="AFILE")
    p.add_argument("--alpha")
    p.add_argument("file")

    p = verb("verify", _verify, "run one catalog identity or a seeded suite")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--suite", metavar="CONFIGFILE")
    group.add_argument("--identity", nargs=2, metavar=("NAME", "FILE"))
    p.add_argument("--A", metavar="AFILE", help="first term for the inverse-step identities")

    p = verb("gen", _gen, "seeded sequence in a class")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--len", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--seed", type=int, required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, code = args.handler(args)
    except (SchurError, ValueError, KeyError, IndexError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(wire.dumps(doc, pretty=args.pretty))
    return code


if __name__ == "__main__":
    sys.exit(main())
