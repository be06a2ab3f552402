"""Command-line front end. Exit codes: 0 ok, 1 verification false, 2 input error, 3 not found within budget."""

from __future__ import annotations

import argparse
import json
import sys

from .cube_blowup import build_blowup
from .graph_core import load_graph
from .invariance import is_u0_invariant, minimal_invariant_subgraphs, u0_invariant_subgraphs
from .partitions import all_partitions, partition_from_json
from .realization import (certificate_from_json, check_certificate, enumerate_complex_types, problem_from_json,
                          realize)

OK, FALSE, INPUT_ERROR, NOT_FOUND = 0, 1, 2, 3


class InputError(Exception):
    pass


def dumps(obj):
    return json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n"


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _json(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON: {exc}") from None


def _graph(path):
    try:
        return load_graph(_read(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _positive(name, zero_ok=False):
    type_ = float if name == "time limit" else int

    def conv(s):
        try:
            v = type_(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number") from None
        if v < 0 or v == 0 and not zero_ok:
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return v
    return conv


def cmd_partitions(args):
    g = _graph(args.graph)
    return OK, [p.to_json() for p in all_partitions(g)]


def cmd_invariant_subgraphs(args):
    g = _graph(args.graph)
    if args.subset is not None:
        try:
            rep = is_u0_invariant(g, args.subset.split(",") if args.subset else [])
        except (KeyError, ValueError) as exc:
            raise InputError(str(exc)) from None
        return OK, rep.to_json()
    try:
        inv = u0_invariant_subgraphs(g, args.budget)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return OK, {"invariant": [g.sort(s) for s in inv],
                "minimal": [g.sort(s) for s in minimal_invariant_subgraphs(g, args.budget)]}


def cmd_blowup(args):
    g = _graph(args.graph)
    obj = _json(args.collection)
    if isinstance(obj, dict):
        obj = obj.get("pi", obj.get("collection"))
    if not isinstance(obj, list):
        raise InputError("collection JSON must be a list of partitions")
    try:
        pi = [partition_from_json(g, p) for p in obj]
        x = build_blowup(g, pi)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc)) from None
    return OK, x.to_json()


def cmd_types(args):
    g = _graph(args.graph)
    try:
        cat = enumerate_complex_types(g, args.max_entries, args.time_limit)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return (OK if cat.complete else NOT_FOUND), cat.to_json()


def cmd_realize(args):
    try:
        prob = problem_from_json(_json(args.problem))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.max_entries is not None:
        prob.max_entries = args.max_entries
    if args.radius is not None:
        prob.radius = args.radius
    if args.time_limit is not None:
        prob.time_limit = args.time_limit
    cert = realize(prob, threads=args.threads)
    if cert is None:
        return NOT_FOUND, "not-found-within-budget"
    return OK, cert.to_json()


def cmd_check(args):
    try:
        cert = certificate_from_json(_json(args.certificate))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    ok, reason = check_certificate(cert)
    return (OK if ok else FALSE), {"valid": ok, "reason": reason}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive("threads"), default=argparse.SUPPRESS,
                        help="worker threads for searches")
    common.add_argument("-o", "--output", default=argparse.SUPPRESS, help="write JSON here instead of stdout")
    ap = argparse.ArgumentParser(prog="raagblowup", description=__doc__, parents=[common])
    ap.set_defaults(threads=1, output=None)
    sub = ap.add_subparsers(dest="command", required=True)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[common], **k)

    p = sub.add_parser("partitions", help="all Γ-Whitehead partitions of a graph")
    p.add_argument("graph")
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("invariant-subgraphs", help="U⁰-invariant subgraphs, or test one subset")
    p.add_argument("graph")
    p.add_argument("--subset", help="comma separated vertices to test")
    p.add_argument("--budget", type=_positive("budget"), default=16, help="max vertices for full enumeration")
    p.set_defaults(func=cmd_invariant_subgraphs)

    p = sub.add_parser("blowup", help="build the blowup of a compatible collection")
    p.add_argument("graph")
    p.add_argument("collection")
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("types", help="catalog of Γ-complex types")
    p.add_argument("graph")
    p.add_argument("--max-entries", type=_positive("max entries", zero_ok=True))
    p.add_argument("--time-limit", type=_positive("time limit"))
    p.set_defaults(func=cmd_types)

    p = sub.add_parser("realize", help="search for a realization certificate")
    p.add_argument("problem")
    p.add_argument("--max-entries", type=_positive("max entries", zero_ok=True))
    p.add_argument("--radius", type=_positive("radius"))
    p.add_argument("--time-limit", type=_positive("time limit"))
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("check", help="re-verify a certificate")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_check)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        code, out = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    text = dumps(out)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return INPUT_ERROR
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
