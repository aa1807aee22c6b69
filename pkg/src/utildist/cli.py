"""Command-line interface.

Exit codes: 0 ok, 2 validation or parse error, 3 conditioning on a null
set/event, 4 internal self-check failure, 5 method inapplicable. Every real
is printed with exactly 9 decimals, rounded half-even.

Set arguments are comma-separated labels (``f,m``); ``-`` or an empty
string is the empty set. Event arguments are comma-separated ``VAR=0|1``
pairs, with ``;`` separating the terms of a union; ``-``, ``*`` or an empty
string is the whole space.
"""
from __future__ import annotations

import argparse
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path

from . import binet, documents, factorize, factors, maut, unet
from .errors import (
    InapplicableError,
    NullConditioningError,
    SelfCheckError,
    UtilityError,
    ValidationError,
)

EXIT_OK, EXIT_VALIDATION, EXIT_NULL, EXIT_SELFCHECK, EXIT_INAPPLICABLE = 0, 2, 3, 4, 5

_NINE = Decimal("1e-9")


def fmt(x: float) -> str:
    """Exactly nine decimals, half-even, never ``-0.000000000``."""
    s = format(Decimal(float(x)).quantize(_NINE, rounding=ROUND_HALF_EVEN), "f")
    return s[1:] if s.startswith("-") and not s.strip("-0.") else s


def fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def parse_set(text: str) -> list[str]:
    text = text.strip()
    if text in ("", "-"):
        return []
    return [t.strip() for t in text.split(",") if t.strip()]


def parse_event(text: str) -> unet.UEvent:
    text = text.strip()
    if text in ("", "-", "*"):
        return unet.UEvent()
    terms = []
    for chunk in text.split(";"):
        term = {}
        for pair in filter(None, (p.strip() for p in chunk.split(","))):
            name, sep, value = pair.partition("=")
            if not sep or value.strip() not in ("0", "1"):
                raise ValidationError(f"bad event term {pair!r}; expected VAR=0 or VAR=1")
            term[name.strip()] = int(value)
        terms.append(term)
    return unet.UEvent(terms)


def _expect(obj, cls, what):
    if not isinstance(obj, cls):
        raise ValidationError(f"expected a {what} document")
    return obj


def _state_text(space, state):
    return ",".join(f"{n}={v}" for n, v in zip(space.names, state))


def _lottery_text(space, p):
    parts = []
    for s in space.states():
        prob = p.probs.get(tuple(s), 0.0)
        if prob:
            parts.append(f"{_state_text(space, s)}:{fmt(prob)}")
    return " ".join(parts)


def cmd_dist(args, out):
    dist = _expect(documents.load(args.file), factors.UtilityDistribution, "distribution")
    if args.query == "utility":
        if len(args.sets) != 1:
            raise ValidationError("utility takes one factor set")
        print(fmt(factors.utility(dist, parse_set(args.sets[0]))), file=out)
        return
    if len(args.sets) != 2:
        raise ValidationError(f"{args.query} takes two factor sets: X Y")
    x, y = (parse_set(s) for s in args.sets)
    if args.query == "conditional":
        print(fmt(factors.conditional_utility(dist, x, y)), file=out)
    else:
        print(fmt_bool(factors.is_subjectively_independent(dist, x, y, args.tol)), file=out)


def _tioli_text(t):
    if t is None:
        return "none"
    return ", ".join(f"{k}={fmt(v)}" for k, v in t.weights.items())


def cmd_classify(args, out):
    u = _expect(documents.load(args.file), maut.TabulatedUtility, "table")
    tol = args.tol if args.tol_given else None
    r = maut.classify(u, tol=tol)
    print(f"singular: {fmt_bool(r.singular)}", file=out)
    print(f"mutual: {fmt_bool(r.mutual)}", file=out)
    print(f"additive: {fmt_bool(r.additive)}", file=out)
    if r.tioli_applicable:
        print(f"tioli-strict: {_tioli_text(r.tioli_strict)}", file=out)
        print(f"tioli-affine: {_tioli_text(r.tioli_affine)}", file=out)
    else:
        print("tioli-strict: n/a", file=out)
        print("tioli-affine: n/a", file=out)
    for (Y, Z), ok in r.pairwise.items():
        print(f"ui {','.join(Y)} | {','.join(Z)}: {fmt_bool(ok)}", file=out)
        if not ok:
            z0, z1 = r.ui_witnesses[(Y, Z)]
            a = ",".join(f"{k}={v}" for k, v in z0.items())
            b = ",".join(f"{k}={v}" for k, v in z1.items())
            print(f"  witness: slices at {a} and {b} are not positive-affine related", file=out)
    w = r.additive_witness
    if w is not None:
        print(f"  witness p1: eu={fmt(w.eu_uniform)} {_lottery_text(u.space, w.uniform)}", file=out)
        print(f"  witness p2: eu={fmt(w.eu_diagonal)} {_lottery_text(u.space, w.diagonal)}", file=out)


def cmd_factorize(args, out):
    u = _expect(documents.load(args.file), maut.TabulatedUtility, "table")
    if args.method == "binary":
        fs = factorize.binary_factorization(u, args.quantum)
    else:
        if args.quantum is not None:
            raise ValidationError("--quantum only applies to --method binary")
        fs = factorize.prefix_chain(u)
    fs.check(u)
    print(f"method: {args.method}", file=out)
    print(f"factors: {len(fs.distribution)}", file=out)
    for f, raw in fs.raw_weights.items():
        print(f"factor {f}: raw={fmt(raw)} normalized={fmt(fs.distribution[f])}", file=out)
    print(f"affine: scale={fmt(fs.affine.scale)} offset={fmt(fs.affine.offset)}", file=out)
    for s, _ in u.items():
        members = ",".join(sorted(fs.state_map[s], key=lambda f: list(fs.raw_weights).index(f)))
        print(f"state {_state_text(u.space, s)}: {{{members}}}", file=out)
    if args.emit:
        documents.dump(fs.distribution, args.emit)


def cmd_unet(args, out):
    net = _expect(documents.load(args.file), unet.UtilityNetwork, "network")
    q, rest = args.query, args.args
    if q == "validate":
        issues = unet.validate(net)
        for issue in issues:
            print(issue, file=out)
        if issues:
            raise ValidationError(f"{len(issues)} problem(s) found")
        print("ok", file=out)
        return
    if q == "joint":
        if len(rest) != 1:
            raise ValidationError("joint takes one complete assignment")
        e = parse_event(rest[0])
        if len(e.terms) != 1:
            raise ValidationError("joint takes a single assignment, not a union")
        print(fmt(unet.joint_utility(net, dict(e.terms[0]))), file=out)
    elif q == "marginal":
        if len(rest) > 1:
            raise ValidationError("marginal takes at most one event")
        print(fmt(unet.marginal_utility(net, parse_event(rest[0] if rest else ""))), file=out)
    elif q == "conditional":
        if len(rest) != 2:
            raise ValidationError("conditional takes two events: X Y")
        print(fmt(unet.conditional_utility_query(net, parse_event(rest[0]), parse_event(rest[1]))), file=out)
    else:
        if len(rest) not in (2, 3):
            raise ValidationError(f"{q} takes variable sets X Y [Z]")
        X, Y = parse_set(rest[0]), parse_set(rest[1])
        Z = parse_set(rest[2]) if len(rest) == 3 else []
        if q == "dsep":
            print(fmt_bool(unet.d_separated(net, X, Y, Z)), file=out)
        else:
            print(fmt_bool(unet.numerically_independent(net, X, Y, Z, args.tol)), file=out)


def cmd_binet(args, out):
    b = _expect(documents.load(args.file), binet.BiNetwork, "binetwork")
    pe = parse_event(args.evidence_p) if args.evidence_p is not None else None
    ue = parse_event(args.evidence_u) if args.evidence_u is not None else None
    print(fmt(binet.expected_utility_query(b, pe, ue)), file=out)


def cmd_run(args, out):
    q = _expect(documents.load(args.file), documents.Query, "query")
    target = Path(args.file).parent / q.target
    argv = [q.command, str(target), *q.args]
    for key, value in q.options.items():
        argv += [f"--{key.replace('_', '-')}", str(value)]
    return _dispatch(build_parser().parse_args(argv), out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="utildist", description="Utility distributions, tables and utility networks.")
    sub = p.add_subparsers(dest="command", required=True)

    def tol_opt(sp):
        sp.add_argument("--tol", type=float, default=None, help="equality tolerance (default 1e-9)")

    sp = sub.add_parser("dist", help="queries on a utility distribution")
    sp.add_argument("file")
    sp.add_argument("query", choices=["utility", "conditional", "independent"])
    sp.add_argument("sets", nargs="+")
    tol_opt(sp)
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("classify", help="independence report for a utility table")
    sp.add_argument("file")
    tol_opt(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("factorize", help="rewrite a table as a factor space")
    sp.add_argument("file")
    sp.add_argument("--method", choices=["prefix", "binary"], default="prefix")
    sp.add_argument("--quantum", type=float, default=None)
    sp.add_argument("--emit", default=None, help="write the factor distribution document here")
    sp.set_defaults(func=cmd_factorize)

    sp = sub.add_parser("unet", help="queries on a utility network")
    sp.add_argument("file")
    sp.add_argument("query", choices=["validate", "joint", "marginal", "conditional", "dsep", "indep"])
    sp.add_argument("args", nargs="*")
    tol_opt(sp)
    sp.set_defaults(func=cmd_unet)

    sp = sub.add_parser("binet", help="expected utility over a bi-network")
    sp.add_argument("file")
    sp.add_argument("--evidence-p", default=None)
    sp.add_argument("--evidence-u", default=None)
    sp.set_defaults(func=cmd_binet)

    sp = sub.add_parser("run", help="execute a stored query document")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_run)
    return p


def _dispatch(args, out):
    if hasattr(args, "tol"):
        args.tol_given = args.tol is not None
        if args.tol is None:
            args.tol = factors.DEFAULT_TOL
        elif args.tol < 0:
            raise ValidationError("--tol must be nonnegative")
    return args.func(args, out)


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code else EXIT_OK
    try:
        _dispatch(args, out)
    except NullConditioningError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_NULL
    except SelfCheckError as exc:
        print(f"self-check failed: {exc}", file=err)
        return EXIT_SELFCHECK
    except InapplicableError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INAPPLICABLE
    except (ValidationError, UtilityError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_VALIDATION
    return EXIT_OK


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
