"""Command line entry point.

Exit codes: 0 success, 1 a check or comparison failed, 2 usage or an input
outside what the operation supports, 3 parse error, 4 validation failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import io
from .symseq import ArityCapError

OK, FAILED, USAGE, PARSE, INVALID = 0, 1, 2, 3, 4


def term(t, colours=("L", "R")) -> str:
    """A coproduct tree as a term: leaves are numbers, vertices colour+index(children)."""
    if t[0] == 0:
        return str(t[1])
    return f"{colours[t[1]]}{t[2]}(" + ",".join(term(c, colours) for c in t[3]) + ")"


def _table(seq) -> str:
    return "\n".join(f"{n} {seq.size(n)}" for n in seq.arities())


def _load(path, kind):
    doc = io.load(path)
    if doc.kind != kind:
        raise io.ParseError(f"{path}: expected a {kind} document, found {doc.kind}")
    return doc


def _operad(arg, cap):
    """A builtin name (j, com, as, joined by *) or an operad document."""
    try:
        return io.builtin_operad(arg, cap), arg
    except io.ParseError:
        doc = _load(arg, "operad")
        return doc.payload, doc.payload.name


def _emit(args, doc, seq):
    if args.table:
        print(_table(seq))
    text = io.save_text(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    elif not args.table:
        print(text, end="")


# -- commands -----------------------------------------------------------------------
def cmd_validate(args):
    doc = io.load(args.file)
    if args.kind and doc.kind != args.kind:
        raise io.ParseError(f"expected a {args.kind} document, found {doc.kind}")
    obj = doc.payload[0] if doc.kind == "axial" else doc.payload
    carrier = getattr(obj, "carrier", obj)
    print(f"ok: {doc.kind} {doc.meta.get('name', '')} sizes {carrier.sizes()}")
    return OK


def cmd_product(args):
    from . import products
    X, Y = (_load(p, "sequence").payload for p in (args.x, args.y))
    cap = min(args.cap or 4, X.cap, Y.cap)
    fn = {"circ": products.circ, "box": products.box, "graded": products.graded}.get(args.kind)
    S = products.levelwise(X, Y, cap) if fn is None else fn(X, Y, cap)
    _emit(args, io.Document("sequence", S), S)
    return OK


def cmd_gamma(args):
    from .divpow import gamma
    X = _load(args.x, "sequence").payload
    G = gamma(X, args.n, args.cap)
    _emit(args, io.Document("sequence", G), G)
    return OK


def cmd_gamma_axial(args):
    from .axial import gamma_axial, identity_axial
    P, ax = _load(args.file, "axial").payload
    if ax.n != args.n:
        print(f"error: the document carries an {ax.n}-axial structure, not {args.n}", file=sys.stderr)
        return USAGE
    G = gamma_axial(P, ax)
    if not args.table:
        print(f"# unit: {'none (nonunital)' if G.unit is None else G.unit}")
    # the result is written as a 1-axial document, the format for bare nonsymmetric operads
    _emit(args, io.Document("axial", (G, identity_axial(G))), G.carrier)
    return OK


def cmd_tensor(args):
    from .operads import TensorOperad, bv_tensor
    cap = args.cap or 3
    (P, pn), (Q, qn) = _operad(args.p, cap), _operad(args.q, cap)
    T = bv_tensor(P, Q, cap)
    if args.out:
        io.save(io.Document("operad", T), args.out)
    for n in T.arities():
        print(f"{n} {T.size(n)}")
        if not args.table:
            for i in range(T.size(n)):
                lab = T.carrier.label(n, i)
                print("  " + (term(lab) if isinstance(T, TensorOperad) else repr(lab)))
    return OK


def cmd_validate_operad(args):
    args.kind = "operad"
    return cmd_validate(args)


def cmd_free_bimodule(args):
    from .bimodules import free_bimodule
    cap = args.cap or 3
    X = _load(args.x, "sequence").payload
    P, Q = io.builtin_operad(args.p, cap), io.builtin_operad(args.q, cap)
    F = free_bimodule(P, Q, X, min(cap, X.cap))
    _emit(args, io.Document("bimodule", F, {"over": (args.p, args.q)}), F.carrier)
    return OK


def cmd_lift_tensor(args):
    from .bimodules import LiftedTensor
    dm, dn = _load(args.m, "bimodule"), _load(args.n, "bimodule")
    cap = min(args.cap or 3, dm.payload.cap, dn.payload.cap)
    over = tuple(f"{a}*{b}" for a, b in zip(dm.meta["over"], dn.meta["over"]))
    L = LiftedTensor(dm.payload, dn.payload, cap)
    _emit(args, io.Document("bimodule", L.bimodule, {"over": over}), L.bimodule.carrier)
    return OK


def cmd_oracle(args):
    from . import coordfree as cf
    from .suite import oracle_check
    if args.x is None:
        n, fails = oracle_check(args.kind, f"{args.seed}:oracle-agreement/{args.kind}", args.level,
                                workers=args.workers)
        for f in fails:
            print(f)
        print(f"{args.kind}: {n - len(fails)} of {n} pairs agree")
        return FAILED if fails else OK
    X, Y = (_load(p, "sequence").payload for p in (args.x, args.y))
    cap = min(args.cap or 3, X.cap, Y.cap)
    if not args.compare:
        print(_table(cf.kan_product(args.kind, X, Y, cap)))
        return OK
    bad = cf.oracle_agreement(args.kind, X, Y, cap)
    for line in bad:
        print(line)
    print("agree" if not bad else f"{len(bad)} mismatches")
    return FAILED if bad else OK


def cmd_check(args):
    from .suite import CHECKS, run_suite
    if args.only and not any(n in CHECKS or any(c.startswith(n + "/") for c in CHECKS) for n in args.only):
        print(f"error: no check named {args.only}; known: {', '.join(CHECKS)}", file=sys.stderr)
        return USAGE
    report = run_suite(args.level, args.seed, only=args.only, workers=args.workers,
                       circ_relation=args.circ_relation)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for r in report["checks"]:
            status = "PASS" if r["passed"] else "FAIL"
            print(f"{status} {r['name']}  instances={r['instances']}  {r['seconds']}s")
            for f in r["failures"]:
                print(f"    {f}")
        passed = sum(r["passed"] for r in report["checks"])
        print(f"{passed}/{len(report['checks'])} checks passed in {report['seconds']}s")
    return OK if report["passed"] else FAILED


# -- parser -------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bvtensor", description="Symmetric sequences, operads and their Boardman-Vogt tensor.")
    sub = ap.add_subparsers(dest="command", required=True)

    def out_flags(p):
        p.add_argument("--table", action="store_true", help="print an arity -> cardinality table")
        p.add_argument("-o", "--out", help="write the resulting document here")

    p = sub.add_parser("validate", help="load and validate a document")
    p.add_argument("file")
    p.add_argument("--kind", choices=io.KINDS)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("validate-operad", help="load and validate an operad document")
    p.add_argument("file")
    p.set_defaults(fn=cmd_validate_operad)

    p = sub.add_parser("product", help="a monoidal product of two sequence documents")
    p.add_argument("--kind", choices=("circ", "box", "graded", "levelwise"), required=True)
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--cap", type=int, help="arity bound (default 4)")
    out_flags(p)
    p.set_defaults(fn=cmd_product)

    p = sub.add_parser("gamma", help="the divided power of a sequence document")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("x")
    p.add_argument("--cap", type=int)
    out_flags(p)
    p.set_defaults(fn=cmd_gamma)

    p = sub.add_parser("gamma-axial", help="the divided power of an axial operad document")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("file")
    out_flags(p)
    p.set_defaults(fn=cmd_gamma_axial)

    p = sub.add_parser("tensor", help="the Boardman-Vogt tensor of two operads")
    p.add_argument("p", help="j, com, as (joined by *) or an operad document")
    p.add_argument("q")
    p.add_argument("--cap", type=int, help="arity bound (default 3)")
    p.add_argument("--table", action="store_true", help="sizes only, no representative terms")
    p.add_argument("-o", "--out")
    p.set_defaults(fn=cmd_tensor)

    p = sub.add_parser("free-bimodule", help="the free (P, Q)-bimodule on a sequence document")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("x")
    p.add_argument("--cap", type=int)
    out_flags(p)
    p.set_defaults(fn=cmd_free_bimodule)

    p = sub.add_parser("lift-tensor", help="the lifted tensor of two bimodule documents")
    p.add_argument("m")
    p.add_argument("n")
    p.add_argument("--cap", type=int)
    out_flags(p)
    p.set_defaults(fn=cmd_lift_tensor)

    p = sub.add_parser("oracle", help="the Kan extension oracle; without inputs, run the sequence grid")
    p.add_argument("--kind", choices=("circ", "box", "graded"), required=True)
    p.add_argument("x", nargs="?")
    p.add_argument("y", nargs="?")
    p.add_argument("--cap", type=int)
    p.add_argument("--compare", action="store_true", help="compare with the direct product")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("check", help="run the theorem-check suite")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", nargs="*", help="check names or prefixes")
    p.add_argument("--workers", type=int, default=1, help="processes for the oracle grids")
    p.add_argument("--json", action="store_true")
    p.add_argument("--circ-relation", default="coend", choices=("coend", "flipped", "literal"),
                   help=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "x", None) is not None and getattr(args, "y", "") is None:
        print("error: give both inputs or neither", file=sys.stderr)
        return USAGE
    try:
        return args.fn(args)
    except io.ValidationError as e:
        print("validation failed:", file=sys.stderr)
        for v in e.violations:
            print(f"  {v}", file=sys.stderr)
        return INVALID
    except io.ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return PARSE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except (ArityCapError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
