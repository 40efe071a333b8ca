"""Command-line front end.  Every subcommand reads and writes JSON.

Exit codes: 0 success, 1 domain error (JSON on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import catalog as cat
from .constraints import HPolytope, build_polytope, count_independent_classicality
from .decompose import decompose
from .errors import NBTSError
from .polytope import affine_hull, contains, enumerate_vertices
from .scenario import Behavior, Scenario, TimingRegime, check_classicality_equalities, check_nbts
from .table import format_rows, reproduce
from .twotime.analysis import is_linear_two_time, nbts_witness_single, structural_form_check
from .twotime.bridge import extract_behavior, strategy_from_dict
from .twotime.tensor import LabeledTensor


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_json(path: str | None):
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not valid JSON: {exc}") from None


def _scenario(args, default: Scenario | None = None) -> Scenario:
    if args.scenario:
        try:
            return Scenario.parse(args.scenario)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if default is not None:
        return default
    return Scenario.bipartite(2, 2, 2, 2)


def _regime(args) -> TimingRegime:
    try:
        return TimingRegime.parse(args.regime)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _polytope(args) -> HPolytope:
    if getattr(args, "polytope", None):
        return HPolytope.from_dict(_load_json(args.polytope))
    return build_polytope(_scenario(args), _regime(args), args.classical)


def _behavior(args) -> Behavior:
    return Behavior.from_dict(_load_json(args.input))


# subcommands -----------------------------------------------------------------


def cmd_vertices(args, out):
    v = enumerate_vertices(_polytope(args))
    if args.jsonl:
        for vert in v.vertices:
            out.write(_dump([str(c) for c in vert]) + "\n")
    else:
        out.write(_dump(v.to_dict()) + "\n")
    return 0


def cmd_dim(args, out):
    h = _polytope(args)
    hull = affine_hull(h)
    out.write(_dump({"ambient_dim": h.ambient_dim, "dimension": hull.dimension,
                     "implicit_inequalities": list(hull.implicit)}) + "\n")
    return 0


def cmd_member(args, out):
    b = _behavior(args)
    s = b.scenario
    if args.polytope:
        h = HPolytope.from_dict(_load_json(args.polytope))
    else:
        h = build_polytope(s, _regime(args), args.classical)
    cert = contains(h, None, b.values) if args.method == "h" else contains(None, enumerate_vertices(h), b.values)
    res = cert.to_dict()
    res["verdict"] = "member" if cert.member else "not a member"
    out.write(_dump(res) + "\n")
    return 0


def cmd_decompose(args, out):
    d = decompose(_behavior(args))
    out.write(_dump(d.to_dict(include_trace=args.trace)) + "\n")
    return 0


def cmd_nbts_check(args, out):
    out.write(_dump(check_nbts(_behavior(args), _regime(args)).to_dict()) + "\n")
    return 0


def cmd_classical_check(args, out):
    out.write(_dump(check_classicality_equalities(_behavior(args)).to_dict()) + "\n")
    return 0


def cmd_catalog(args, out):
    s = _scenario(args)
    if args.family:
        verts = cat.generate_vertices(args.family, s)
        items = [{"descriptor": v.descriptor(), "behavior": v.behavior.to_dict()} for v in verts]
    else:
        items = [{"behavior": b.to_dict()} for b in cat.catalog_for(_regime(args), args.classical, args.complete)]
    out.write(_dump({"count": len(items), "vertices": items}) + "\n")
    return 0


def cmd_table(args, out):
    rows = reproduce(_scenario(args))
    if args.json:
        out.write(_dump([r.to_dict() for r in rows]) + "\n")
    else:
        out.write(format_rows(rows) + "\n")
    return 0 if all(r.ok for r in rows) else 1


def _tensor(args) -> LabeledTensor:
    return LabeledTensor.from_dict(_load_json(args.input))


def cmd_qstate_nbts(args, out):
    eta = _tensor(args)
    report = nbts_witness_single(eta, tol=args.tol).to_dict()
    structure = structural_form_check(eta, "product_identity_single", tol=args.tol)
    report["structure"] = {"matches": structure.matches, "residual": structure.residual}
    out.write(_dump(report) + "\n")
    return 0


def cmd_qstate_linear(args, out):
    out.write(_dump(is_linear_two_time(_tensor(args), tol=args.tol).to_dict()) + "\n")
    return 0


def cmd_qstate_behavior(args, out):
    eta = _tensor(args)
    strat = _load_json(args.strategy)
    try:
        alice = strategy_from_dict(strat["alice"], "A", eta.wire_dim("A1"), eta.wire_dim("A3"))
        bob = strategy_from_dict(strat["bob"], "B", eta.wire_dim("B1"), eta.wire_dim("B3"))
    except KeyError as exc:
        raise UsageError(f"strategy file or state is missing {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(_dump(extract_behavior(eta, alice, bob, tol=args.tol).to_dict()) + "\n")
    return 0


def cmd_equality_count(args, out):
    s = _scenario(args)
    s.require_parties(2)
    (A, B), (X, Y) = s.outputs, s.inputs
    out.write(_dump({"scenario": str(s), "count": count_independent_classicality(s),
                     "formula": (A - 1) * (B - 1) * (X - 1) * (Y - 1)}) + "\n")
    return 0


# parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nbts", description="NBTS and classical correlation polytopes.")
    sub = p.add_subparsers(dest="command", required=True)

    def poly_flags(sp, polytope_file=True):
        sp.add_argument("--scenario", help="d1,d2,m1,m2 (default 2,2,2,2)")
        sp.add_argument("--regime", default="indefinite", help="indefinite | parallel | seq:AB | seq:BA")
        sp.add_argument("--classical", action="store_true", help="add the classicality equalities")
        if polytope_file:
            sp.add_argument("--polytope", help="HPolytope JSON file instead of scenario/regime")

    sp = sub.add_parser("vertices", help="enumerate vertices")
    poly_flags(sp)
    sp.add_argument("--jsonl", action="store_true", help="one vertex per line")
    sp.set_defaults(fn=cmd_vertices)

    sp = sub.add_parser("dim", help="affine dimension")
    poly_flags(sp)
    sp.set_defaults(fn=cmd_dim)

    sp = sub.add_parser("member", help="polytope membership with certificate")
    poly_flags(sp)
    sp.add_argument("--method", choices=("v", "h"), default="v",
                    help="v: LP over enumerated vertices; h: evaluate the H-constraints")
    sp.add_argument("input", nargs="?", help="behavior JSON (default stdin)")
    sp.set_defaults(fn=cmd_member)

    sp = sub.add_parser("decompose", help="convex decomposition of a classical behavior")
    sp.add_argument("--trace", action="store_true", help="include the peel-step trace")
    sp.add_argument("input", nargs="?")
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("nbts-check", help="check NBTS equalities")
    sp.add_argument("--regime", default="indefinite")
    sp.add_argument("input", nargs="?")
    sp.set_defaults(fn=cmd_nbts_check)

    sp = sub.add_parser("classical-check", help="check the four-term classicality equalities")
    sp.add_argument("input", nargs="?")
    sp.set_defaults(fn=cmd_classical_check)

    sp = sub.add_parser("catalog", help="closed-form vertex families")
    poly_flags(sp, polytope_file=False)
    sp.add_argument("--family", choices=sorted(cat.FAMILIES))
    sp.add_argument("--complete", action="store_true", help="include split-seq for the sequential polytope")
    sp.set_defaults(fn=cmd_catalog)

    sp = sub.add_parser("table", help="dimensions and vertex counts of the six polytopes")
    sp.add_argument("--scenario")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_table)

    for name, fn, helptext in (("qstate-nbts", cmd_qstate_nbts, "single-party NBTS witness search"),
                               ("qstate-linear", cmd_qstate_linear, "linearity conditions")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--tol", type=float)
        sp.add_argument("input", nargs="?", help="tensor JSON (default stdin)")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("qstate-behavior", help="behavior of a two-time state under named strategies")
    sp.add_argument("--tol", type=float)
    sp.add_argument("--strategy", required=True, help="strategy JSON file")
    sp.add_argument("input", nargs="?", help="tensor JSON (default stdin)")
    sp.set_defaults(fn=cmd_qstate_behavior)

    sp = sub.add_parser("equality-count", help="independent classicality equalities beyond NBTS")
    sp.add_argument("--scenario")
    sp.set_defaults(fn=cmd_equality_count)
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "tol", None) is not None and args.tol <= 0:
        err.write("error: --tol must be positive\n")
        return 2
    try:
        return args.fn(args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except NBTSError as exc:
        err.write(_dump(exc.to_dict()) + "\n")
        return 1
    except (ValueError, KeyError, TypeError) as exc:
        err.write(_dump({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
