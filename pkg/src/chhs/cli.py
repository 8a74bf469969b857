"""Command-line driver.

Commands: inspect, verify-chhs, verify-thm-a, build-w, projections,
constants, distance-formula, realize, gen <kind>, check-action.
Exit codes: 0 = pass/success, 1 = verdict FAIL (report carries witnesses),
2 = input error.  Instances are read from --input (or stdin) and reports
written to --output (or stdout) as json or text.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import documents, metric
from .documents import (
    Instance,
    emit_instance,
    parse_instance,
    report_document,
    to_json,
    to_text,
)
from .errors import ChhsError, InputError, InternalConsistencyError
from .generators import gen_library
from .projections import (
    distance_formula_fit,
    hhs_constants,
    projection_table,
    realize_tuple,
)
from .relations import relation_table
from .verify import (
    build_w_from_link_edges,
    check_action,
    check_thmA_conditions,
    verify_chhs,
)

GEN_KINDS = ("path", "cycle", "octahedron", "random_flag", "join")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="instance document path (default: stdin)")
    common.add_argument("--output", help="report path (default: stdout)")
    common.add_argument("--format", choices=("text", "json"), default="json")
    common.add_argument("--delta-cap", type=int, default=None,
                        help="vertex cap for the hyperbolicity kernel")
    common.add_argument("--vertex-cap", type=int, default=None,
                        help="maximum accepted instance vertex count")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--thresholds", default="2,3,4",
                        help="comma list of distance-formula thresholds")
    common.add_argument("--kappa-grid", default=None,
                        help="comma list of uniqueness-table kappa values")
    common.add_argument("--diagnostics", action="store_true",
                        help="include per-class complement diagnostics")
    p = argparse.ArgumentParser(
        prog="chhs",
        description="combinatorial hierarchical hyperbolicity toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("inspect", "verify-chhs", "verify-thm-a", "build-w",
                 "projections", "constants", "distance-formula", "realize",
                 "check-action"):
        sub.add_parser(name, parents=[common])
    g = sub.add_parser("gen", parents=[common])
    g.add_argument("kind", choices=GEN_KINDS)
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--k", type=int, default=None)
    g.add_argument("--p", type=float, default=None)
    g.add_argument("--w-rule", default="none",
                   choices=("none", "complete", "shared_codim1_face"))
    g.add_argument("--parts", default=None,
                   help='join parts as discrete vertex groups: "a,b|c,d"')
    return p


def _read_instance(args) -> Instance:
    if args.input:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    return parse_instance(text, vertex_cap=args.vertex_cap)


def _write(args, doc) -> None:
    text = to_json(doc) if args.format == "json" else to_text(doc) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _int_list(raw):
    return tuple(int(t) for t in raw.split(",") if t.strip() != "")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.delta_cap is not None:
        metric.DELTA_VERTEX_CAP = args.delta_cap
    try:
        return _dispatch(args)
    except InternalConsistencyError:
        raise
    except (InputError, ChhsError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "gen":
        return _cmd_gen(args)
    inst = _read_instance(args)
    x, w = inst.complex, inst.xgraph

    if cmd == "inspect":
        table = relation_table(x)
        n, dim = x.complexity
        body = {
            "vertices": len(x.labels),
            "edges": len(x.edge_labels()),
            "maximal_simplices": list(w.vertex_keys()),
            "w_edges": len(w.w_edges),
            "complexity": n,
            "dimension": dim,
            "classes": [
                {"key": c.key, "link": "|".join(c.link),
                 "saturation": "|".join(c.saturation),
                 "colevel": table.colevel(c)}
                for c in table.classes_with_colevel()
            ],
        }
        _write(args, report_document("inspect", body))
        return 0

    if cmd == "verify-chhs":
        report = verify_chhs(x, w, diagnostics=args.diagnostics)
        _write(args, report_document("verify-chhs", report))
        return 0 if report.passed else 1

    if cmd == "verify-thm-a":
        report = check_thmA_conditions(x, inst.link_edges, inst.action)
        _write(args, report_document("verify-thm-a", report))
        return 0 if report.passed else 1

    if cmd == "build-w":
        if inst.link_edges is None:
            raise InputError('build-w needs a "link_edges" section')
        new_w = build_w_from_link_edges(x, inst.link_edges, inst.action)
        out = emit_instance(Instance(x, new_w, inst.action, inst.link_edges))
        _write(args, out)
        return 0

    if cmd == "projections":
        table = projection_table(x, w)
        _write(args, report_document("projections", table))
        return 0

    if cmd == "constants":
        grid = _int_list(args.kappa_grid) if args.kappa_grid else None
        consts = hhs_constants(x, w, kappa_grid=grid,
                               thresholds=_int_list(args.thresholds))
        _write(args, report_document("constants", consts))
        return 0

    if cmd == "distance-formula":
        fit = distance_formula_fit(x, w, _int_list(args.thresholds))
        body = [{"s": s, "K": k, "C": c} for s, k, c in fit]
        _write(args, report_document("distance-formula", body))
        return 0

    if cmd == "realize":
        if inst.tuple_coords is None:
            raise InputError('realize needs a "tuple" section')
        w_key, theta, kappa = realize_tuple(x, w, inst.tuple_coords)
        body = {"w_vertex": w_key, "theta": theta, "measured_kappa": kappa}
        _write(args, report_document("realize", body))
        return 0

    if cmd == "check-action":
        if inst.action is None:
            raise InputError('check-action needs an "action" section')
        report = check_action(x, w, inst.action)
        _write(args, report_document("check-action", report))
        return 0 if report.passed else 1

    raise InputError(f"unknown command {cmd!r}")


def _cmd_gen(args) -> int:
    kind = args.kind
    params = {}
    if kind in ("path", "cycle", "random_flag"):
        if args.n is None:
            raise InputError(f"gen {kind} needs --n")
        params["n"] = args.n
    if kind == "octahedron":
        if args.k is None:
            raise InputError("gen octahedron needs --k")
        params["k"] = args.k
    if kind == "random_flag":
        if args.p is None:
            raise InputError("gen random_flag needs --p")
        params["p"] = args.p
        params["seed"] = args.seed
    if kind == "join":
        if not args.parts:
            raise InputError('gen join needs --parts "a,b|c,d"')
        groups = [[v for v in part.split(",") if v]
                  for part in args.parts.split("|")]
        params["parts"] = [(g, []) for g in groups]
    cx, w = gen_library(kind, w_rule=args.w_rule, **params)
    _write(args, emit_instance(Instance(cx, w)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
