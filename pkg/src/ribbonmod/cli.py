"""Command-line surface.

Exit codes: 0 success, 2 usage/parse/validation error, 3 property failure.
The report is canonical JSON on stdout (sorted keys, rationals as "p/q" in
lowest terms); diagnostics and wall time go to stderr so that reports are
byte-identical across runs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import census, errors, metric as metricmod, stable as stablemod
from .collapse import (exceptional_sets, is_negligible, pseudosurface,
                       quotient_ribbon, semistable_core, stable_core)
from .core import (BOUNDARY, VERTEX, PointedRibbonGraph, automorphisms,
                   canonical_form, certificate, distinguished_points, dual,
                   genus, graph_from_obj, graph_to_obj, relabel)


def _frac_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _parse_frac(s) -> Fraction:
    return Fraction(s)


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _digest(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _load_graph(path) -> PointedRibbonGraph:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return graph_from_obj(obj)


def _load_metric(path, gp):
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict) or set(obj) - {"lengths"}:
        raise errors.RibbonError("metric file must be {'lengths': {...}}")
    out = {}
    for key, val in obj.get("lengths", {}).items():
        rep = int(key)
        if isinstance(val, dict):
            if set(val) - {"coeff", "power"}:
                raise errors.RibbonError(f"bad monomial for edge {key}")
            out[rep] = {int(val.get("power", 0)): _parse_frac(val["coeff"])}
        else:
            out[rep] = _parse_frac(val)
    return out


def _metric_obj(lengths):
    return {"lengths": {str(r): _frac_str(v) for r, v in sorted(lengths.items())}}


def _edge_indices(arg, gp):
    """--edges takes edge indices k; in a standard file edge k is {2k, 2k+1}."""
    reps = sorted(gp.graph.edge_reps())
    out = set()
    for part in arg.split(","):
        part = part.strip()
        if not part:
            continue
        k = int(part)
        if not 0 <= k < len(reps):
            raise errors.RibbonError(f"edge index {k} out of range (m={len(reps)})")
        out.add(reps[k])
    return frozenset(out)


def _edge_index_list(reps, gp):
    order = sorted(gp.graph.edge_reps())
    return sorted(order.index(r) for r in reps)


def _analysis(gp: PointedRibbonGraph):
    g = gp.graph
    out = {
        "certificate": repr(certificate(gp)),
        "half_edges": len(g.labels),
        "edges": len(g.edges),
        "vertices": len(g.vertices),
        "faces": len(g.faces),
        "components": len(g.components()),
        "distinguished": len(distinguished_points(g)),
        "pointing_labels": sorted(gp.pointing),
        "Q": sorted(gp.Q),
    }
    if g.connected:
        out["genus"] = genus(g)
        out["aut_order"] = automorphisms(gp)[0]
        _, rank, fiber = metricmod.cell_lambda_map(gp)
        out["lambda_rank"] = rank
        out["lambda_fiber_dim"] = fiber
    return out


def _cmd_analyze(args):
    gp = _load_graph(args.graph)
    return 0, {"result": _analysis(gp)}, None


def _cmd_dual(args):
    gp = _load_graph(args.graph)
    g = gp.graph
    dg = dual(g)
    pointing = {}
    for p, (kind, rep) in gp.pointing.items():
        if kind == BOUNDARY:
            # boundary cycles of g are the vertices of the dual (same orbits)
            pointing[p] = (VERTEX, rep)
        else:
            orbit = g.vertex_of(rep)
            pointing[p] = (BOUNDARY, min(g.s1[x] for x in orbit))
    dgp = PointedRibbonGraph(dg, pointing)
    obj = graph_to_obj(dgp)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(_canonical_json(obj))
    return 0, {"result": {"dual": obj, "analysis": _analysis(dgp)}}, None


def _cmd_collapse(args):
    gp = _load_graph(args.graph)
    Z = _edge_indices(args.edges, gp)
    quotient = quotient_ribbon(gp, Z)
    exc = exceptional_sets(gp, Z)
    ps = pseudosurface(gp, Z)
    obj = graph_to_obj(quotient)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(_canonical_json(obj))
    report = {
        "negligible": is_negligible(gp, Z),
        "semistable_core": _edge_index_list(semistable_core(gp, Z).edges, gp),
        "stable_core": _edge_index_list(stable_core(gp, Z).edges, gp),
        "exceptional": {
            "vertices": sorted(exc.pairs),
            "cycles": [list(t) for t in exc.exceptional_faces],
            "pairs": {str(v): list(t) for v, t in sorted(exc.pairs.items())},
        },
        "epsilon": list(ps.epsilon),
        "classes": [sorted(c) for c in ps.classes],
        "quotient": obj,
    }
    return 0, {"result": report}, None


def _sequence_arg(arg, gp):
    levels = [frozenset(gp.graph.edge_reps())]
    for part in arg.split(";"):
        part = part.strip()
        if part:
            levels.append(_edge_indices(part, gp))
    return levels


def _cmd_stabilize(args):
    gp = _load_graph(args.graph)
    levels = _sequence_arg(args.sequence, gp) if args.sequence else [frozenset(gp.graph.edge_reps())]
    s = stablemod.stabilize_sequence(gp, levels)
    cf = canonical_form(s.pointed)
    std = relabel(s.pointed, cf.relabeling)
    g = s.graph
    comps_std = std.graph.components()

    def move(point):
        kind, rep = point
        orbit = g.vertex_of(rep) if kind == VERTEX else g.face_of(rep)
        new = min(cf.relabeling[x] for x in orbit)
        ci = next(i for i, c in enumerate(comps_std) if new in c)
        return {"comp": ci, "kind": kind, "rep": new}

    iota_pairs = sorted({frozenset((a, b)) for a, b in s.iota.items()},
                        key=lambda p: sorted(p))
    iota_block = [[move(a), move(b)] for a, b in (sorted(p) for p in iota_pairs)]
    obj = graph_to_obj(std)
    obj["iota"] = iota_block
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(_canonical_json(obj))
    orders = stablemod.component_orders(s)
    report = {
        "graph": obj,
        "components": len(comps_std),
        "orders": [orders[i] for i in sorted(orders)],
        "glued_genus": stablemod.glued_genus(s),
    }
    return 0, {"result": report}, None


def _cmd_metric(args):
    gp = _load_graph(args.graph)
    lengths = _load_metric(args.metric, gp)
    if any(isinstance(v, dict) for v in lengths.values()):
        raise errors.RibbonError("symbolic metrics are only used by the library API")
    result = {}
    if args.sequence and args.t:
        levels = _sequence_arg(args.sequence, gp)
        out = metricmod.degenerate(gp, lengths, levels, _parse_frac(args.t))
        result["degenerate"] = _metric_obj(out)
    elif args.edges:
        pm = metricmod.project(gp, lengths, _edge_indices(args.edges, gp))
        result["projection"] = _metric_obj(pm.lengths)
        result["bar_chains"] = {str(r): sorted(ch) for r, ch in sorted(pm.chains.items())}
    else:
        uni = metricmod.unital(gp, lengths)
        result["unital"] = _metric_obj(uni)
        if gp.graph.connected:
            lam = metricmod.lambda_point(gp, uni)
            result["lambda"] = {p: _frac_str(v) for p, v in sorted(lam.items())}
    return 0, {"result": result}, None


def _cmd_enumerate(args):
    cx = census.build_complex(args.genus, args.points)
    classes = [info.graph for _, info in sorted(cx.cells.items())]
    result = {
        "count": len(classes),
        "dimension_histogram": {str(d): c for d, c in cx.dimension_histogram().items()},
        "classes": [graph_to_obj(gp) for gp in classes],
    }
    if args.complex:
        certs = sorted(cx.cells)
        index = {c: i for i, c in enumerate(certs)}
        result["cells"] = [
            {"dim": cx.cells[c].dim, "aut_order": cx.cells[c].aut_order,
             "lambda_rank": cx.cells[c].lambda_rank,
             "Q": sorted(cx.cells[c].Q)} for c in certs]
        result["faces"] = {
            str(index[c]): {str(index[cc]): m for cc, m in sorted(
                ((cc, m) for cc, m in cx.faces[c].items()), key=lambda t: index[t[0]])}
            for c in certs if cx.faces.get(c)}
    if args.report == "dims":
        rep = census.verify_dimensions(args.genus, args.points, cx)
        result["report"] = _jsonable(rep)
    elif args.report == "euler":
        if args.points != 1:
            raise errors.RibbonError("the euler report needs --points 1")
        value = census.orbifold_euler(args.genus)
        result["report"] = {"orbifold_euler": _frac_str(value)}
    if args.out:
        import os
        os.makedirs(args.out, exist_ok=True)
        for i, gp in enumerate(classes):
            with open(os.path.join(args.out, f"cell_{i:04d}.json"), "w", encoding="utf-8") as fh:
                fh.write(_canonical_json(graph_to_obj(gp)))
    return 0, {"result": result}, None


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return _frac_str(obj)
    if isinstance(obj, frozenset):
        return sorted(obj)
    return obj


def _cmd_verify(args):
    if args.suite == "dims":
        rep = census.verify_dimensions(args.genus, args.points)
        ok = (rep["max_dim_full_ok"] and rep["max_fiber_ok"]
              and rep["chain_ok"] and rep["per_stratum_bound_ok"])
        return (0 if ok else 3), {"result": _jsonable(rep), "pass": ok}, None
    if args.suite == "euler":
        if args.points != 1:
            raise errors.RibbonError("the euler suite needs --points 1")
        value = census.orbifold_euler(args.genus)
        expected = census.harer_zagier_euler(args.genus)
        ok = value == expected
        rep = {"orbifold_euler": _frac_str(value), "closed_form": _frac_str(expected)}
        return (0 if ok else 3), {"result": rep, "pass": ok}, None
    if args.suite == "farey":
        if (args.genus, args.points) != (1, 1):
            raise errors.RibbonError("the farey suite runs at --genus 1 --points 1")
        from .core import from_permutations, attach_pointing
        g = from_permutations(range(4), [[0, 2, 1, 3]], [[0, 1], [2, 3]])
        gp = attach_pointing(g, {"p0": (BOUNDARY, 0)})
        res = census.resolutions(gp, 0)
        cx = census.build_complex(1, 1)
        mults = sorted(m for arrows in cx.faces.values() for m in arrows.values())
        ok = len(res) == 2 and mults == [3]
        rep = {"vertex_resolutions": len(res), "face_multiplicities": mults}
        return (0 if ok else 3), {"result": rep, "pass": ok}, None
    raise errors.RibbonError(f"unknown suite {args.suite!r}")


def _build_parser():
    ap = argparse.ArgumentParser(prog="ribbon", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="validate a graph file and report invariants")
    p.add_argument("graph")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("dual", help="emit the dual graph")
    p.add_argument("graph")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_dual)

    p = sub.add_parser("collapse", help="collapse an edge set and report its cores")
    p.add_argument("graph")
    p.add_argument("--edges", required=True, help="comma separated edge indices")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_collapse)

    p = sub.add_parser("stabilize", help="stable ribbon graph of a permissible sequence")
    p.add_argument("graph")
    p.add_argument("--sequence", help="semicolon separated levels of edge indices")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_stabilize)

    p = sub.add_parser("metric", help="lambda, degeneration schedules, projections")
    p.add_argument("graph")
    p.add_argument("--metric", required=True)
    p.add_argument("--sequence")
    p.add_argument("--t")
    p.add_argument("--edges")
    p.set_defaults(func=_cmd_metric)

    p = sub.add_parser("enumerate", help="enumerate pointed classes of a (g, n)")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--complex", action="store_true")
    p.add_argument("--report", choices=["dims", "euler"])
    p.add_argument("--out")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("verify", help="run a verification suite (exit 3 on failure)")
    p.add_argument("--suite", choices=["dims", "euler", "farey"], required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--points", type=int, required=True)
    p.set_defaults(func=_cmd_verify)
    return ap


def run(argv) -> int:
    ap = _build_parser()
    start = time.monotonic()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    report = {"command": ["ribbon"] + list(argv)}
    inputs = {}
    for attr in ("graph", "metric"):
        path = getattr(args, attr, None)
        if path:
            try:
                inputs[path] = _digest(path)
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2
    report["inputs"] = inputs
    try:
        code, payload, _ = args.func(args)
    except errors.RibbonError as exc:
        print(f"{exc.name}: {exc}", file=sys.stderr)
        return 2
    except (json.JSONDecodeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.update(payload)
    sys.stdout.write(_canonical_json(_jsonable(report)))
    print(f"wall-time: {time.monotonic() - start:.3f}s", file=sys.stderr)
    return code


def main():
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
