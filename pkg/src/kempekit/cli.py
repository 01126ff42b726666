"""Command-line interface.

Exit codes: 0 the property holds, 1 it fails, 2 bad input, 3 over the
enumeration cap.  JSON output is written with sorted keys so identical
inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys

from .coloring import DEFAULT_CAP, CapExceeded, ColoringError, Coloring, default_cap, is_proper, load_coloring
from .critical_pipeline import PipelineError, build_g_star, catalog, check_g_star, verify_theorem
from .fisk import FiskError, fisk_trace
from .graph_core import GraphError, PlaneGraph, load_graph
from .kempe import Certificate, find_path, kempe_classes, verify_certificate

OK, FAIL, INPUT, CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _graph(args):
    if args.graph is None:
        raise InputError("--graph is required")
    return load_graph(args.graph, args.format)


def _plane(args) -> PlaneGraph:
    G = _graph(args)
    if not isinstance(G, PlaneGraph):
        raise InputError("this subcommand needs an embedded graph (rotation format)")
    return G


def _cap(args) -> int:
    if args.cap is None:
        return default_cap()
    if args.cap > DEFAULT_CAP:
        print(f"warning: cap {args.cap} above {DEFAULT_CAP}; the number of colorings grows "
              "exponentially with the vertex count", file=sys.stderr)
    return args.cap


def _coloring(path, G, k) -> Coloring:
    c = load_coloring(path, k)
    if len(c) != G.n:
        raise InputError(f"{path}: {len(c)} colors for {G.n} vertices")
    if not is_proper(G, c, k):
        raise InputError(f"{path}: coloring is not proper")
    return c


def _restriction(args, G):
    if args.restrict is None:
        if args.forbid is not None:
            raise InputError("--forbid needs --restrict")
        return None, None
    if args.restrict == "all":
        S = range(G.n)
    else:
        try:
            S = [int(x) for x in args.restrict.split(",") if x.strip()]
        except ValueError:
            raise InputError(f"bad --restrict value {args.restrict!r}") from None
        if any(not 0 <= x < G.n for x in S):
            raise InputError("--restrict lists a vertex outside the graph")
    return frozenset(S), (4 if args.forbid is None else args.forbid)


def cmd_classes(args) -> int:
    G = _graph(args)
    rep = kempe_classes(G, args.k, _cap(args))
    if args.json:
        _emit(args, _dump({"k": args.k, "colorings": rep.total, "classes": rep.count, "sizes": rep.sizes,
                           "witnesses": [list(w) for w in rep.witnesses]}))
    else:
        _emit(args, f"colorings={rep.total} classes={rep.count}\n")
    return OK if rep.count <= 1 else FAIL


def cmd_path(args) -> int:
    G = _graph(args)
    c1 = _coloring(args.start, G, args.k)
    c2 = _coloring(args.end, G, args.k)
    S, forbid = _restriction(args, G)
    cert = find_path(G, c1, c2, args.k, restricted=S, forbidden=forbid, cap=_cap(args))
    if cert is None:
        print("no Kempe path between the colorings", file=sys.stderr)
        return FAIL
    _emit(args, cert.to_json())
    return OK


def cmd_fisk(args) -> int:
    G = _plane(args)
    f = _coloring(args.coloring, G, 4)
    cert, log = fisk_trace(G, f)
    _emit(args, _dump({"certificate": cert.to_dict(), "steps": [s.to_dict() for s in log]}))
    if not args.json:
        for i, s in enumerate(log):
            print(f"step {i}: {s.kind} nonsingular {s.nonsingular_before} -> {s.nonsingular_after}",
                  file=sys.stderr)
    return OK


def _load_cert(path) -> Certificate:
    try:
        with open(path) as fh:
            doc = json.load(fh)
        if "certificate" in doc:
            doc = doc["certificate"]
        return Certificate.from_dict(doc)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a certificate ({exc})") from None


def cmd_check_cert(args) -> int:
    G = _graph(args)
    cert = _load_cert(args.cert)
    v = verify_certificate(G, cert)
    if args.json:
        sys.stdout.write(_dump({"valid": v.ok, "index": v.index, "reason": v.reason, "moves": len(cert)}))
    elif v:
        print(f"valid: {len(cert)} moves")
    else:
        print(f"invalid at move {v.index}: {v.reason}")
    return OK if v else FAIL


def cmd_verify_theorem(args) -> int:
    if args.catalog:
        graphs = catalog()
        if args.catalog not in graphs:
            raise InputError(f"unknown catalog graph {args.catalog!r}; choose from {', '.join(graphs)}")
        G = graphs[args.catalog]
    else:
        G = _graph(args)
    rep = verify_theorem(G, cap=_cap(args), constructive=not args.no_constructive)
    if not args.timing:
        rep.pop("elapsed")
    _emit(args, _dump(rep))
    return OK if rep["ok"] else FAIL


def cmd_gstar(args) -> int:
    G = _plane(args)
    c1 = _coloring(args.c1, G, 4)
    c2 = _coloring(args.c2, G, 4)
    res = build_g_star(G, args.vertex, c1, c2)
    bad = check_g_star(res)
    doc = res.to_dict()
    doc["violations"] = bad
    _emit(args, _dump(doc))
    return OK if not bad else FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kempe", description="Kempe equivalence of graph colorings.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph file (rotation format, or graph6 with .g6)")
    common.add_argument("--format", choices=["rotation", "graph6"], help="override format detection")
    common.add_argument("--k", type=int, default=4, help="number of colors (default 4)")
    common.add_argument("--cap", type=int, help=f"vertex cap for enumeration (default {DEFAULT_CAP} or KEMPE_CAP)")
    common.add_argument("--out", help="write the main output here instead of stdout")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is sequential")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classes", parents=[common], help="count colorings and Kempe classes")
    s.set_defaults(func=cmd_classes)

    s = sub.add_parser("path", parents=[common], help="shortest Kempe path between two colorings")
    s.add_argument("--start", required=True)
    s.add_argument("--end", required=True)
    s.add_argument("--restrict", help="'all' or comma-separated vertices never recolored to --forbid")
    s.add_argument("--forbid", type=int, help="forbidden color for restricted vertices (default 4)")
    s.set_defaults(func=cmd_path)

    s = sub.add_parser("fisk", parents=[common], help="reduce a 4-coloring of a 3-colorable triangulation")
    s.add_argument("--coloring", required=True)
    s.set_defaults(func=cmd_fisk)

    s = sub.add_parser("check-cert", parents=[common], help="replay a certificate")
    s.add_argument("--cert", required=True)
    s.set_defaults(func=cmd_check_cert)

    s = sub.add_parser("verify-theorem", parents=[common], help="check Kc(G, 4) = 1 with structural checks")
    s.add_argument("--catalog", help="use a built-in graph: K4, W5, W7, W9, moser")
    s.add_argument("--timing", action="store_true", help="include elapsed seconds in the report")
    s.add_argument("--no-constructive", action="store_true", help="skip the constructive certificate check")
    s.set_defaults(func=cmd_verify_theorem)

    s = sub.add_parser("gstar", parents=[common], help="build G* around a degree-4 vertex")
    s.add_argument("--vertex", type=int, required=True)
    s.add_argument("--c1", required=True, help="coloring file")
    s.add_argument("--c2", required=True, help="coloring file")
    s.set_defaults(func=cmd_gstar)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT if exc.code else OK
    if not 2 <= args.k <= 8:
        print("error: --k must be between 2 and 8", file=sys.stderr)
        return INPUT
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CAP
    except (InputError, GraphError, ColoringError, OSError, FiskError, PipelineError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT


if __name__ == "__main__":
    sys.exit(main())
