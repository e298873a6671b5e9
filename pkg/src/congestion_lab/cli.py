"""Command line entry point: generate | load | analyze | remetrize | experiment | fit | plot."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from . import analysis, experiment
from .generators import FAMILIES, GeneratorSpec
from .graph import GraphError, degree_stats, diameter, load as load_graph, to_json
from .load import geodesic_load
from .remetrize import KINDS, WeightScheme, apply_weights


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=1, default=str) + "\n"


def cmd_generate(args) -> None:
    params = {}
    for name, key in (("k", "k"), ("p", "p"), ("q", "q"), ("dim", "q_dim"), ("side", "L"), ("r", "r"), ("size", "N"), ("radius", "n")):
        value = getattr(args, name)
        if value is not None:
            params[key] = value
    graph = GeneratorSpec(args.family, params, args.seed).build()
    _write(to_json(graph), args.out)


def cmd_load(args) -> None:
    graph = load_graph(args.graph)
    profile = geodesic_load(graph, weighted=args.weighted)
    _write(json.dumps(profile.to_dict()) + "\n", args.out)


def cmd_analyze(args) -> None:
    graph = load_graph(args.graph)
    report = {}
    if args.cert:
        report["certificate"] = analysis.wedge_cut(graph).to_dict()
    if args.delta:
        report["delta"] = analysis.delta_hyperbolicity(graph, weighted=args.weighted)
    if args.bounds:
        _, dmax, _ = degree_stats(graph)
        diam = diameter(graph)
        radius = max(graph.layer) if graph.layer is not None else None
        report["bounds"] = {
            "N": graph.n,
            "max_degree": dmax,
            "diameter": diam,
            "lemma_upper_bound": analysis.lemma_upper_bound(dmax, diam),
            "theorem1_bound": analysis.theorem1_bound(graph.n, radius) if radius else None,
        }
    if not report:
        raise SystemExit("analyze: pick at least one of --cert, --delta, --bounds")
    _write(_dump(report), args.out)


def cmd_remetrize(args) -> None:
    graph = load_graph(args.graph)
    params = {k: getattr(args, k) for k in ("c", "beta", "lo", "hi", "seed") if getattr(args, k) is not None}
    _write(to_json(apply_weights(graph, WeightScheme(args.scheme, params))), args.out)


def cmd_experiment(args) -> None:
    config = experiment.load_config(args.config)
    rows = experiment.run_experiment(config)
    bad = sum(r["violations"] or 0 for r in rows if r["replicate"] != "median")
    print(f"{config.name}: {len(rows)} rows -> {config.csv} (bound violations: {bad})")


def cmd_fit(args) -> None:
    fit = experiment.fit_from_csv(args.csv, args.x, args.y)
    _write(_dump(asdict(fit)), args.out)


def cmd_plot(args) -> None:
    experiment.emit_plot(args.csv, args.out, args.overlay or [])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="congestion-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a graph family instance")
    g.add_argument("--family", required=True, choices=FAMILIES)
    for name in ("k", "p", "q", "dim", "side", "r", "size", "radius"):
        g.add_argument(f"--{name}", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    l = sub.add_parser("load", help="geodesic load profile")
    l.add_argument("--graph", required=True)
    l.add_argument("--weighted", action="store_true")
    l.add_argument("--out")
    l.set_defaults(func=cmd_load)

    a = sub.add_parser("analyze", help="certificate, delta and closed-form bounds")
    a.add_argument("--graph", required=True)
    a.add_argument("--cert", action="store_true")
    a.add_argument("--delta", action="store_true")
    a.add_argument("--bounds", action="store_true")
    a.add_argument("--weighted", action="store_true")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("remetrize", help="apply an edge-length multiplier scheme")
    r.add_argument("--graph", required=True)
    r.add_argument("--scheme", required=True, choices=KINDS)
    for name in ("c", "beta", "lo", "hi"):
        r.add_argument(f"--{name}", type=float)
    r.add_argument("--seed", type=int)
    r.add_argument("--out")
    r.set_defaults(func=cmd_remetrize)

    e = sub.add_parser("experiment", help="run a sweep config file")
    e.add_argument("config")
    e.set_defaults(func=cmd_experiment)

    f = sub.add_parser("fit", help="log-log fit of two CSV columns")
    f.add_argument("csv")
    f.add_argument("--x", default="N")
    f.add_argument("--y", default="max_load")
    f.add_argument("--out")
    f.set_defaults(func=cmd_fit)

    p = sub.add_parser("plot", help="log-log SVG plot of a sweep CSV")
    p.add_argument("csv")
    p.add_argument("--out", required=True)
    p.add_argument("--overlay", type=float, action="append")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (GraphError, ValueError, KeyError) as exc:
        print(f"congestion-lab {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
