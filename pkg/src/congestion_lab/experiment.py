"""Declarative congestion sweeps with CSV, JSON and SVG outputs.

Config files are flat ``key = value`` text, one pair per line, ``#`` starts a
comment. Lists are comma separated. Recognised keys::

    name        run label
    family      one of generators.FAMILIES
    k p q dim r fixed generator parameters (dim is the grid dimension)
    sweep       strictly increasing values of the family's swept parameter
                (radius n; side L for grid/bridged_grids; size N for random_regular)
    weighted    true/false, route on edge lengths instead of hops
    scheme      uniform | bounded_random | sphere_geometric | sphere_calibrated
    c beta lo hi scheme_seed   scheme parameters
    seed        base seed (randomized families and bounded_random)
    replicates  instances per sweep value (randomized families only)
    delta       true/false, add the four-point delta column (N <= 400)
    budget      max N*E per instance, default 1e10
    workers     row pool width (CONGESTION_LAB_THREADS overrides)
    csv json svg   output paths; json and svg are optional
    overlays    reference slopes drawn on the plot
"""

from __future__ import annotations

import csv
import json
import math
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import analysis
from .generators import FAMILIES, GeneratorError, GeneratorSpec
from .graph import DisconnectedGraphError, Graph, degree_stats, diameter, is_connected
from .load import geodesic_load
from .remetrize import WeightScheme, apply_weights

SWEPT = {
    "regular_tree": "n",
    "hpq": "n",
    "sphere_wired": "n",
    "tree_cross_z": "n",
    "grid": "L",
    "bridged_grids": "L",
    "random_regular": "N",
}
RANDOMIZED = {"sphere_wired", "random_regular"}
FIXED_KEYS = {"k": "k", "p": "p", "q": "q", "dim": "q_dim", "r": "r"}

COLUMNS = [
    "family",
    "params",
    "replicate",
    "N",
    "edge_count",
    "diameter",
    "max_load",
    "argmax_layer",
    "theorem1_bound",
    "lemma_bound",
    "wedge_bound",
    "delta",
    "violations",
    "status",
]


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    name: str
    family: str
    params: dict
    sweep: list
    weighted: bool = False
    scheme: WeightScheme | None = None
    seed: int = 0
    replicates: int = 1
    delta: bool = False
    budget: float = 1e10
    workers: int = 1
    csv: str = "results.csv"
    json: str | None = None
    svg: str | None = None
    overlays: list = field(default_factory=list)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}")
        if not self.sweep:
            raise ConfigError("sweep must list at least one value")
        if any(b <= a for a, b in zip(self.sweep, self.sweep[1:])):
            raise ConfigError("sweep values must be strictly increasing")
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if self.family not in RANDOMIZED and self.replicates != 1:
            raise ConfigError(f"family {self.family} is deterministic; replicates must be 1")

    @property
    def routes_on_lengths(self) -> bool:
        return self.weighted or self.scheme is not None


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _num(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_config(text: str) -> ExperimentConfig:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (x.strip() for x in line.split("=", 1))
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    try:
        family = raw.pop("family")
    except KeyError:
        raise ConfigError("config needs a 'family'") from None
    params = {FIXED_KEYS[k]: int(raw.pop(k)) for k in list(raw) if k in FIXED_KEYS}
    scheme = None
    scheme_params = {k: _num(raw.pop(k)) for k in ("c", "beta", "lo", "hi", "scheme_seed") if k in raw}
    seed = int(raw.pop("seed", 0))
    if "scheme" in raw:
        kind = raw.pop("scheme")
        if kind == "bounded_random":
            scheme_params["seed"] = scheme_params.pop("scheme_seed", seed)
        else:
            scheme_params.pop("scheme_seed", None)
        try:
            scheme = WeightScheme(kind, scheme_params)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    elif scheme_params:
        raise ConfigError("scheme parameters given without 'scheme'")
    kwargs = dict(
        name=raw.pop("name", family),
        family=family,
        params=params,
        sweep=[int(x) for x in raw.pop("sweep", "").split(",") if x.strip()],
        weighted=_bool(raw.pop("weighted", "false")),
        scheme=scheme,
        seed=seed,
        replicates=int(raw.pop("replicates", 1)),
        delta=_bool(raw.pop("delta", "false")),
        budget=float(raw.pop("budget", 1e10)),
        workers=int(raw.pop("workers", 1)),
        csv=raw.pop("csv", "results.csv"),
        json=raw.pop("json", None),
        svg=raw.pop("svg", None),
        overlays=[float(x) for x in raw.pop("overlays", "").split(",") if x.strip()],
    )
    if raw:
        raise ConfigError(f"unknown keys: {sorted(raw)}")
    return ExperimentConfig(**kwargs)


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def _replicate_seed(base: int, value: int, replicate: int) -> int:
    ss = np.random.SeedSequence([int(base), int(value), int(replicate)])
    return int(ss.generate_state(1, np.uint64)[0])


def _params_label(params: dict) -> str:
    return ";".join(f"{k}={v}" for k, v in sorted(params.items()))


def _run_instance(config: ExperimentConfig, value: int, replicate: int) -> dict:
    params = dict(config.params)
    params[SWEPT[config.family]] = value
    row = {c: None for c in COLUMNS}
    row.update(family=config.family, params=_params_label(params), replicate=replicate, violations=0)
    started = time.perf_counter()
    seed = _replicate_seed(config.seed, value, replicate) if config.family in RANDOMIZED else None
    try:
        graph = GeneratorSpec(config.family, params, seed).build()
    except GeneratorError as exc:
        row["status"] = f"error: {exc}"
        return row
    row.update(N=graph.n, edge_count=graph.edge_count)
    if graph.n * graph.edge_count > config.budget:
        row["status"] = "skipped: budget"
        return row
    if not is_connected(graph):
        row["status"] = "error: disconnected"
        return row
    if config.scheme is not None:
        graph = apply_weights(graph, config.scheme)
    profile = geodesic_load(graph, weighted=config.routes_on_lengths)
    hop_diam = diameter(graph)
    _, dmax, _ = degree_stats(graph)
    row.update(
        diameter=hop_diam,
        max_load=profile.max_load,
        argmax_layer=graph.layer[profile.argmax] if graph.layer is not None else None,
    )
    violations = 0
    if not config.routes_on_lengths:
        # the degree-diameter ceiling assumes hop geodesics
        row["lemma_bound"] = analysis.lemma_upper_bound(dmax, hop_diam)
        violations += profile.max_load > row["lemma_bound"]
    if graph.rotation is not None and graph.n > 1:
        cert = analysis.wedge_cut(graph)
        row.update(theorem1_bound=cert.theorem_bound, wedge_bound=cert.bound)
        violations += profile.max_load < cert.theorem_bound
        violations += profile.max_load < cert.bound
        violations += len(cert.check())
    if config.delta and graph.n <= analysis.DELTA_CAP:
        row["delta"] = analysis.delta_hyperbolicity(graph, weighted=config.routes_on_lengths)
    row["violations"] = int(violations)
    row["status"] = "ok"
    row["wall_time"] = time.perf_counter() - started
    return row


def _median_row(config: ExperimentConfig, rows: list) -> dict | None:
    ok = [r for r in rows if r["status"] == "ok"]
    if not ok:
        return None
    med = {c: None for c in COLUMNS}
    med.update(family=config.family, params=ok[0]["params"], replicate="median", status="ok")
    for col in ("N", "edge_count", "diameter", "max_load"):
        med[col] = statistics.median(r[col] for r in ok)
    med["violations"] = sum(r["violations"] for r in ok)
    return med


def format_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if float(x).is_integer() and abs(x) < 1e15:
            return str(int(x))
        return f"{x:.9g}"
    return str(x)


def pool_width(config: ExperimentConfig) -> int:
    env = os.environ.get("CONGESTION_LAB_THREADS")
    return max(1, int(env)) if env else max(1, config.workers)


def run_experiment(config: ExperimentConfig) -> list:
    """Run every (sweep value, replicate); rows are appended to the CSV in sweep order."""
    tasks = [(v, rep) for v in config.sweep for rep in range(config.replicates)]
    out_rows = []
    Path(config.csv).parent.mkdir(parents=True, exist_ok=True)
    with open(config.csv, "w", newline="", encoding="utf-8") as fh, ThreadPoolExecutor(pool_width(config)) as pool:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        fh.flush()
        pending = []
        results = pool.map(lambda t: _run_instance(config, *t), tasks)
        for (value, rep), row in zip(tasks, results):
            writer.writerow([format_cell(row[c]) for c in COLUMNS])
            fh.flush()
            out_rows.append(row)
            pending.append(row)
            if config.replicates > 1 and rep == config.replicates - 1:
                med = _median_row(config, pending)
                if med is not None:
                    writer.writerow([format_cell(med[c]) for c in COLUMNS])
                    fh.flush()
                    out_rows.append(med)
                pending = []
    if config.json:
        doc = {
            "name": config.name,
            "config": {**asdict(config), "scheme": asdict(config.scheme) if config.scheme else None},
            "rows": [{k: _jsonable(v) for k, v in r.items()} for r in out_rows],
        }
        Path(config.json).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    if config.svg:
        emit_plot(config.csv, config.svg, config.overlays)
    return out_rows


def _jsonable(x):
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _read_points(csv_path, x: str, y: str) -> list:
    with open(csv_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{csv_path} has no data rows")
    for col in (x, y):
        if col not in rows[0]:
            raise KeyError(f"column {col!r} not in {csv_path}")
    ok = [r for r in rows if r.get("status", "ok") == "ok" and r[x] and r[y]]
    if any(r.get("replicate") == "median" for r in ok):
        ok = [r for r in ok if r["replicate"] == "median"]
    return [(float(r[x]), float(r[y])) for r in ok]


def fit_from_csv(csv_path, x: str = "N", y: str = "max_load") -> analysis.ScalingFit:
    """Log-log fit of two CSV columns (median rows only when replicates exist)."""
    return analysis.fit_scaling(_read_points(csv_path, x, y))


def emit_plot(csv_path, svg_path, overlays=()) -> None:
    """Log-log scatter of max load against N with fitted and reference slopes."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    pts = _read_points(csv_path, "N", "max_load")
    if not pts:
        raise ValueError(f"{csv_path} has no usable points")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    with matplotlib.rc_context({"svg.hashsalt": "congestion-lab", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.loglog(xs, ys, "o", color="black", label="max load")
        if len(pts) >= 2:
            fit = analysis.fit_scaling(pts)
            grid = np.geomspace(xs.min(), xs.max(), 50)
            ax.loglog(grid, np.exp(fit.intercept) * grid**fit.slope, "-", color="tab:blue", label=f"fit slope = {fit.slope:.3f}")
        for s in overlays:
            grid = np.geomspace(xs.min(), xs.max(), 50)
            ax.loglog(grid, ys[0] * (grid / xs[0]) ** s, "--", linewidth=0.8, label=f"slope {s:g}")
        ax.set_xlabel("N")
        ax.set_ylabel("max load")
        ax.legend(loc="upper left", fontsize=8)
        fig.tight_layout()
        Path(svg_path).parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(svg_path, format="svg", metadata={"Date": None})
        plt.close(fig)
