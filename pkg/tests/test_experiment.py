import csv
import json

import pytest

from congestion_lab import cli
from congestion_lab.experiment import (
    COLUMNS,
    ConfigError,
    emit_plot,
    fit_from_csv,
    format_cell,
    parse_config,
    run_experiment,
)
from congestion_lab.graph import from_json, load as load_graph


def write_config(tmp_path, body, name="run"):
    text = body + f"\ncsv = {tmp_path / name}.csv\njson = {tmp_path / name}.json\nsvg = {tmp_path / name}.svg\n"
    path = tmp_path / f"{name}.cfg"
    path.write_text(text)
    return path


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestConfig:
    def test_parse(self):
        cfg = parse_config(
            """
            # comment
            name = h
            family = hpq
            p = 3
            q = 7
            sweep = 2, 3
            scheme = bounded_random
            lo = 0.5
            hi = 2
            seed = 9
            """
        )
        assert cfg.params == {"p": 3, "q": 7}
        assert cfg.sweep == [2, 3]
        assert cfg.scheme.params == {"lo": 0.5, "hi": 2, "seed": 9}
        assert cfg.routes_on_lengths

    @pytest.mark.parametrize(
        "text",
        [
            "sweep = 1",
            "family = grid\nsweep = 3, 2",
            "family = grid\nsweep = 3\nreplicates = 2",
            "family = grid\nsweep = 3\nbogus = 1",
            "family = grid\nsweep = 3\nbeta = 0.5",
            "family = grid\nsweep = 3\nsweep = 4",
            "family = grid\nsweep",
            "family = grid\nsweep = 3\nweighted = maybe",
        ],
    )
    def test_errors(self, text):
        with pytest.raises(ConfigError):
            parse_config(text)


class TestRun:
    def test_grid_row_accounting(self, tmp_path):
        cfg = parse_config(write_config(tmp_path, "family = grid\ndim = 2\nsweep = 10, 20, 30").read_text())
        rows = run_experiment(cfg)
        assert [r["N"] for r in rows] == [100, 400, 900]
        written = read_rows(cfg.csv)
        assert list(written[0]) == COLUMNS
        assert [int(r["N"]) for r in written] == [100, 400, 900]
        assert all(r["violations"] == "0" for r in written)

    def test_hpq_has_wedge_bound_and_no_violations(self, tmp_path):
        cfg = parse_config(write_config(tmp_path, "family = hpq\np = 3\nq = 7\nsweep = 3, 4, 5\ndelta = true").read_text())
        rows = run_experiment(cfg)
        assert all(r["wedge_bound"] is not None and r["violations"] == 0 for r in rows)
        assert rows[0]["delta"] == 1.0
        doc = json.loads(open(cfg.json).read())
        assert all(r["wall_time"] > 0 for r in doc["rows"])

    def test_replicates_and_medians_are_deterministic(self, tmp_path):
        body = "family = random_regular\nr = 3\nsweep = 20, 40\nreplicates = 5\nseed = 11"
        a = parse_config(write_config(tmp_path, body, "a").read_text())
        b = parse_config(write_config(tmp_path, body, "b").read_text())
        run_experiment(a)
        run_experiment(b)
        assert open(a.csv, "rb").read() == open(b.csv, "rb").read()
        assert open(a.svg, "rb").read() == open(b.svg, "rb").read()
        rows = read_rows(a.csv)
        assert [r["replicate"] for r in rows] == ["0", "1", "2", "3", "4", "median"] * 2

    def test_budget_skip(self, tmp_path):
        cfg = parse_config(write_config(tmp_path, "family = grid\ndim = 2\nsweep = 5, 40\nbudget = 1e5").read_text())
        rows = run_experiment(cfg)
        assert rows[0]["status"] == "ok" and rows[1]["status"] == "skipped: budget"

    def test_weighted_scheme_row(self, tmp_path):
        body = "family = hpq\np = 3\nq = 7\nsweep = 3\nscheme = sphere_calibrated\nc = 1"
        rows = run_experiment(parse_config(write_config(tmp_path, body).read_text()))
        assert rows[0]["lemma_bound"] is None and rows[0]["status"] == "ok"

    def test_pool_width_does_not_change_output(self, tmp_path, monkeypatch):
        body = "family = grid\ndim = 2\nsweep = 4, 6, 8, 10"
        a = parse_config(write_config(tmp_path, body, "a").read_text())
        run_experiment(a)
        monkeypatch.setenv("CONGESTION_LAB_THREADS", "3")
        b = parse_config(write_config(tmp_path, body, "b").read_text())
        run_experiment(b)
        assert open(a.csv, "rb").read() == open(b.csv, "rb").read()


class TestFitAndPlot:
    def _csv(self, tmp_path, rows):
        path = tmp_path / "pts.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["N", "max_load", "status"])
            w.writerows(rows)
        return path

    def test_two_rows_exact(self, tmp_path):
        fit = fit_from_csv(self._csv(tmp_path, [[10, 100, "ok"], [100, 10000, "ok"]]))
        assert fit.slope == pytest.approx(2.0, abs=1e-12)

    def test_missing_column(self, tmp_path):
        with pytest.raises(KeyError):
            fit_from_csv(self._csv(tmp_path, [[10, 100, "ok"]]), y="load")

    def test_empty_csv(self, tmp_path):
        with pytest.raises(ValueError):
            emit_plot(self._csv(tmp_path, []), tmp_path / "x.svg")

    def test_single_point_has_no_fit_line(self, tmp_path):
        out = tmp_path / "one.svg"
        emit_plot(self._csv(tmp_path, [[10, 100, "ok"]]), out)
        assert "fit slope" not in out.read_text()

    def test_label_matches_fit(self, tmp_path):
        cfg = parse_config(write_config(tmp_path, "family = grid\ndim = 2\nsweep = 6, 9, 12\noverlays = 1.5").read_text())
        run_experiment(cfg)
        fit = fit_from_csv(cfg.csv)
        assert f"fit slope = {fit.slope:.3f}" in open(cfg.svg).read()


@pytest.mark.parametrize(
    "x,text", [(None, ""), (3, "3"), (2.0, "2"), (1 / 3, "0.333333333"), (float("inf"), "inf"), (True, "1")]
)
def test_format_cell(x, text):
    assert format_cell(x) == text


class TestCli:
    def test_generate_load_analyze_remetrize(self, tmp_path, capsys):
        g = tmp_path / "g.json"
        assert cli.main(["generate", "--family", "hpq", "--p", "3", "--q", "7", "--radius", "3", "--out", str(g)]) == 0
        graph = load_graph(g)
        assert graph.n == 85

        prof = tmp_path / "p.json"
        assert cli.main(["load", "--graph", str(g), "--out", str(prof)]) == 0
        doc = json.loads(prof.read_text())
        assert set(doc) == {"load", "max", "argmax", "total_demand"}
        assert doc["total_demand"] == 85 * 84 / 2

        rep = tmp_path / "r.json"
        assert cli.main(["analyze", "--graph", str(g), "--cert", "--bounds", "--delta", "--out", str(rep)]) == 0
        report = json.loads(rep.read_text())
        assert report["certificate"]["wedge_size"] >= 85 / 2
        assert report["bounds"]["theorem1_bound"] == pytest.approx(85**2 / 48 - 85 / 8)
        assert report["delta"] == 1.0

        g2 = tmp_path / "g2.json"
        assert cli.main(["remetrize", "--graph", str(g), "--scheme", "sphere_geometric", "--beta", "0.5", "--out", str(g2)]) == 0
        assert min(l for _, _, l in load_graph(g2).edges) == 0.125

    def test_experiment_fit_plot(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "family = bridged_grids\nsweep = 3, 4, 5")
        assert cli.main(["experiment", str(cfg)]) == 0
        assert "bound violations: 0" in capsys.readouterr().out
        out = tmp_path / "fit.json"
        assert cli.main(["fit", str(tmp_path / "run.csv"), "--out", str(out)]) == 0
        assert json.loads(out.read_text())["points_used"] == 3
        svg = tmp_path / "p.svg"
        assert cli.main(["plot", str(tmp_path / "run.csv"), "--out", str(svg), "--overlay", "2"]) == 0
        assert svg.read_text().startswith("<?xml")

    def test_random_family_seed(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            cli.main(["generate", "--family", "random_regular", "--r", "3", "--size", "20", "--seed", "4", "--out", str(out)])
        assert a.read_bytes() == b.read_bytes()
        assert from_json(a.read_text()).n == 20

    def test_errors_exit_nonzero(self, tmp_path, capsys):
        assert cli.main(["generate", "--family", "hpq", "--p", "4", "--q", "4", "--radius", "2"]) == 1
        assert "hyperbolic" in capsys.readouterr().err
