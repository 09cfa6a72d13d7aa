import csv
import json
from pathlib import Path

import pytest

from decaycascade.cascade import extract_cascades, read_cascades_jsonl
from decaycascade.cli import RunConfig, build_config, main, read_config_file
from decaycascade.cli.config import ConfigError
from decaycascade.graphcore import MeasureConfig, node_measures
from decaycascade.ingest import generate_synthetic_decay
from decaycascade.metrics import cascade_metrics, normalize_virality
from decaycascade.stats import ks_two_sample, js_between_samples

ACTIVITY = ["--core-mode", "activity", "--core-threshold", "1"]

# window 10 from t=0, k=4: last_seen 1->0, 2->1, 3->2, 4 and 5 alive.
# G_0 holds the edges 1-2 and 2-3, so the only cascade is 1 -> 2 -> 3.
PATH3 = """source,target,timestamp
1,2,0
2,3,1
2,3,10
3,4,20
4,5,30
"""

ALL_ALIVE = """1,2,0
2,3,5
1,3,31
2,3,35
"""


def run(ws, *argv):
    try:
        return main([*argv, "-w", str(ws)])
    except SystemExit as exc:  # argparse rejections
        return exc.code


def write(path: Path, text: str) -> Path:
    path.write_text(text)
    return path


@pytest.fixture
def path3(tmp_path):
    return write(tmp_path / "path3.csv", PATH3)


def ingest_path3(ws, path3, site="p", group=None):
    extra = ["--group", group] if group else []
    return run(ws, "ingest", site, "--edges", str(path3), "--k", "4", "--window", "10", "--start", "0", *ACTIVITY, *extra)


def test_ingest_summary_row_matches_hand_counts(tmp_path, path3, capsys):
    ws = tmp_path / "ws"
    assert ingest_path3(ws, path3) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].split() == ["site", "group", "start", "end", "k", "V_G0", "E_G0", "V_Glast", "E_Glast", "cascades"]
    assert out[1].split() == ["p", "1970-01-01", "1970-01-01", "4", "5", "2", "2", "1"]
    summary = json.loads((ws / "sites/p/ingest_summary.json").read_text())["summary"]
    assert summary == {"start": 0, "end": 40, "k": 4, "V_G0": 5, "E_G0": 2, "V_Glast": 2, "E_Glast": 1}


def test_ingest_empty_file_exits_2_without_writing(tmp_path):
    ws = tmp_path / "ws"
    empty = write(tmp_path / "empty.csv", "")
    assert run(ws, "ingest", "s", "--edges", str(empty), *ACTIVITY) == 2
    assert not ws.exists()


def test_ingest_missing_file_is_input_error(tmp_path):
    assert run(tmp_path / "ws", "ingest", "s", "--edges", str(tmp_path / "nope.csv")) == 2


def test_rerun_is_up_to_date(tmp_path, path3, capsys):
    ws = tmp_path / "ws"
    assert ingest_path3(ws, path3) == 0
    before = (ws / "manifest.json").read_bytes()
    capsys.readouterr()
    assert ingest_path3(ws, path3) == 0
    assert "up-to-date" in capsys.readouterr().out
    assert (ws / "manifest.json").read_bytes() == before


def test_changed_config_reruns(tmp_path, path3, capsys):
    ws = tmp_path / "ws"
    ingest_path3(ws, path3)
    capsys.readouterr()
    assert run(ws, "ingest", "p", "--edges", str(path3), "--k", "5", "--window", "10", "--start", "0", *ACTIVITY) == 0
    assert "up-to-date" not in capsys.readouterr().out
    assert json.loads((ws / "sites/p/series/meta.json").read_text())["k"] == 5


def test_tampered_output_triggers_rerun(tmp_path, path3, capsys):
    ws = tmp_path / "ws"
    ingest_path3(ws, path3)
    (ws / "sites/p/series/last_seen.csv").write_text("node,last_seen\n")
    capsys.readouterr()
    ingest_path3(ws, path3)
    assert "up-to-date" not in capsys.readouterr().out


@pytest.mark.parametrize("stage", ["cascades", "metrics"])
def test_missing_stage_exits_3(tmp_path, stage, capsys):
    assert run(tmp_path / "ws", stage, "nosuch") == 3
    err = capsys.readouterr().err
    assert "run `decaycascade" in err


def test_metrics_before_cascades_names_command(tmp_path, path3, capsys):
    ws = tmp_path / "ws"
    ingest_path3(ws, path3)
    assert run(ws, "metrics", "p") == 3
    assert "decaycascade cascades p" in capsys.readouterr().err


def test_compare_and_predict_need_metrics(tmp_path, path3):
    ws = tmp_path / "ws"
    ingest_path3(ws, path3, "a")
    ingest_path3(ws, path3, "b")
    assert run(ws, "compare", "a", "b") == 3
    assert run(ws, "predict", "a", "b") == 3


def test_report_on_empty_workspace(tmp_path):
    assert run(tmp_path / "ws", "report") == 3


def test_path_of_three_gives_one_cascade(tmp_path, path3, capsys):
    ws = tmp_path / "ws"
    ingest_path3(ws, path3)
    capsys.readouterr()
    assert run(ws, "cascades", "p") == 0
    assert capsys.readouterr().out.strip() == "p: 1 cascades"
    (tree,) = read_cascades_jsonl(ws / "sites/p/cascades.jsonl")
    assert tree.root == 1 and set(tree.edges) == {(1, 2), (2, 3)}


def test_all_alive_site_has_no_cascades(tmp_path, capsys):
    ws = tmp_path / "ws"
    f = write(tmp_path / "alive.csv", ALL_ALIVE)
    assert run(ws, "ingest", "z", "--edges", str(f), "--k", "4", "--window", "10", "--start", "0", *ACTIVITY) == 0
    capsys.readouterr()
    assert run(ws, "cascades", "z") == 0
    assert capsys.readouterr().out.strip() == "z: 0 cascades"


def test_synth_without_noise_recovers_planted_count(tmp_path, capsys):
    ws = tmp_path / "ws"
    planted = ["--planted", "0:2:2", "--planted", "1:3:1", "--planted", "2:1:3", "--planted", "3:2:1"]
    assert run(ws, "synth", "s", "--nodes", "60", "--k", "6", *planted) == 0
    capsys.readouterr()
    assert run(ws, "cascades", "s") == 0
    assert capsys.readouterr().out.strip() == "s: 4 cascades"
    got = read_cascades_jsonl(ws / "sites/s/cascades.jsonl")
    truth = read_cascades_jsonl(ws / "sites/s/planted.jsonl")
    key = lambda t: (t.root, t.nodes, frozenset(t.edges))
    assert sorted(map(key, got), key=repr) == sorted(map(key, truth), key=repr)


def test_synth_rejects_bad_planted_spec(tmp_path):
    assert run(tmp_path / "ws", "synth", "s", "--nodes", "10", "--planted", "0:x:1") == 1


def test_single_cascade_metrics_row(tmp_path, path3):
    ws = tmp_path / "ws"
    ingest_path3(ws, path3)
    run(ws, "cascades", "p")
    assert run(ws, "metrics", "p") == 0
    with open(ws / "sites/p/metrics/metrics.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    row = rows[0]
    assert int(row["size"]) == 3
    assert float(row["size_fraction"]) == pytest.approx(3 / 5)
    # gaps 1 and 1 over k=4 and two edges
    assert float(row["duration"]) == pytest.approx(0.25)
    assert float(row["virality_raw"]) == pytest.approx(8 / 6)


def test_identical_sites_compare_to_p1_js0(tmp_path, path3):
    ws = tmp_path / "ws"
    for site, group in (("a", "decayed"), ("b", "alive")):
        ingest_path3(ws, path3, site, group)
        run(ws, "cascades", site)
        run(ws, "metrics", site)
    assert run(ws, "compare", "a", "b") == 0
    for metric in ("size", "duration", "virality", "degree"):
        for kind, off in (("ks_pvalue", 1.0), ("js", 0.0)):
            with open(ws / f"compare/{metric}_{kind}.csv") as fh:
                rows = list(csv.reader(fh))
            assert rows[0] == ["site", "a", "b"]
            assert float(rows[1][2]) == off and float(rows[2][1]) == off
    body = json.loads((ws / "compare/compare.json").read_text())
    assert body["config"]["seed"] == 0 and body["groups"] == {"a": "decayed", "b": "alive"}


def test_compare_needs_two_sites(tmp_path):
    assert run(tmp_path / "ws", "compare", "a") == 1


def test_bad_site_name_is_usage_error(tmp_path, path3):
    assert ingest_path3(tmp_path / "ws", path3, site="../evil") == 1


def test_unknown_subcommand_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_bad_flag_value_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["cascades", "s", "--k", "many"])
    assert exc.value.code == 1


def test_invalid_config_value_exit_1(tmp_path, path3):
    assert run(tmp_path / "ws", "ingest", "s", "--edges", str(path3), "--k", "1") == 1


# config files


def test_config_file_precedence(tmp_path):
    f = write(tmp_path / "c.toml", 'k = 6\nsigmoid = "tanh"\ninclude-alive = true\nlearning_rate = 0.5\nthreads = 3\n')
    values = read_config_file(f)
    assert values == {"k": 6, "sigmoid": "tanh", "include_alive": True, "learning_rate": 0.5, "threads": 3}
    cfg = build_config(values, {"k": 7, "bins": None}, env={})
    assert (cfg.k, cfg.sigmoid, cfg.include_alive, cfg.bins, cfg.threads) == (7, "tanh", True, 20, 3)


def test_threads_env_beats_file_but_not_flag():
    assert build_config({"threads": 3}, {}, env={"DECAYCASCADE_THREADS": "5"}).threads == 5
    assert build_config({"threads": 3}, {"threads": 2}, env={"DECAYCASCADE_THREADS": "5"}).threads == 2
    assert build_config({}, {}, env={}).threads >= 1


def test_threads_excluded_from_recorded_config():
    assert "threads" not in RunConfig(threads=4).to_dict()


@pytest.mark.parametrize(
    "text",
    ["nonsense = 1\n", "k = 1\n", "k = 2.5\n", 'sigmoid = "cubic"\n', "k = [1]\n", "k = \n", "subsample = 0\n"],
)
def test_bad_config_files(tmp_path, text):
    f = write(tmp_path / "bad.toml", text)
    with pytest.raises(ConfigError):
        build_config(read_config_file(f), {}, env={})


def test_bad_config_file_exit_1(tmp_path, path3):
    f = write(tmp_path / "bad.toml", "colour = 'blue'\n")
    assert run(tmp_path / "ws", "ingest", "s", "--edges", str(path3), "--config", str(f)) == 1
    assert run(tmp_path / "ws", "ingest", "s", "--edges", str(path3), "--config", str(tmp_path / "none.toml")) == 1


def test_config_file_applies(tmp_path, path3):
    ws = tmp_path / "ws"
    f = write(tmp_path / "c.toml", 'k = 4\nwindow = 10\nstart = 0\ncore_mode = "activity"\ncore_threshold = 1\n')
    assert run(ws, "ingest", "p", "--edges", str(path3), "--config", str(f)) == 0
    assert json.loads((ws / "sites/p/ingest_summary.json").read_text())["summary"]["E_G0"] == 2


# end to end


def two_group_workspace(ws: Path, runs: int = 4):
    common = ["--k", "8", "--seed", "11"]
    assert run(ws, "synth", "d1", "--nodes", "120", "--p-edge", "0.03", "--group", "decayed",
               "--planted", "0:2:2", "--planted", "1:3:1", "--planted", "2:2:3", *common) == 0
    assert run(ws, "synth", "a1", "--nodes", "100", "--p-edge", "0.05", "--group", "alive",
               "--planted", "4:2:2", *common) == 0
    for s in ("a1", "d1"):
        assert run(ws, "cascades", s, *common) == 0
        assert run(ws, "metrics", s, *common) == 0
    assert run(ws, "compare", "a1", "d1", *common) == 0
    assert run(ws, "predict", "a1", "d1", "--runs", str(runs), "--top-features", "3", *common) == 0
    assert run(ws, "predict", "a1", "d1", "--runs", str(runs), "--target", "virality", *common) == 0
    assert run(ws, "report", *common) == 0


def test_pipeline_matches_module_calls(tmp_path):
    ws = tmp_path / "ws"
    two_group_workspace(ws)
    cfg = RunConfig(k=8, seed=11)
    by_site = {}
    for site, nodes, p, planted in (
        ("d1", 120, 0.03, [(0, 2, 2), (1, 3, 1), (2, 2, 3)]),
        ("a1", 100, 0.05, [(4, 2, 2)]),
    ):
        syn = generate_synthetic_decay(nodes, p, planted, 8, 11)
        g0 = syn.series.g0
        trees = extract_cascades(g0, syn.series)
        rows = cascade_metrics(trees, g0, 8, cfg.sigmoid, cfg.degree_base)
        by_site[site] = rows
        with open(ws / f"sites/{site}/metrics/metrics.csv") as fh:
            got = list(csv.DictReader(fh))
        assert len(got) == len(rows)
        for g, r in zip(got, rows):
            assert int(g["cascade_id"]) == r.cascade_id
            assert float(g["duration"]) == r.duration
            assert float(g["virality_raw"]) == r.virality_raw
            assert float(g["size_fraction"]) == r.size_fraction
        measures = node_measures(g0, MeasureConfig(seed=11))
        with open(ws / f"sites/{site}/metrics/measures.csv") as fh:
            coreness = {int(r["node"]): int(r["coreness"]) for r in csv.DictReader(fh)}
        assert coreness == {v: m.coreness for v, m in measures.items()}

    compare = json.loads((ws / "compare/compare.json").read_text())
    a, d = by_site["a1"], by_site["d1"]
    ks = ks_two_sample([r.duration for r in a], [r.duration for r in d])
    assert compare["metrics"]["duration"]["ks_pvalue"][0][1] == pytest.approx(ks.p_value, abs=1e-12)
    pooled = normalize_virality([r.virality_raw for r in a + d])
    js = js_between_samples(pooled[:len(a)], pooled[len(a):], bins=20)
    assert compare["metrics"]["virality"]["js"][0][1] == pytest.approx(js, abs=1e-12)

    rep = json.loads((ws / "predict/size_report.json").read_text())
    assert rep["n_rows"] == len(a) + len(d)
    assert rep["run_config"]["seed"] == 11
    assert sum(rep["importance"].values()) == pytest.approx(1.0, abs=1e-9)
    with open(ws / "predict/size_runs.csv") as fh:
        assert len(list(csv.DictReader(fh))) == 4

    with open(ws / "report.csv") as fh:
        rows = {r["site"]: r for r in csv.DictReader(fh)}
    assert int(rows["d1"]["cascades"]) == len(d) and rows["d1"]["group"] == "decayed"


def report_bytes(ws: Path) -> dict:
    return {
        str(p.relative_to(ws)): p.read_bytes()
        for p in sorted(ws.rglob("*"))
        if p.is_file() and p.suffix in (".csv", ".json", ".jsonl", ".dot")
    }


def test_pipeline_is_byte_deterministic(tmp_path):
    first, second = tmp_path / "one", tmp_path / "two"
    two_group_workspace(first)
    two_group_workspace(second)
    a, b = report_bytes(first), report_bytes(second)
    assert a.keys() == b.keys() and len(a) > 30
    assert [k for k in a if a[k] != b[k]] == []


def test_every_csv_has_header_and_json_embeds_config(tmp_path):
    ws = tmp_path / "ws"
    two_group_workspace(ws, runs=2)
    for p in ws.rglob("*.csv"):
        header = p.read_text().splitlines()[0]
        assert header and not header[0].isdigit(), p
    for p in ws.rglob("*_report.json"):
        body = json.loads(p.read_text())
        assert "config" in body or "run_config" in body
    manifest = json.loads((ws / "manifest.json").read_text())
    assert manifest["tool"] == "decaycascade" and manifest["version"]
    for site in manifest["sites"].values():
        for stage in site["stages"].values():
            for rel in stage["outputs"]:
                assert (ws / rel).exists()


def test_thread_count_does_not_change_results(tmp_path):
    one, many = tmp_path / "one", tmp_path / "many"
    for ws, threads in ((one, "1"), (many, "4")):
        run(ws, "synth", "d", "--nodes", "80", "--p-edge", "0.04", "--planted", "0:3:2", "--planted", "1:2:2", "--k", "7")
        run(ws, "cascades", "d")
        run(ws, "metrics", "d")
        assert run(ws, "predict", "d", "--runs", "6", "--threads", threads) == 0
    assert (one / "predict/size_runs.csv").read_bytes() == (many / "predict/size_runs.csv").read_bytes()


def test_up_to_date_downstream(tmp_path, capsys):
    ws = tmp_path / "ws"
    run(ws, "synth", "d", "--nodes", "50", "--planted", "0:2:2", "--k", "6")
    run(ws, "cascades", "d")
    run(ws, "metrics", "d")
    capsys.readouterr()
    assert run(ws, "metrics", "d") == 0
    assert "up-to-date" in capsys.readouterr().out
    # different cascade settings invalidate the stage
    assert run(ws, "cascades", "d", "--include-alive") == 0
    assert "up-to-date" not in capsys.readouterr().out


def test_console_entry_point_help(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for cmd in ("ingest", "synth", "cascades", "metrics", "compare", "predict", "report"):
        assert cmd in out

