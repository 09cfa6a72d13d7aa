"""``decaycascade`` command line: ingest, extract, measure, compare, predict."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from ..cascade import (
    CascadeTree,
    extract_cascades,
    initiator_coreness_split,
    monotonicity_profile,
    read_cascades_jsonl,
    write_cascades_dot,
    write_cascades_jsonl,
)
from ..graphcore import MeasureConfig, node_measures, read_measures_csv, write_measures_csv
from ..graphcore.spectral import ConvergenceError
from ..ingest import (
    CoreFilterSpec,
    InputError,
    build_snapshots,
    generate_synthetic_decay,
    load_series,
    parse_edge_list,
    parse_node_id,
    parse_stackexchange_dump,
    save_series,
    select_core_nodes,
)
from ..metrics import (
    cascade_metrics,
    normalize_virality,
    read_metrics_csv,
    similarity_matrix,
    upper_triangle,
    write_metrics_csv,
    write_similarity_csv,
)
from ..predict import ExperimentConfig, GbrConfig, Target, assemble_sites, run_experiment, select_top_features
from ..stats import five_number_summary, pattern_distance_report, write_distribution_csv, write_matrix_csv
from .config import (
    CASCADE_KEYS,
    COMPARE_KEYS,
    INGEST_KEYS,
    METRIC_KEYS,
    PREDICT_KEYS,
    ConfigError,
    RunConfig,
    build_config,
    read_config_file,
)
from .workspace import MissingStageError, Workspace, WorkspaceBusy, check_site_name, sha256_file, stage_key

log = logging.getLogger("decaycascade")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_MISSING, EXIT_NUMERIC = 0, 1, 2, 3, 4

# compare / report label -> metrics.csv column
COMPARED_METRICS = {
    "size": "size_fraction",
    "duration": "duration",
    "virality": "virality_norm",
    "degree": "max_degree_norm",
}
SE_TABLES = ("Posts.xml", "Comments.xml", "Users.xml")


class UsageError(Exception):
    pass


def _write_json(path: Path, data: dict) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def _files(root: Path) -> list[Path]:
    return sorted(p for p in root.rglob("*") if p.is_file())


def _up_to_date(ws: Workspace, site, stage: str, key: str) -> bool:
    if ws.up_to_date(site, stage, key):
        print(f"{stage} {site}: up-to-date" if site else f"{stage}: up-to-date")
        return True
    return False


# ---------------------------------------------------------------- ingest


def _site_inputs(args) -> dict[str, Path]:
    if args.edges:
        return {"edges": Path(args.edges)}
    root = Path(args.stackexchange)
    out = {name: root / name for name in SE_TABLES}
    if (root / "Votes.xml").exists():
        out["Votes.xml"] = root / "Votes.xml"
    return out


def _input_digests(inputs: dict[str, Path]) -> dict[str, str]:
    digests = {}
    for name, path in inputs.items():
        if not path.is_file():
            raise InputError(f"input file not found: {path}")
        digests[name] = sha256_file(path)
    return digests


def _load_events(args, inputs):
    if args.edges:
        res = parse_edge_list(inputs["edges"])
        for line, msg in res.errors:
            log.warning("%s line %d: %s", inputs["edges"], line, msg)
        for w in res.warnings:
            log.warning("%s", w)
        return res.events, None
    dump = parse_stackexchange_dump(
        inputs["Posts.xml"], inputs["Comments.xml"], inputs["Users.xml"], inputs.get("Votes.xml")
    )
    for reason, count in sorted(dump.skipped.items()):
        log.warning("skipped %d rows: %s", count, reason)
    return dump.events, dump.reputations


SUMMARY_COLUMNS = ("start", "end", "k", "V_G0", "E_G0", "V_Glast", "E_Glast")


def _summary_row(site: str, group: str | None, summary: dict, cascades: int | None = None) -> dict:
    row = {"site": site, "group": group or ""}
    row.update({c: summary[c] for c in SUMMARY_COLUMNS})
    row["cascades"] = "" if cascades is None else cascades
    return row


def _print_rows(rows: list[dict]) -> None:
    if not rows:
        return
    cols = list(rows[0])
    shown = []
    for r in rows:
        s = dict(r)
        for c in ("start", "end"):
            s[c] = datetime.fromtimestamp(int(r[c]), timezone.utc).strftime("%Y-%m-%d")
        shown.append({c: str(s[c]) for c in cols})
    width = {c: max(len(c), *(len(s[c]) for s in shown)) for c in cols}
    print("  ".join(c.ljust(width[c]) for c in cols))
    for s in shown:
        print("  ".join(s[c].ljust(width[c]) for c in cols))


def cmd_ingest(ws: Workspace, cfg: RunConfig, args) -> int:
    site = check_site_name(args.site)
    inputs = _site_inputs(args)
    digests = _input_digests(inputs)
    config = cfg.subset(*INGEST_KEYS)
    key = stage_key("ingest", config, {"files": digests, "group": args.group})
    if _up_to_date(ws, site, "ingest", key):
        return EXIT_OK

    events, reputations = _load_events(args, inputs)
    if not events:
        raise InputError(f"no usable interaction events in {', '.join(str(p) for p in inputs.values())}")
    core = select_core_nodes(events, reputations, CoreFilterSpec(cfg.core_mode, cfg.core_threshold))
    series = build_snapshots(events, core, cfg.k, window=cfg.window, start=cfg.start)
    if series.dropped_events:
        log.warning("%d events fall after the last window and were dropped", series.dropped_events)
    return _store_series(ws, cfg, site, args.group, series, key, config, digests, "ingest")


def _store_series(ws, cfg, site, group, series, key, config, inputs, stage, extra_files=()) -> int:
    summary = series.summary()
    with ws.lock():
        out = ws.site_dir(site)
        series_dir = out / "series"
        if series_dir.exists():
            for p in series_dir.iterdir():
                p.unlink()
        save_series(series, series_dir)
        report = out / "ingest_summary.json"
        _write_json(report, {"site": site, "group": group, "summary": summary, "config": cfg.to_dict()})
        outputs = _files(series_dir) + [report] + list(extra_files)
        ws.record(site, "ingest", key, config, inputs, outputs, group=group, summary=summary, source=stage)
    _print_rows([_summary_row(site, group, summary)])
    return EXIT_OK


def _parse_planted(text: str) -> tuple[int, int, int]:
    try:
        root, children, depth = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"planted tree must be ROOT:CHILDREN:DEPTH, got {text!r}") from None
    return root, children, depth


def cmd_synth(ws: Workspace, cfg: RunConfig, args) -> int:
    site = check_site_name(args.site)
    planted = [tuple(p) for p in args.planted]
    config = {**cfg.subset("k", "seed"), "nodes": args.nodes, "p_edge": args.p_edge, "planted": planted}
    key = stage_key("ingest", config, {"group": args.group})
    if _up_to_date(ws, site, "ingest", key):
        return EXIT_OK
    try:
        syn = generate_synthetic_decay(args.nodes, args.p_edge, planted, cfg.k, cfg.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    truth = []
    last_seen = syn.series.last_activity
    for i, p in enumerate(syn.planted):
        truth.append(CascadeTree(i, p.root, frozenset(p.nodes), tuple(p.edges), {v: last_seen[v] for v in p.nodes}))
    ws.site_dir(site).mkdir(parents=True, exist_ok=True)
    planted_file = ws.site_dir(site) / "planted.jsonl"
    with ws.lock():
        write_cascades_jsonl(planted_file, truth)
    return _store_series(ws, cfg, site, args.group, syn.series, key, config, {}, "synth", [planted_file])


# ---------------------------------------------------------------- cascades


def cmd_cascades(ws: Workspace, cfg: RunConfig, args) -> int:
    site = check_site_name(args.site)
    ws.require(site, "ingest", f"ingest {site}")
    config = cfg.subset(*CASCADE_KEYS)
    key = stage_key("cascades", config, ws.output_digests(site, "ingest"))
    if _up_to_date(ws, site, "cascades", key):
        return EXIT_OK
    out = ws.site_dir(site)
    series = load_series(out / "series")
    trees = extract_cascades(series.g0, series, cfg.include_alive, cfg.initiator_mode)
    with ws.lock():
        write_cascades_jsonl(out / "cascades.jsonl", trees)
        write_cascades_dot(out / "cascades.dot", trees)
        report = out / "cascades_summary.json"
        _write_json(report, {"site": site, "cascades": len(trees), "config": cfg.to_dict()})
        files = [out / "cascades.jsonl", out / "cascades.dot", report]
        ws.record(site, "cascades", key, config, ws.output_digests(site, "ingest"), files, count=len(trees))
    print(f"{site}: {len(trees)} cascades")
    return EXIT_OK


# ---------------------------------------------------------------- metrics


def _write_boxplot(path: Path, samples: dict) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("metric", "min", "q1", "median", "q3", "max"))
        for name, values in samples.items():
            if len(values):
                w.writerow((name, *(repr(x) for x in five_number_summary(values))))


def cmd_metrics(ws: Workspace, cfg: RunConfig, args) -> int:
    site = check_site_name(args.site)
    ws.require(site, "cascades", f"cascades {site}")
    config = cfg.subset(*METRIC_KEYS)
    inputs = {**ws.output_digests(site, "ingest"), **ws.output_digests(site, "cascades")}
    key = stage_key("metrics", config, inputs)
    if _up_to_date(ws, site, "metrics", key):
        return EXIT_OK

    out = ws.site_dir(site)
    series = load_series(out / "series")
    g0 = series.g0
    trees = read_cascades_jsonl(out / "cascades.jsonl")
    measures = node_measures(
        g0, MeasureConfig(cfg.eigen_tol, cfg.eigen_max_iter, cfg.min_cut_sample_cap, cfg.seed)
    )
    rows = cascade_metrics(trees, g0, series.k, cfg.sigmoid, cfg.degree_base)
    coreness = {v: m.coreness for v, m in measures.items()}

    mdir = out / "metrics"
    with ws.lock():
        if mdir.exists():
            for p in mdir.iterdir():
                p.unlink()
        mdir.mkdir(parents=True, exist_ok=True)
        write_measures_csv(mdir / "measures.csv", measures)
        write_metrics_csv(mdir / "metrics.csv", rows, site)
        samples = {label: [getattr(r, col) for r in rows] for label, col in COMPARED_METRICS.items()}
        for label, values in samples.items():
            if values:
                write_distribution_csv(mdir / f"dist_{label}.csv", values, label)
        _write_boxplot(mdir / "boxplot.csv", samples)

        profile = monotonicity_profile(trees, coreness) if trees else {}
        with open(mdir / "monotonicity.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("class", "fraction"))
            for cls, frac in profile.items():
                w.writerow((cls, repr(frac)))

        sim_mean = None
        if trees:
            ids, mat = similarity_matrix(trees)
            write_similarity_csv(mdir / "similarity.csv", ids, mat)
            tri = upper_triangle(mat)
            sim_mean = float(np.mean(tri)) if tri else None

        inits, rest = initiator_coreness_split(g0, trees)
        for label, values in (("initiators", inits), ("others", rest)):
            if values:
                write_distribution_csv(mdir / f"coreness_ccdf_{label}.csv", values, label)

        report = {
            "site": site,
            "config": cfg.to_dict(),
            "cascades": len(trees),
            "largest_size_fraction": max((r.size_fraction for r in rows), default=None),
            "mean_similarity": sim_mean,
            "monotonicity": profile,
            "five_number": {k: five_number_summary(v) for k, v in samples.items() if v},
        }
        _write_json(mdir / "metrics_report.json", report)
        ws.record(site, "metrics", key, config, inputs, _files(mdir))
    print(f"{site}: metrics for {len(rows)} cascades written to {mdir}")
    return EXIT_OK


# ---------------------------------------------------------------- compare


def _pooled_samples(ws: Workspace, sites: list[str], cfg: RunConfig) -> dict[str, dict[str, list[float]]]:
    """Per metric, per site samples; virality is re-squashed over the pooled raw values."""
    per_site = {}
    for site in sites:
        ws.require(site, "metrics", f"metrics {site}")
        per_site[site] = read_metrics_csv(ws.site_dir(site) / "metrics" / "metrics.csv")
        if not per_site[site]:
            raise InputError(f"site {site} has no cascades to compare")
    out = {label: {s: [getattr(r, col) for r in rows] for s, rows in per_site.items()}
           for label, col in COMPARED_METRICS.items()}
    raw = [r.virality_raw for s in sites for r in per_site[s]]
    pooled = normalize_virality(raw, cfg.sigmoid)
    i = 0
    for s in sites:
        n = len(per_site[s])
        out["virality"][s] = pooled[i:i + n]
        i += n
    return out


def cmd_compare(ws: Workspace, cfg: RunConfig, args) -> int:
    sites = sorted({check_site_name(s) for s in args.sites})
    if len(sites) < 2:
        raise UsageError("compare needs at least two distinct sites")
    labels = list(COMPARED_METRICS) if args.metric == "all" else [args.metric]
    manifest_sites = ws.sites()
    groups = {s: manifest_sites.get(s, {}).get("group") for s in sites}
    groups = {s: g for s, g in groups.items() if g}
    inputs = {}
    for s in sites:
        ws.require(s, "metrics", f"metrics {s}")
        inputs[s] = ws.output_digests(s, "metrics")
    config = {**cfg.subset(*COMPARE_KEYS), "sites": sites, "metrics": labels, "groups": groups}
    key = stage_key("compare", config, inputs)
    if _up_to_date(ws, None, "compare", key):
        return EXIT_OK

    samples = _pooled_samples(ws, sites, cfg)
    cdir = ws.root / "compare"
    result = {"sites": sites, "groups": groups, "config": cfg.to_dict(), "metrics": {}}
    with ws.lock():
        if cdir.exists():
            for p in cdir.iterdir():
                p.unlink()
        cdir.mkdir(parents=True, exist_ok=True)
        for label in labels:
            rep = pattern_distance_report(samples[label], label, groups or None, cfg.bins)
            write_matrix_csv(cdir / f"{label}_ks_pvalue.csv", rep.sites, rep.p_values)
            write_matrix_csv(cdir / f"{label}_js.csv", rep.sites, rep.js)
            result["metrics"][label] = {
                "ks_pvalue": rep.p_values.tolist(),
                "js": rep.js.tolist(),
                "nearest_group": rep.nearest_group,
            }
            for s in rep.sites:
                if s in rep.nearest_group:
                    print(f"{label}: {s} is closer to the {rep.nearest_group[s]} group")
        _write_json(cdir / "compare.json", result)
        ws.record(None, "compare", key, config, inputs, _files(cdir))
    print(f"compare: {len(labels)} metric(s) over {len(sites)} sites written to {cdir}")
    return EXIT_OK


# ---------------------------------------------------------------- predict


def cmd_predict(ws: Workspace, cfg: RunConfig, args) -> int:
    sites = sorted({check_site_name(s) for s in args.sites})
    target = Target(args.target)
    inputs = {}
    for s in sites:
        ws.require(s, "metrics", f"metrics {s}")
        inputs[s] = {**ws.output_digests(s, "cascades"), **ws.output_digests(s, "metrics")}
    config = {**cfg.subset(*PREDICT_KEYS), "sites": sites, "target": target.value, "top_features": args.top_features}
    stage = f"predict_{target.value}"
    key = stage_key(stage, config, inputs)
    if _up_to_date(ws, None, stage, key):
        return EXIT_OK

    data = {}
    for s in sites:
        d = ws.site_dir(s)
        data[s] = (read_cascades_jsonl(d / "cascades.jsonl"),
                   read_measures_csv(d / "metrics" / "measures.csv", parse_node=parse_node_id))
    try:
        dataset = assemble_sites(data, target, cfg.aggregation, cfg.sigmoid)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if len(dataset) < 2:
        raise InputError("prediction needs at least two cascades")
    if dataset.imputed.any():
        log.warning("%d rows had undefined measures imputed as 0", int(dataset.imputed.sum()))
    exp_cfg = ExperimentConfig(
        runs=cfg.runs,
        train_fraction=cfg.train_fraction,
        seed=cfg.seed,
        gbr=GbrConfig(cfg.n_estimators, cfg.learning_rate, cfg.max_depth, cfg.min_samples_leaf, cfg.subsample),
        baseline_constant=cfg.baseline_constant,
        threads=cfg.threads,
    )

    pdir = ws.root / "predict"
    written = []

    def emit(report, stem):
        body = report.to_dict()
        body.update({"sites": sites, "run_config": cfg.to_dict(), "imputed_rows": int(dataset.imputed.sum())})
        _write_json(pdir / f"{stem}_report.json", body)
        report.write_runs_csv(pdir / f"{stem}_runs.csv")
        report.model.save(pdir / f"{stem}_model.json")
        written.extend(pdir / f"{stem}_{suffix}" for suffix in ("report.json", "runs.csv", "model.json"))
        s = report.summary()
        print(
            f"{stem}: model MAE {s['mae_model_mean']:.4g} ± {s['mae_model_std']:.3g}, "
            f"{report.baseline_rule} baseline {s['mae_baseline_mean']:.4g}, "
            f"improvement {100 * s['improvement']:.1f}%"
        )

    report = run_experiment(dataset, exp_cfg, target.value)
    with ws.lock():
        pdir.mkdir(parents=True, exist_ok=True)
        for p in pdir.glob(f"{target.value}_*"):
            p.unlink()
        emit(report, target.value)
        if args.top_features:
            reduced = select_top_features(dataset, report.importance, args.top_features)
            emit(run_experiment(reduced, exp_cfg, target.value), f"{target.value}_top{args.top_features}")
        ws.record(None, stage, key, config, inputs, written)
    return EXIT_OK


# ---------------------------------------------------------------- report


def cmd_report(ws: Workspace, cfg: RunConfig, args) -> int:
    sites = ws.sites()
    if not sites:
        raise MissingStageError("workspace", "ingest", "ingest SITE")
    rows = []
    for site in sorted(sites):
        entry = sites[site].get("stages", {})
        if "ingest" not in entry:
            continue
        count = entry.get("cascades", {}).get("count")
        rows.append(_summary_row(site, sites[site].get("group"), entry["ingest"]["summary"], count))
    if not rows:
        raise MissingStageError("workspace", "ingest", "ingest SITE")
    with ws.lock():
        with open(ws.root / "report.csv", "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    _print_rows(rows)
    return EXIT_OK


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _config_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("-w", "--workspace", default="workspace", help="workspace directory (default: ./workspace)")
    p.add_argument("--config", help="TOML file of key = value settings")
    p.add_argument("-v", "--verbose", action="store_true")
    g = p.add_argument_group("run configuration")
    g.add_argument("--k", type=int, help="number of snapshots (default 10)")
    g.add_argument("--window", type=int, help="snapshot length in seconds (default: span / k)")
    g.add_argument("--start", type=int, help="series start, epoch seconds (default: first event)")
    g.add_argument("--core-mode", choices=["reputation", "activity"])
    g.add_argument("--core-threshold", type=int, help="core filter threshold (default 500)")
    g.add_argument("--include-alive", action="store_const", const=True, help="let nodes active in the last snapshot join cascades")
    g.add_argument("--initiator-mode", choices=["earliest", "local"])
    g.add_argument("--eigen-tol", type=float)
    g.add_argument("--eigen-max-iter", type=int)
    g.add_argument("--min-cut-sample-cap", type=int, help="sample min-cut partners above this many nodes")
    g.add_argument("--sigmoid", choices=["logistic", "tanh", "minmax"])
    g.add_argument("--degree-base", choices=["tree", "g0"])
    g.add_argument("--bins", type=int, help="histogram bins for JS divergence (default 20)")
    g.add_argument("--n-estimators", type=int)
    g.add_argument("--learning-rate", type=float)
    g.add_argument("--max-depth", type=int)
    g.add_argument("--min-samples-leaf", type=int)
    g.add_argument("--subsample", type=float)
    g.add_argument("--runs", type=int, help="random splits in the prediction experiment (default 100)")
    g.add_argument("--train-fraction", type=float)
    g.add_argument("--aggregation", choices=["initiator", "mean"])
    g.add_argument("--baseline-constant", type=float)
    g.add_argument("--seed", type=int, help="master seed (default 0)")
    g.add_argument("--threads", type=int, help="worker threads (env DECAYCASCADE_THREADS)")
    return p


_CONFIG_DESTS = (
    "k", "window", "start", "core_mode", "core_threshold", "include_alive", "initiator_mode",
    "eigen_tol", "eigen_max_iter", "min_cut_sample_cap", "sigmoid", "degree_base", "bins",
    "n_estimators", "learning_rate", "max_depth", "min_samples_leaf", "subsample", "runs",
    "train_fraction", "aggregation", "baseline_constant", "seed", "threads",
)


def build_parser() -> argparse.ArgumentParser:
    common = _config_flags()
    parser = _Parser(prog="decaycascade", description="Inactivity cascade analysis of temporal interaction graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", parents=[common], help="build a snapshot series for one site")
    p.add_argument("site")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--edges", help="CSV edge list: source,target,timestamp[,kind]")
    src.add_argument("--stackexchange", help="directory holding Posts.xml, Comments.xml, Users.xml [, Votes.xml]")
    p.add_argument("--group", choices=["decayed", "alive"], help="label used by compare")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic site with planted cascades")
    p.add_argument("site")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--p-edge", type=float, default=0.0)
    p.add_argument("--planted", type=_parse_planted, action="append", default=[], metavar="ROOT:CHILDREN:DEPTH")
    p.add_argument("--group", choices=["decayed", "alive"])
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("cascades", parents=[common], help="extract inactivity cascades")
    p.add_argument("site")
    p.set_defaults(func=cmd_cascades)

    p = sub.add_parser("metrics", parents=[common], help="node measures, cascade metrics, plot data")
    p.add_argument("site")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("compare", parents=[common], help="KS and JS comparison across sites")
    p.add_argument("sites", nargs="+")
    p.add_argument("--metric", choices=["all", *COMPARED_METRICS], default="all")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("predict", parents=[common], help="boosted-tree prediction of cascade size or virality")
    p.add_argument("sites", nargs="+")
    p.add_argument("--target", choices=[t.value for t in Target], default="size")
    p.add_argument("--top-features", type=int, choices=range(1, 10), metavar="J",
                   help="rerun with the J highest-ranked features")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("report", parents=[common], help="per-site summary table")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        file_values = read_config_file(Path(args.config)) if args.config else {}
        cfg = build_config(file_values, {d: getattr(args, d) for d in _CONFIG_DESTS})
        return args.func(Workspace(Path(args.workspace)), cfg, args)
    except (ConfigError, UsageError, WorkspaceBusy) as exc:
        print(f"decaycascade: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # site-name validation and similar argument problems
        if isinstance(exc, InputError):
            print(f"decaycascade: input error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        print(f"decaycascade: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MissingStageError as exc:
        print(f"decaycascade: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (ConvergenceError, ArithmeticError) as exc:
        print(f"decaycascade: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
