"""End-to-end acceptance checks.

Each test prints one ``PASS`` or ``FAIL`` line for its criterion, visible in
the normal ``pytest -v`` output, and fails the usual way when a check does.
"""

import contextlib
import itertools
import json
import math
import random
import time
from pathlib import Path

import numpy as np
import pytest

from decaycascade.cascade import (
    CascadePath,
    Monotonicity,
    classify_monotonicity,
    extract_cascades,
    monotonicity_profile,
)
from decaycascade.cli import main
from decaycascade.graphcore import (
    FEATURE_NAMES,
    StaticGraph,
    all_pairs_min_cut,
    betweenness_centrality,
    eccentricity,
    edge_betweenness,
    eigenvector_centrality,
    k_core_decomposition,
)
from decaycascade.ingest import generate_synthetic_decay
from decaycascade.metrics import cascade_duration, cascade_similarity, cascade_virality, similarity_matrix
from decaycascade.predict import Dataset, ExperimentConfig, assemble_dataset, run_experiment
from decaycascade.stats import js_divergence, ks_two_sample, shannon_entropy

from helpers import series_from_last_seen, signal_cascades, tree
from oracles import (
    brute_betweenness,
    brute_coreness,
    brute_min_cut,
    brute_wiener_mean,
    distance,
    edge_subset_cut,
    random_graph,
    random_tree_edges,
)


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def verdict(number: int, title: str):
        start = time.perf_counter()
        try:
            yield
        except BaseException:
            line = f"FAIL  criterion {number}: {title}"
            raise
        else:
            line = f"PASS  criterion {number}: {title}"
        finally:
            with capsys.disabled():
                print(f"\n{line} ({time.perf_counter() - start:.2f} s)")

    return verdict


def test_criterion_1_planted_recovery(criterion):
    specs = [(0, 2, 2), (1, 3, 1), (2, 2, 3), (3, 1, 5), (4, 4, 1),
             (5, 14, 1), (6, 3, 2), (7, 1, 1), (8, 2, 1), (9, 1, 0)]
    with criterion(1, "planted-cascade recovery, 10 trees, k=8, < 1 s"):
        start = time.perf_counter()
        syn = generate_synthetic_decay(300, 0.0, specs, 8, seed=2024)
        trees = extract_cascades(syn.series.g0, syn.series)
        elapsed = time.perf_counter() - start
        assert all(len(p.nodes) <= 15 for p in syn.planted)
        got = {t.root: (t.nodes, frozenset(t.edges)) for t in trees}
        want = {p.root: (p.nodes, frozenset(p.edges)) for p in syn.planted}
        assert len(trees) == 10
        assert got == want
        assert elapsed < 1.0


def _extract(nodes, edges, last_seen, k=5):
    g0 = StaticGraph(nodes, edges)
    return extract_cascades(g0, series_from_last_seen(g0, last_seen, k))


def test_criterion_2_hand_traces(criterion):
    with criterion(2, "hand-traced path, triangle and isolated-initiator fixtures"):
        (t,) = _extract("abc", [("a", "b"), ("b", "c")], {"a": 1, "b": 2, "c": 3})
        assert (t.root, set(t.edges), t.size) == ("a", {("a", "b"), ("b", "c")}, 3)

        (t,) = _extract("abc", [("a", "b"), ("b", "c"), ("a", "c")], {"a": 1, "b": 2, "c": 3})
        assert (t.root, set(t.edges)) == ("a", {("a", "b"), ("a", "c")})

        trees = _extract(["x", "y", "p", "q"], [("x", "p"), ("y", "q"), ("p", "q")],
                         {"x": 1, "y": 1, "p": 4, "q": 4})
        assert [(t.root, t.size, t.edges) for t in trees] == [("x", 1, ()), ("y", 1, ())]


def test_criterion_3_virality_oracle(criterion):
    rng = random.Random(3)
    with criterion(3, "virality vs ordered-pair loop (200 trees) and paths (n+1)/3"):
        for _ in range(200):
            n = rng.randint(2, 12)
            edges = random_tree_edges(rng, n)
            got = cascade_virality(tree(edges, root=0))
            assert abs(got - brute_wiener_mean(range(n), edges)) <= 1e-12
        for n in range(2, 11):
            path = tree([(i, i + 1) for i in range(n - 1)])
            assert cascade_virality(path) == (n + 1) / 3


def _eigen_residual(g: StaticGraph) -> float:
    ev = eigenvector_centrality(g)
    comp = max(g.connected_components(), key=len)
    idx = {v: i for i, v in enumerate(comp)}
    a = np.zeros((len(comp), len(comp)))
    for v in comp:
        for w in g.neighbors(v):
            a[idx[v], idx[w]] = 1.0
    x = np.array([ev[v] for v in comp])
    lam = x @ a @ x / (x @ x)
    return float(np.abs(a @ x - lam * x).max())


def test_criterion_4_measure_oracles(criterion):
    rng = random.Random(4)
    with criterion(4, "measures vs brute force on 50 random graphs, eigen residual < 1e-9"):
        for _ in range(50):
            g = random_graph(rng, n_max=10)
            node_bc, edge_bc = brute_betweenness(g)
            assert betweenness_centrality(g) == pytest.approx(node_bc, rel=1e-12, abs=1e-12)
            eb = {frozenset(e): v for e, v in edge_betweenness(g).items()}
            assert eb == pytest.approx(edge_bc, rel=1e-12, abs=1e-12)
            for v in g.nodes:
                reach = [distance(g, v, w) for w in g.nodes]
                assert eccentricity(g, v) == max(d for d in reach if d is not None)
            assert k_core_decomposition(g) == brute_coreness(g)
            cuts = all_pairs_min_cut(g)
            for u, v in itertools.combinations(g.nodes, 2):
                c = brute_min_cut(g, u, v)
                assert cuts[u][v] == cuts[v][u] == c
                assert edge_subset_cut(g, u, v, limit=c) == c
            if g.number_of_edges():
                assert _eigen_residual(g) < 1e-9


def test_criterion_5_statistics(criterion):
    rng = np.random.default_rng(5)
    with criterion(5, "KS and Jensen-Shannon fixtures"):
        a = rng.normal(size=40)
        same = ks_two_sample(a, a.copy())
        assert (same.statistic, same.p_value) == (0.0, 1.0)
        assert ks_two_sample([1, 2, 3], [10, 11]).statistic == 1.0
        p = [0.2, 0.5, 0.3]
        assert js_divergence(p, p) == 0
        assert js_divergence([1, 0], [0, 1]) == pytest.approx(1.0, abs=1e-12)
        assert abs(js_divergence([0.5, 0.5], [1, 0]) - 0.3113) <= 1e-4
        for n in (1, 2, 7, 20, 64):
            assert abs(shannon_entropy(np.full(n, 1 / n)) - math.log2(n)) <= 1e-12


def test_criterion_6_duration_similarity(criterion):
    rng = random.Random(6)
    with criterion(6, "duration and similarity fixtures, symmetric unit-diagonal matrix"):
        assert cascade_duration(tree([("a", "b")], last_seen={"a": 1, "b": 2}), 10) == 0.1
        assert cascade_duration(tree([("a", "b"), ("a", "c")], last_seen={"a": 1, "b": 2, "c": 3}), 10) == 0.15
        assert cascade_duration(tree([("a", "b"), ("a", "c")], last_seen={"a": 1, "b": 1, "c": 1}), 10) == 0
        seven = tree([("a", "b"), ("a", "c"), ("b", "d"), ("b", "e"), ("c", "f"), ("f", "g")])
        assert cascade_similarity(seven, seven) == 1
        assert cascade_similarity(tree([("a", "b"), ("b", "c")]), tree([("r", "x"), ("r", "y")])) == 0
        t1, t2 = tree([("a", "b"), ("a", "c")]), tree([("a", "b"), ("a", "d")])
        assert cascade_similarity(t1, t2) == pytest.approx(2 / 3, abs=1e-15)
        for _ in range(30):
            trees = []
            for cid in range(rng.randint(1, 9)):
                n = rng.randint(1, 7)
                labels = rng.sample(range(14), n)
                edges = [(labels[p], labels[c]) for p, c in random_tree_edges(rng, n)]
                trees.append(tree(edges, cid=cid) if edges else tree([], root=labels[0], last_seen={labels[0]: 1}, cid=cid))
            _, mat = similarity_matrix(trees)
            assert np.array_equal(mat, mat.T)
            assert np.all(np.diag(mat) == 1)


def test_criterion_7_prediction(criterion):
    with criterion(7, "GBR beats baseline by >= 20% on planted signal, 100 runs, < 60 s"):
        start = time.perf_counter()
        trees, measures = signal_cascades(1000, seed=7)
        data = assemble_dataset(trees, measures, "size", site="synthetic")
        report = run_experiment(data, ExperimentConfig(runs=100, seed=7), "size")
        elapsed = time.perf_counter() - start
        s = report.summary()
        assert s["runs"] == 100
        assert s["mae_model_mean"] <= 0.8 * s["mae_baseline_mean"]
        weights = dict(zip(report.feature_names, report.importance))
        assert abs(sum(weights.values()) - 1) <= 1e-9
        assert weights["degree"] + weights["coreness"] > 0.7
        assert elapsed < 60

        rng = np.random.default_rng(70)
        flat = Dataset(rng.random((40, len(FEATURE_NAMES))), np.full(40, 6.0), list(range(40)),
                       ["synthetic"] * 40, FEATURE_NAMES)
        const = run_experiment(flat, ExperimentConfig(runs=100, seed=7))
        assert max(const.mae_model) == 0
        assert max(const.mae_baseline) == 0


def _pipeline(ws: Path) -> None:
    common = ["-w", str(ws), "--k", "8", "--seed", "99"]
    steps = [
        ["synth", "old", "--nodes", "150", "--p-edge", "0.03", "--group", "decayed",
         "--planted", "0:2:2", "--planted", "1:3:1", "--planted", "2:1:4"],
        ["synth", "new", "--nodes", "120", "--p-edge", "0.05", "--group", "alive",
         "--planted", "3:2:2", "--planted", "4:2:1"],
        ["cascades", "old"], ["cascades", "new"],
        ["metrics", "old"], ["metrics", "new"],
        ["compare", "old", "new"],
        ["predict", "old", "new", "--runs", "5", "--top-features", "3"],
        ["predict", "old", "new", "--runs", "5", "--target", "virality"],
        ["report"],
    ]
    for argv in steps:
        assert main([*argv, *common]) == 0, argv


def test_criterion_8_pipeline_determinism(criterion, tmp_path, capsys):
    with criterion(8, "two end-to-end runs give byte-identical reports"):
        one, two = tmp_path / "one", tmp_path / "two"
        _pipeline(one)
        _pipeline(two)
        capsys.readouterr()
        files = sorted(p.relative_to(one) for p in one.rglob("*") if p.suffix in (".csv", ".json", ".jsonl"))
        assert len(files) > 30
        for rel in files:
            assert (one / rel).read_bytes() == (two / rel).read_bytes(), rel
        report = json.loads((one / "predict/size_report.json").read_text())
        assert report["run_config"]["seed"] == 99


def test_criterion_9_monotonicity(criterion):
    with criterion(9, "coreness monotonicity classes and profile sums"):
        cases = {
            (1, 2, 3): Monotonicity.INCREASING,
            (3, 2, 1): Monotonicity.DECREASING,
            (2, 2, 2): Monotonicity.NONMONOTONE,
            (1, 3, 2): Monotonicity.NONMONOTONE,
        }
        for seq, cls in cases.items():
            assert classify_monotonicity(CascadePath(tuple(range(len(seq))), seq)) is cls
        t1 = tree([("r", "a"), ("a", "e"), ("r", "b"), ("r", "c"), ("r", "d")])
        t2 = tree([], root="s", last_seen={"s": 1}, cid=1)
        core = {"r": 2, "a": 3, "e": 3, "b": 1, "c": 2, "d": 4, "s": 5}
        prof = monotonicity_profile([t1, t2], core)
        assert prof == {"increasing": 2 / 5, "decreasing": 1 / 5, "nonmonotone": 2 / 5}
        assert sum(prof.values()) == pytest.approx(1.0, abs=1e-15)
