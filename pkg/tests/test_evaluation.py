from __future__ import annotations

import filecmp

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artrec.catalog import dump_catalog
from artrec.evaluation import (
    ConfusionMatrix,
    Judgment,
    MissingJudgmentsError,
    SynthSpec,
    accuracy,
    dump_judgments,
    expected_differing_variables,
    index_judgments,
    load_judgments,
    merge_classes,
    precision_at_k,
    random_baseline,
    synth_catalog,
    tune_alpha,
)
from artrec.proximity import l1_distance
from artrec.embedding import encode_artwork
from artrec.recommender import (
    Recommendation,
    RecommendationItem,
    RecommenderConfig,
    build_engine,
    recommend,
)
from conftest import make_artist, make_artwork, make_catalog


def rec_of(query, item_ids, scores=None):
    scores = scores or [1.0 - 0.1 * i for i in range(len(item_ids))]
    return Recommendation(
        query_id=query,
        items=tuple(
            RecommendationItem(artwork_id=i, artist_id=f"artist-{i}", score=s)
            for i, s in zip(item_ids, scores)
        ),
        mode="direct",
        alpha=1.0,
        build_id="test",
    )


class TestPrecisionAtK:
    def test_three_of_five_relevant(self):
        rec = rec_of("q", ["i1", "i2", "i3", "i4", "i5"])
        judgments = [
            Judgment("q", "i1", True),
            Judgment("q", "i2", True),
            Judgment("q", "i3", True),
            Judgment("q", "i4", False),
            Judgment("q", "i5", False),
        ]
        assert precision_at_k([rec], judgments, 5) == pytest.approx(0.6)

    def test_all_relevant_is_one(self):
        rec = rec_of("q", ["i1", "i2"])
        judgments = [Judgment("q", "i1", True), Judgment("q", "i2", True)]
        assert precision_at_k([rec], judgments, 5) == 1.0

    def test_missing_judgment_names_pair(self):
        rec = rec_of("q", ["i1", "i2"])
        judgments = [Judgment("q", "i1", True)]
        with pytest.raises(MissingJudgmentsError, match=r"\(q, i2\)") as err:
            precision_at_k([rec], judgments, 5)
        assert err.value.gaps == [("q", "i2")]

    def test_only_top_k_counted(self):
        rec = rec_of("q", ["i1", "i2", "i3"])
        judgments = [Judgment("q", "i1", True), Judgment("q", "i2", False)]
        assert precision_at_k([rec], judgments, 2) == pytest.approx(0.5)

    def test_duplicate_judgments_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            index_judgments([Judgment("q", "i", True), Judgment("q", "i", False)])

    def test_file_round_trip(self, tmp_path):
        judgments = [Judgment("q1", "i1", True), Judgment("q1", "i2", False)]
        dump_judgments(judgments, tmp_path / "j.jsonl")
        loaded = load_judgments(tmp_path / "j.jsonl")
        assert [(j.query_id, j.item_id, j.relevant) for j in loaded] == [
            ("q1", "i1", True),
            ("q1", "i2", False),
        ]


def uniform_catalog(tiny_schema, tiny_dictionary, n_artists=10, works_per_artist=5):
    artists = [make_artist(f"a{i:02d}", tags=("feminism",)) for i in range(n_artists)]
    works = [
        make_artwork(f"w{i:02d}-{j}", f"a{i:02d}")
        for i in range(n_artists)
        for j in range(works_per_artist)
    ]
    return make_catalog(tiny_schema, tiny_dictionary, works, artists)


class TestRandomBaseline:
    def test_matches_relevance_fraction(self, tiny_schema, tiny_dictionary):
        catalog = uniform_catalog(tiny_schema, tiny_dictionary)
        # every artist's first work is relevant to any query: fraction 1/5
        oracle = lambda q, i: i.endswith("-0")
        got = random_baseline(catalog, oracle, trials=10_000, k=5, seed=3)
        assert got == pytest.approx(0.20, abs=0.02)

    def test_nothing_relevant(self, tiny_schema, tiny_dictionary):
        catalog = uniform_catalog(tiny_schema, tiny_dictionary, 6, 2)
        assert random_baseline(catalog, lambda q, i: False, trials=50, k=5) == 0.0

    def test_everything_relevant(self, tiny_schema, tiny_dictionary):
        catalog = uniform_catalog(tiny_schema, tiny_dictionary, 6, 2)
        assert random_baseline(catalog, lambda q, i: i != q, trials=50, k=5) == 1.0

    def test_within_three_sigma_of_analytic(self, tiny_schema, tiny_dictionary):
        catalog = uniform_catalog(tiny_schema, tiny_dictionary)
        oracle = lambda q, i: i.endswith(("-0", "-1"))  # 40% of each artist's works
        trials, k, p = 4000, 5, 0.4
        got = random_baseline(catalog, oracle, trials=trials, k=k, seed=11)
        sigma = (p * (1 - p) / (trials * k)) ** 0.5
        assert abs(got - p) <= 3 * sigma + 0.01  # small slack for query exclusion


WORKED_COUNTS = np.array([[5, 3, 0], [2, 6, 0], [0, 0, 4]])


class TestConfusionMatrix:
    def test_merge_worked_example(self):
        cm = ConfusionMatrix(labels=("a", "b", "c"), counts=WORKED_COUNTS)
        merged = merge_classes(cm, {"a": "x", "b": "x", "c": "c"})
        assert merged.labels == ("x", "c")
        assert merged.counts.tolist() == [[16, 0], [0, 4]]

    def test_identity_map_unchanged(self):
        cm = ConfusionMatrix(labels=("a", "b", "c"), counts=WORKED_COUNTS)
        merged = merge_classes(cm, {"a": "a", "b": "b", "c": "c"})
        assert merged.labels == cm.labels
        assert np.array_equal(merged.counts, cm.counts)

    def test_accuracy_before_and_after_merge(self):
        cm = ConfusionMatrix(labels=("a", "b", "c"), counts=WORKED_COUNTS)
        assert accuracy(cm) == pytest.approx(0.75)
        merged = merge_classes(cm, {"a": "x", "b": "x", "c": "c"})
        assert accuracy(merged) == pytest.approx(1.0)

    def test_accuracy_extremes(self):
        diag = ConfusionMatrix(labels=("a", "b"), counts=np.diag([3, 4]))
        assert accuracy(diag) == 1.0
        off = ConfusionMatrix(labels=("a", "b"), counts=np.array([[0, 2], [3, 0]]))
        assert accuracy(off) == 0.0

    def test_empty_matrix_rejected(self):
        cm = ConfusionMatrix(labels=("a",), counts=np.zeros((1, 1), dtype=int))
        with pytest.raises(ValueError):
            accuracy(cm)

    def test_non_total_map_rejected(self):
        cm = ConfusionMatrix(labels=("a", "b"), counts=np.diag([1, 1]))
        with pytest.raises(ValueError, match="b"):
            merge_classes(cm, {"a": "x"})

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            ConfusionMatrix(labels=("a",), counts=np.array([[-1]]))


@given(
    counts=st.lists(
        st.lists(st.integers(0, 20), min_size=4, max_size=4), min_size=4, max_size=4
    ),
    grouping=st.lists(st.integers(0, 2), min_size=4, max_size=4),
)
@settings(max_examples=150, deadline=None)
def test_merge_never_decreases_accuracy(counts, grouping):
    matrix = np.array(counts)
    if matrix.sum() == 0:
        matrix[0, 0] = 1
    labels = ("a", "b", "c", "d")
    cm = ConfusionMatrix(labels=labels, counts=matrix)
    merge_map = {label: f"g{g}" for label, g in zip(labels, grouping)}
    assert accuracy(merge_classes(cm, merge_map)) >= accuracy(cm) - 1e-12


class TestTuneAlpha:
    GRID = [round(0.1 * i, 1) for i in range(11)]

    def planted_engine(self, seed=0):
        spec = SynthSpec(
            clusters=4, works_per_cluster=10, artists_per_cluster=5,
            noise=0.25, tag_noise=0.3, variables=8, informative_variables=4,
            seed=seed,
        )
        catalog, _ = synth_catalog(spec)
        return build_engine(catalog, k=8), catalog

    def planted_judgments(self, engine, catalog, alpha_star=0.3, n_queries=10):
        ids = [w.id for w in catalog.artworks]
        queries = ids[:: max(1, len(ids) // n_queries)][:n_queries]
        judgments = []
        for q in queries:
            rec = recommend(engine, q, RecommenderConfig(alpha=alpha_star, k_out=5))
            top = {item.artwork_id for item in rec.items}
            judgments.extend(
                Judgment(q, i, i in top, "oracle") for i in ids if i != q
            )
        return judgments

    def test_recovers_planted_alpha(self):
        engine, catalog = self.planted_engine(seed=0)
        judgments = self.planted_judgments(engine, catalog, alpha_star=0.3)
        best, curve = tune_alpha(engine, judgments, self.GRID, k=5)
        assert abs(best - 0.3) <= 0.1
        assert best in self.GRID
        assert dict(curve)[best] == max(p for _, p in curve)

    def test_single_value_grid(self):
        engine, catalog = self.planted_engine(seed=1)
        judgments = self.planted_judgments(engine, catalog)
        best, curve = tune_alpha(engine, judgments, [0.4], k=5)
        assert best == 0.4
        assert len(curve) == 1

    def test_flat_curve_returns_smallest(self):
        engine, catalog = self.planted_engine(seed=2)
        ids = [w.id for w in catalog.artworks]
        # everything relevant -> precision 1.0 at every alpha
        judgments = [Judgment(ids[0], i, True, "oracle") for i in ids if i != ids[0]]
        best, curve = tune_alpha(engine, judgments, [0.2, 0.5, 0.8], k=5)
        assert best == 0.2
        assert all(p == 1.0 for _, p in curve)

    def test_empty_grid_rejected(self):
        engine, catalog = self.planted_engine(seed=3)
        with pytest.raises(ValueError):
            tune_alpha(engine, [Judgment("x", "y", True)], [], k=5)


class TestSynthCatalog:
    def test_zero_noise_cluster_geometry(self):
        spec = SynthSpec(clusters=5, works_per_cluster=8, artists_per_cluster=4, noise=0.0, seed=1)
        catalog, oracle = synth_catalog(spec)
        vectors = {
            w.id: encode_artwork(w, catalog.schema) for w in catalog.artworks
        }
        ids = [w.id for w in catalog.artworks]
        for q in ids[:10]:
            for i in ids[:10]:
                if q == i:
                    continue
                d = l1_distance(vectors[q], vectors[i])
                if oracle.cluster_of[q] == oracle.cluster_of[i]:
                    assert d == 0.0
                else:
                    assert d > 0.0

    def test_noise_rate_matches_expectation(self):
        spec = SynthSpec(clusters=2, works_per_cluster=80, artists_per_cluster=8, noise=0.1, seed=5)
        catalog, oracle = synth_catalog(spec)
        exact = expected_differing_variables(spec)
        # spec formula approximation 2 p (1-p) V is close to the exact value
        approx_formula = 2 * 0.1 * 0.9 * spec.variables
        assert abs(exact - approx_formula) <= spec.noise**2 * spec.variables

        by_cluster: dict[int, list] = {0: [], 1: []}
        for w in catalog.artworks:
            by_cluster[oracle.cluster_of[w.id]].append(w)
        diffs = []
        for works in by_cluster.values():
            for i in range(0, len(works), 2):
                a, b = works[i], works[i + 1]
                diffs.append(
                    sum(1 for v in a.annotations if a.annotations[v] != b.annotations[v])
                )
        assert np.mean(diffs) == pytest.approx(exact, abs=0.25)

    def test_fixed_seed_identical_bytes(self, tmp_path):
        spec = SynthSpec(clusters=3, works_per_cluster=6, artists_per_cluster=3, noise=0.2, seed=9)
        for name in ("one", "two"):
            catalog, _ = synth_catalog(spec)
            dump_catalog(catalog, tmp_path / name)
        for filename in ("artworks.jsonl", "artists.jsonl", "dictionary.json", "schema.json"):
            assert filecmp.cmp(
                tmp_path / "one" / filename, tmp_path / "two" / filename, shallow=False
            ), filename

    def test_oracle_relevance(self):
        spec = SynthSpec(clusters=2, works_per_cluster=3, artists_per_cluster=3, noise=0.0, seed=0)
        catalog, oracle = synth_catalog(spec)
        ids = [w.id for w in catalog.artworks]
        assert oracle(ids[0], ids[1]) is True  # same cluster
        assert oracle(ids[0], ids[-1]) is False  # different cluster
        assert oracle(ids[0], ids[0]) is False  # never relevant to itself

    def test_degenerate_spec_rejected(self):
        with pytest.raises(ValueError):
            synth_catalog(SynthSpec(clusters=0))
        with pytest.raises(ValueError):
            synth_catalog(SynthSpec(noise=1.0))
