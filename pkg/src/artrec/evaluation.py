"""Evaluation machinery: precision@k against relevance judgments, a random
distinct-artist baseline, confusion-matrix class merging, blend-weight
tuning, and synthetic planted-cluster catalogs with a membership oracle.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .catalog import (
    AnnotationSchema,
    ArtDictionary,
    ArtistRecord,
    ArtworkRecord,
    Catalog,
    CvEvent,
    SchemaVariable,
)
from .recommender import Engine, Recommendation, RecommenderConfig, recommend


class MissingJudgmentsError(ValueError):
    """Recommended items lacked judgments; ``gaps`` lists (query, item)."""

    def __init__(self, gaps: list[tuple[str, str]]) -> None:
        self.gaps = gaps
        listed = ", ".join(f"({q}, {i})" for q, i in gaps[:10])
        suffix = "" if len(gaps) <= 10 else f" and {len(gaps) - 10} more"
        super().__init__(f"missing judgments for: {listed}{suffix}")


@dataclass(frozen=True)
class Judgment:
    query_id: str
    item_id: str
    relevant: bool
    source: str = "expert-file"


def index_judgments(judgments: Iterable[Judgment]) -> dict[tuple[str, str], bool]:
    index: dict[tuple[str, str], bool] = {}
    for j in judgments:
        key = (j.query_id, j.item_id)
        if key in index:
            raise ValueError(f"duplicate judgment for {key}")
        index[key] = j.relevant
    return index


def load_judgments(path: str | Path) -> list[Judgment]:
    """Read a JSON-lines judgments file ({query, item, relevant} per line)."""
    judgments = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            raw = json.loads(line)
            judgments.append(
                Judgment(
                    query_id=str(raw["query"]),
                    item_id=str(raw["item"]),
                    relevant=bool(raw["relevant"]),
                    source=str(raw.get("source", "expert-file")),
                )
            )
    index_judgments(judgments)  # reject duplicates early
    return judgments


def dump_judgments(judgments: Iterable[Judgment], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for j in judgments:
            fh.write(
                json.dumps(
                    {"query": j.query_id, "item": j.item_id, "relevant": j.relevant},
                    ensure_ascii=False,
                )
            )
            fh.write("\n")


def precision_at_k(
    recs: Sequence[Recommendation],
    judgments: Iterable[Judgment] | Mapping[tuple[str, str], bool],
    k: int,
) -> float:
    """Fraction of judged-relevant items among everything in the top-k lists.

    Every item in the top-k of every recommendation must have a judgment;
    the error lists the gaps otherwise.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    index = judgments if isinstance(judgments, Mapping) else index_judgments(judgments)
    gaps: list[tuple[str, str]] = []
    hits = 0
    total = 0
    for rec in recs:
        for item in rec.items[:k]:
            key = (rec.query_id, item.artwork_id)
            if key not in index:
                gaps.append(key)
                continue
            total += 1
            if index[key]:
                hits += 1
    if gaps:
        raise MissingJudgmentsError(gaps)
    if total == 0:
        raise ValueError("no recommended items to score")
    return hits / total


RelevanceOracle = Callable[[str, str], bool]


def random_baseline(
    catalog: Catalog,
    oracle: RelevanceOracle,
    trials: int,
    k: int = 5,
    seed: int = 0,
) -> float:
    """Mean precision@k of uniformly random distinct-artist selections.

    Each trial: a uniform query artwork, then k distinct artists uniformly
    among those with at least one selectable work (the query artwork itself
    is never selectable), then one uniform work per chosen artist.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    works = catalog.artworks
    works_by_artist: dict[str, list[str]] = {}
    for w in works:
        works_by_artist.setdefault(w.artist_id, []).append(w.id)
    artist_ids = sorted(works_by_artist)

    precisions = np.empty(trials)
    for t in range(trials):
        query = works[int(rng.integers(len(works)))].id
        eligible = [
            a for a in artist_ids
            if any(wid != query for wid in works_by_artist[a])
        ]
        take = min(k, len(eligible))
        chosen = rng.choice(len(eligible), size=take, replace=False)
        relevant = 0
        for idx in chosen:
            pool = [wid for wid in works_by_artist[eligible[int(idx)]] if wid != query]
            pick = pool[int(rng.integers(len(pool)))]
            if oracle(query, pick):
                relevant += 1
        precisions[t] = relevant / take if take else 0.0
    return float(precisions.mean())


# ---------------------------------------------------------------------------
# Confusion matrices


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Square count matrix; rows are true classes, columns predictions."""

    labels: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self) -> None:
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise ValueError("confusion matrix must be square")
        if counts.shape[0] != len(self.labels):
            raise ValueError("labels length must match matrix size")
        if (counts < 0).any():
            raise ValueError("counts must be nonnegative")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)


def accuracy(cm: ConfusionMatrix) -> float:
    """Trace over total count."""
    total = int(cm.counts.sum())
    if total == 0:
        raise ValueError("empty confusion matrix")
    return float(np.trace(cm.counts)) / total


def merge_classes(cm: ConfusionMatrix, merge_map: Mapping[str, str]) -> ConfusionMatrix:
    """Coarsen classes by summing merged rows and columns.

    The map must cover every label; new labels are ordered by first
    appearance along the old label order.
    """
    missing = [label for label in cm.labels if label not in merge_map]
    if missing:
        raise ValueError(f"merge map does not cover labels: {missing}")
    new_labels: list[str] = []
    for label in cm.labels:
        target = merge_map[label]
        if target not in new_labels:
            new_labels.append(target)
    position = {label: i for i, label in enumerate(new_labels)}
    merged = np.zeros((len(new_labels), len(new_labels)), dtype=np.int64)
    for r, row_label in enumerate(cm.labels):
        for c, col_label in enumerate(cm.labels):
            merged[position[merge_map[row_label]], position[merge_map[col_label]]] += cm.counts[r, c]
    return ConfusionMatrix(labels=tuple(new_labels), counts=merged)


def load_merge_map(path: str | Path) -> dict[str, str]:
    """Read a JSON old-label -> new-label map (the shipped style grouping)."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return {str(k): str(v) for k, v in raw.items()}


# ---------------------------------------------------------------------------
# Blend-weight tuning


def tune_alpha(
    engine: Engine,
    judgments: Iterable[Judgment],
    grid: Sequence[float],
    k: int = 5,
    mode: str = "diffusion",
) -> tuple[float, list[tuple[float, float]]]:
    """Evaluate precision@k over the alpha grid; queries come from the
    judgments. Returns (best alpha, curve); ties go to the smaller alpha."""
    if not grid:
        raise ValueError("alpha grid must be non-empty")
    for a in grid:
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"alpha {a} outside [0,1]")
    index = index_judgments(judgments)
    queries = sorted({q for q, _ in index})
    if not queries:
        raise ValueError("judgments name no queries")

    curve: list[tuple[float, float]] = []
    best_alpha: float | None = None
    best_precision = -1.0
    for alpha in grid:
        config = RecommenderConfig(alpha=alpha, mode=mode, k_out=k, exploration=0.0)
        recs = [recommend(engine, q, config) for q in queries]
        precision = precision_at_k(recs, index, k)
        curve.append((float(alpha), precision))
        if precision > best_precision:
            best_precision = precision
            best_alpha = float(alpha)
    assert best_alpha is not None
    return best_alpha, curve


def dump_curve(curve: Sequence[tuple[float, float]], path_or_file) -> None:
    """Write an (alpha, precision) curve as CSV."""
    own = isinstance(path_or_file, (str, Path))
    fh = open(path_or_file, "w", encoding="utf-8", newline="") if own else path_or_file
    try:
        writer = csv.writer(fh)
        writer.writerow(["alpha", "precision"])
        for alpha, precision in curve:
            writer.writerow([f"{alpha:g}", f"{precision:.6f}"])
    finally:
        if own:
            fh.close()


# ---------------------------------------------------------------------------
# Synthetic planted-cluster catalogs


@dataclass(frozen=True)
class SyntheticOracle:
    """Cluster-membership relevance: item relevant iff same planted cluster."""

    cluster_of: Mapping[str, int]

    def __call__(self, query_id: str, item_id: str) -> bool:
        if item_id == query_id:
            return False
        return self.cluster_of[query_id] == self.cluster_of[item_id]

    def judgments(self, catalog: Catalog) -> list[Judgment]:
        """Materialized judgments for every (query, item) artwork pair."""
        ids = [w.id for w in catalog.artworks]
        return [
            Judgment(query_id=q, item_id=i, relevant=self(q, i), source="oracle")
            for q in ids
            for i in ids
            if i != q
        ]


@dataclass(frozen=True)
class SynthSpec:
    """Knobs for the planted-cluster generator.

    ``informative_variables`` of the ``variables`` total carry the cluster
    signal; the rest share one class across clusters and only add noise
    surface. ``tag_noise`` defaults to the annotation noise rate.
    """

    clusters: int = 5
    works_per_cluster: int = 40
    artists_per_cluster: int = 10
    noise: float = 0.1
    seed: int = 0
    tag_noise: float | None = None
    variables: int = 10
    classes_per_variable: int | None = None
    informative_variables: int | None = None
    tags_per_artist: int = 3


def synth_catalog(spec: SynthSpec) -> tuple[Catalog, SyntheticOracle]:
    """Generate a deterministic clustered catalog plus its relevance oracle.

    Artwork annotations are cluster prototypes with per-variable flip
    probability ``noise``; artist tags, city and venue are cluster-typical
    with swap probability ``tag_noise``.
    """
    if spec.clusters < 1:
        raise ValueError("need at least 1 cluster")
    if not 0.0 <= spec.noise < 1.0:
        raise ValueError("noise rate must be in [0,1)")
    tag_noise = spec.noise if spec.tag_noise is None else spec.tag_noise
    if not 0.0 <= tag_noise < 1.0:
        raise ValueError("tag noise rate must be in [0,1)")
    n_classes = spec.classes_per_variable or max(4, spec.clusters)
    informative = (
        spec.variables if spec.informative_variables is None else spec.informative_variables
    )
    if not 0 < informative <= spec.variables:
        raise ValueError("informative_variables must be in 1..variables")
    if n_classes < spec.clusters and informative:
        raise ValueError("classes_per_variable must be >= clusters")

    rng = np.random.default_rng(spec.seed)

    variables = tuple(
        SchemaVariable(
            name=f"v{v:02d}",
            classes=tuple(f"c{c}" for c in range(n_classes)),
            weight=1.0,
        )
        for v in range(spec.variables)
    )
    schema = AnnotationSchema(variables=variables)

    cluster_tags = {
        c: [f"tag-{c}-{t}" for t in range(spec.tags_per_artist)]
        for c in range(spec.clusters)
    }
    all_tags = [t for c in range(spec.clusters) for t in cluster_tags[c]]
    dictionary = ArtDictionary(
        categories={"themes": tuple(all_tags)},
        category_weights={"themes": 1.0},
    )

    def swap_cluster(c: int) -> int:
        others = [o for o in range(spec.clusters) if o != c]
        return int(others[int(rng.integers(len(others)))]) if others else c

    artists: list[ArtistRecord] = []
    for c in range(spec.clusters):
        for i in range(spec.artists_per_cluster):
            tags = []
            for t in range(spec.tags_per_artist):
                source = swap_cluster(c) if rng.random() < tag_noise else c
                tags.append(cluster_tags[source][t])
            city_cluster = swap_cluster(c) if rng.random() < tag_noise else c
            venue_cluster = swap_cluster(c) if rng.random() < tag_noise else c
            artists.append(
                ArtistRecord(
                    id=f"artist-{c}-{i:02d}",
                    name=f"Artist {c}.{i}",
                    birth_year=1950 + 4 * c + i % 10,
                    working_cities=frozenset({f"city-{city_cluster}"}),
                    cv_events=(
                        CvEvent("exhibition", f"venue-{venue_cluster}", 2015),
                        CvEvent("biennial", f"venue-{venue_cluster}", 2018),
                    ),
                    tags=frozenset(tags),
                )
            )

    prototype = {
        c: [c if v < informative else 0 for v in range(spec.variables)]
        for c in range(spec.clusters)
    }

    works: list[ArtworkRecord] = []
    cluster_of: dict[str, int] = {}
    for c in range(spec.clusters):
        for j in range(spec.works_per_cluster):
            annotations = {}
            for v in range(spec.variables):
                cls = prototype[c][v]
                if rng.random() < spec.noise:
                    offset = 1 + int(rng.integers(n_classes - 1))
                    cls = (cls + offset) % n_classes
                annotations[f"v{v:02d}"] = f"c{cls}"
            work_id = f"work-{c}-{j:03d}"
            works.append(
                ArtworkRecord(
                    id=work_id,
                    artist_id=f"artist-{c}-{j % spec.artists_per_cluster:02d}",
                    title=f"Work {c}.{j}",
                    year=2000 + j % 20,
                    annotations=annotations,
                )
            )
            cluster_of[work_id] = c

    catalog = Catalog(
        schema=schema,
        dictionary=dictionary,
        artworks=tuple(works),
        artists=tuple(artists),
    )
    return catalog, SyntheticOracle(cluster_of=dict(cluster_of))


def synth_from_args(
    clusters: int,
    works_per_cluster: int,
    noise: float,
    seed: int,
    artists_per_cluster: int = 10,
    tag_noise: float | None = None,
) -> tuple[Catalog, SyntheticOracle]:
    spec = SynthSpec(
        clusters=clusters,
        works_per_cluster=works_per_cluster,
        artists_per_cluster=artists_per_cluster,
        noise=noise,
        seed=seed,
        tag_noise=tag_noise,
    )
    return synth_catalog(spec)


def expected_differing_variables(spec: SynthSpec) -> float:
    """Exact expected number of differing variables between two same-cluster
    works: per variable, exactly one flip always differs, two flips differ
    unless they land on the same class."""
    p = spec.noise
    m = spec.classes_per_variable or max(4, spec.clusters)
    per_variable = 2 * p * (1 - p) + p * p * (m - 2) / (m - 1)
    return spec.variables * per_variable
