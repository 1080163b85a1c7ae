"""Blend the visual and contextual artwork graphs, rank from a query
artwork, and select top-k results under the distinct-artist constraint.

Diffusion mode scores candidates by personalized ranking seeded at the
query; direct mode uses the blended one-hop edge weights. Candidates are
ordered by descending score with ties broken by ascending artwork id, and
zero-score candidates are never emitted. The exploration knob trades trailing
greedy picks for seeded random picks from the mid-ranked band.
"""
from __future__ import annotations

import hashlib
import math
import random
import threading
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .catalog import Catalog
from .embedding import (
    AccuracyReport,
    ArtistSpace,
    CvEncodingConfig,
    encode_artworks,
    weights_from_accuracy,
)
from .proximity import (
    GraphError,
    ProximityGraph,
    build_artist_graph,
    build_artwork_graph,
    lift_artist_graph,
)
from .ranking import RankingConfig, personalized_pagerank

MODES = ("diffusion", "direct")

# Exploration picks come from candidates ranked in [2*k_out, 5*k_out) of the
# sorted candidate list (0-based slice).
EXPLORE_BAND_LOW = 2
EXPLORE_BAND_HIGH = 5


class UnknownArtworkError(KeyError):
    def __init__(self, artwork_id: str) -> None:
        super().__init__(artwork_id)
        self.artwork_id = artwork_id

    def __str__(self) -> str:
        return f"unknown artwork {self.artwork_id}"


class StaleEngineError(ValueError):
    """The recommendation was produced by a different engine build."""


@dataclass(frozen=True)
class RecommenderConfig:
    alpha: float = 0.4  # visual share; contextual share is 1 - alpha
    mode: str = "diffusion"
    k_out: int = 5
    exclude_query_artist: bool = True
    exploration: float = 0.0
    seed: int = 0
    ranking: RankingConfig = field(default_factory=RankingConfig)

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0,1]: {self.alpha}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}: {self.mode!r}")
        if self.k_out < 1:
            raise ValueError("k_out must be >= 1")
        if not 0.0 <= self.exploration < 1.0:
            raise ValueError(f"exploration must be in [0,1): {self.exploration}")


@dataclass(frozen=True)
class RecommendationItem:
    artwork_id: str
    artist_id: str
    score: float


@dataclass(frozen=True)
class ItemExplanation:
    artwork_id: str
    shared_variables: tuple[tuple[str, str, float], ...]  # (variable, class, weight)
    shared_tags: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "shared_variables": [
                {"variable": v, "class": c, "weight": w} for v, c, w in self.shared_variables
            ],
            "shared_tags": list(self.shared_tags),
        }


@dataclass(frozen=True)
class Recommendation:
    query_id: str
    items: tuple[RecommendationItem, ...]
    mode: str
    alpha: float
    build_id: str

    def to_dict(self, explanations: Sequence[ItemExplanation] | None = None) -> dict:
        by_id = {e.artwork_id: e for e in explanations} if explanations else {}
        items = []
        for item in self.items:
            entry: dict = {
                "artwork": item.artwork_id,
                "artist": item.artist_id,
                "score": item.score,
            }
            if item.artwork_id in by_id:
                entry["explanation"] = by_id[item.artwork_id].to_dict()
            items.append(entry)
        return {"query": self.query_id, "alpha": self.alpha, "mode": self.mode, "items": items}


@dataclass(frozen=True, eq=False)
class Engine:
    """Immutable built state: catalog, both artwork-level graphs, and the
    artist graph they were lifted from. Safe to share across threads."""

    catalog: Catalog
    visual: ProximityGraph
    contextual: ProximityGraph
    artist_graph: ProximityGraph
    build_id: str
    meta: Mapping[str, object] = field(default_factory=dict)
    _blend_cache: dict = field(default_factory=dict, repr=False)
    _blend_lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def schema(self):
        return self.catalog.schema

    def blended(self, alpha: float) -> ProximityGraph:
        key = round(float(alpha), 12)
        with self._blend_lock:
            cached = self._blend_cache.get(key)
        if cached is not None:
            return cached
        graph = blend_graphs(self.visual, self.contextual, alpha)
        with self._blend_lock:
            self._blend_cache.setdefault(key, graph)
        return graph


def build_engine(
    catalog: Catalog,
    k: int = 10,
    kernel: str = "inverse",
    accuracy_report: AccuracyReport | None = None,
    cv_config: CvEncodingConfig | None = None,
    min_shared_tags: int = 1,
) -> Engine:
    """Encode the catalog and build both graphs. Deterministic: the build id
    is a content hash, so identical inputs give identical engines."""
    schema = catalog.schema
    if accuracy_report is not None:
        schema = weights_from_accuracy(accuracy_report, schema)
        catalog = Catalog(
            schema=schema,
            dictionary=catalog.dictionary,
            artworks=catalog.artworks,
            artists=catalog.artists,
            rejects=catalog.rejects,
        )
    vectors = encode_artworks(catalog.artworks, schema)
    ids = [w.id for w in catalog.artworks]
    visual = build_artwork_graph(vectors, ids, k=k, kernel=kernel)

    space = ArtistSpace.from_artists(catalog.artists, catalog.dictionary, cv_config)
    artist_graph = build_artist_graph(
        list(catalog.artists), catalog.dictionary, min_shared_tags=min_shared_tags
    )
    contextual = lift_artist_graph(artist_graph, catalog)

    build_id = _content_hash(schema, visual, contextual, k, kernel)
    meta = {
        "k": k,
        "kernel": kernel,
        "artworks": len(catalog.artworks),
        "artists": len(catalog.artists),
        "schema_space_id": vectors[0].space_id if vectors else "",
        "artist_space_id": space.space_id,
        "min_shared_tags": min_shared_tags,
    }
    return Engine(
        catalog=catalog,
        visual=visual,
        contextual=contextual,
        artist_graph=artist_graph,
        build_id=build_id,
        meta=meta,
    )


def _content_hash(schema, visual, contextual, k, kernel) -> str:
    h = hashlib.sha256()
    h.update(repr(schema.to_dict()).encode())
    for graph in (visual, contextual):
        coo = graph.matrix.tocoo()
        h.update(coo.row.tobytes())
        h.update(coo.col.tobytes())
        h.update(coo.data.tobytes())
        h.update("\x00".join(graph.node_ids).encode())
    h.update(f"{k}|{kernel}".encode())
    return h.hexdigest()[:16]


def blend_graphs(
    visual: ProximityGraph, contextual: ProximityGraph, alpha: float
) -> ProximityGraph:
    """alpha * visual + (1-alpha) * contextual, each max-normalized first.

    Zero-weight edges are dropped, so alpha=1 reproduces the normalized
    visual graph exactly and alpha=0 the contextual one.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0,1]: {alpha}")
    if visual.node_ids != contextual.node_ids:
        raise GraphError("node-set mismatch between visual and contextual graphs")
    v = visual.normalized().matrix
    c = contextual.normalized().matrix
    blended = alpha * v + (1.0 - alpha) * c
    meta = {"kind": "blended", "alpha": alpha}
    return ProximityGraph(node_ids=visual.node_ids, matrix=blended, meta=meta)


def recommend(engine: Engine, query_id: str, config: RecommenderConfig | None = None) -> Recommendation:
    """Top-k recommendations for one query artwork.

    Greedy selection walks the score-ordered candidates, skipping the query,
    any artwork whose artist was already selected, and (by default) the
    query's own artist. With exploration > 0 the trailing slots are filled
    from the mid-ranked band using the seeded generator; the distinct-artist
    rule still applies. Stops at k_out or candidate exhaustion.
    """
    config = config or RecommenderConfig()
    blended = engine.blended(config.alpha)
    if query_id not in blended.index:
        raise UnknownArtworkError(query_id)
    if blended.n == 0:
        raise GraphError("empty graph")

    if config.mode == "diffusion":
        scores = personalized_pagerank(blended, [query_id], config.ranking).probs
    else:
        scores = blended.row_scores(query_id)

    artist_of = engine.catalog.artist_of
    query_artist = artist_of[query_id]
    candidates = sorted(
        ((artwork_id, score) for artwork_id, score in scores.items()
         if artwork_id != query_id and score > 0),
        key=lambda kv: (-kv[1], kv[0]),
    )

    def selectable(artwork_id: str, used_artists: set[str]) -> bool:
        artist = artist_of[artwork_id]
        if artist in used_artists:
            return False
        if config.exclude_query_artist and artist == query_artist:
            return False
        return True

    picked: list[tuple[str, float]] = []
    used_artists: set[str] = set()
    picked_ids: set[str] = set()

    greedy_target = (
        config.k_out
        if config.exploration == 0.0
        else math.ceil((1.0 - config.exploration) * config.k_out)
    )
    for artwork_id, score in candidates:
        if len(picked) >= greedy_target:
            break
        if selectable(artwork_id, used_artists):
            picked.append((artwork_id, score))
            used_artists.add(artist_of[artwork_id])
            picked_ids.add(artwork_id)

    if config.exploration > 0.0 and len(picked) < config.k_out:
        band = candidates[EXPLORE_BAND_LOW * config.k_out : EXPLORE_BAND_HIGH * config.k_out]
        rng = random.Random(config.seed)
        pool = [entry for entry in band if entry[0] not in picked_ids]
        rng.shuffle(pool)
        for artwork_id, score in pool:
            if len(picked) >= config.k_out:
                break
            if selectable(artwork_id, used_artists):
                picked.append((artwork_id, score))
                used_artists.add(artist_of[artwork_id])
                picked_ids.add(artwork_id)
        # Band exhausted but slots remain: continue greedily.
        for artwork_id, score in candidates:
            if len(picked) >= config.k_out:
                break
            if artwork_id not in picked_ids and selectable(artwork_id, used_artists):
                picked.append((artwork_id, score))
                used_artists.add(artist_of[artwork_id])
                picked_ids.add(artwork_id)

    items = tuple(
        RecommendationItem(artwork_id=a, artist_id=artist_of[a], score=float(s))
        for a, s in picked
    )
    return Recommendation(
        query_id=query_id,
        items=items,
        mode=config.mode,
        alpha=config.alpha,
        build_id=engine.build_id,
    )


def explain(recommendation: Recommendation, engine: Engine) -> list[ItemExplanation]:
    """Per item: up to 3 shared annotation variables (same class, by weight)
    and up to 3 dictionary tags shared with the query's artist."""
    if recommendation.build_id != engine.build_id:
        raise StaleEngineError(
            f"recommendation from build {recommendation.build_id}, engine is {engine.build_id}"
        )
    catalog = engine.catalog
    query = catalog.artwork_by_id[recommendation.query_id]
    query_artist = catalog.artist_by_id[query.artist_id]
    dictionary = catalog.dictionary

    explanations = []
    for item in recommendation.items:
        work = catalog.artwork_by_id[item.artwork_id]
        shared_vars = [
            (name, label, catalog.schema.by_name[name].weight)
            for name, label in query.annotations.items()
            if work.annotations.get(name) == label
        ]
        shared_vars.sort(key=lambda t: (-t[2], t[0]))

        item_artist = catalog.artist_by_id[item.artist_id]
        shared_tags = sorted(
            query_artist.tags & item_artist.tags,
            key=lambda tag: (-dictionary.keyword_weight(tag), tag),
        )
        explanations.append(
            ItemExplanation(
                artwork_id=item.artwork_id,
                shared_variables=tuple(shared_vars[:3]),
                shared_tags=tuple(shared_tags[:3]),
            )
        )
    return explanations
