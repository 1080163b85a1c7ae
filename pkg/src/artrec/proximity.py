"""Proximity graphs: L1 kNN graph over artwork vectors, shared-tag graph
over artists, and the authorship lift from artist edges to artwork edges.

All graphs are symmetric, nonnegative and zero-diagonal. kNN neighbor ties
are broken by ascending node index so builds are deterministic.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .catalog import ArtDictionary, ArtistRecord, Catalog
from .embedding import FeatureVector, require_same_space

KERNELS = ("inverse", "linear")


class GraphError(ValueError):
    pass


def l1_distance(a: FeatureVector, b: FeatureVector) -> float:
    """Sum of absolute coordinate differences; both vectors must share a space."""
    require_same_space(a, b)
    return float(np.abs(a.values - b.values).sum())


@dataclass(frozen=True, eq=False)
class ProximityGraph:
    """Symmetric weighted graph over opaque node ids, stored sparse."""

    node_ids: tuple[str, ...]
    matrix: sp.csr_matrix
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        m = sp.csr_matrix(self.matrix, dtype=np.float64, copy=False)
        m.eliminate_zeros()
        if m.shape != (len(self.node_ids), len(self.node_ids)):
            raise GraphError("matrix shape does not match node count")
        if m.diagonal().any():
            raise GraphError("graph has self-loops")
        if (m != m.T).nnz != 0:
            raise GraphError("graph is not symmetric")
        if m.nnz and m.data.min() < 0:
            raise GraphError("graph has negative weights")
        object.__setattr__(self, "matrix", m)

    @cached_property
    def index(self) -> dict[str, int]:
        return {node_id: i for i, node_id in enumerate(self.node_ids)}

    @property
    def n(self) -> int:
        return len(self.node_ids)

    @property
    def edge_count(self) -> int:
        return self.matrix.nnz // 2

    def weight(self, a: str, b: str) -> float:
        return float(self.matrix[self.index[a], self.index[b]])

    def max_weight(self) -> float:
        return float(self.matrix.data.max()) if self.matrix.nnz else 0.0

    def normalized(self) -> "ProximityGraph":
        """Weights divided by the maximum weight (no-op on empty graphs)."""
        top = self.max_weight()
        if top <= 0:
            return self
        return ProximityGraph(self.node_ids, self.matrix / top, dict(self.meta))

    def neighbors(self, node_id: str) -> list[tuple[str, float]]:
        i = self.index[node_id]
        row = self.matrix.getrow(i)
        return [(self.node_ids[j], float(w)) for j, w in zip(row.indices, row.data)]

    def row_scores(self, node_id: str) -> dict[str, float]:
        """Edge weights from one node, as an id -> weight map (zeros omitted)."""
        return dict(self.neighbors(node_id))


def build_artwork_graph(
    vectors: Sequence[FeatureVector],
    ids: Sequence[str],
    k: int = 10,
    kernel: str = "inverse",
) -> ProximityGraph:
    """k-nearest-neighbor graph under L1 distance, symmetrized by max.

    inverse kernel: w = 1/(1+d). linear kernel: w = 1 - d/d_max over retained
    edges (the farthest retained pair gets weight 0 and drops out).
    """
    if kernel not in KERNELS:
        raise GraphError(f"unknown kernel {kernel!r}")
    if len(vectors) != len(ids):
        raise GraphError("vectors and ids length mismatch")
    n = len(vectors)
    if n < 2:
        raise GraphError("need at least 2 artworks to build a graph")
    if len(set(ids)) != n:
        raise GraphError("duplicate node ids")
    space = vectors[0].space_id
    for v in vectors[1:]:
        if v.space_id != space:
            raise GraphError("vectors from different spaces")
    if k < 1:
        raise GraphError("k must be positive")
    if k >= n:
        warnings.warn(f"k={k} >= {n} nodes, clamping to {n - 1}", stacklevel=2)
        k = n - 1

    data = np.stack([v.values for v in vectors])
    dist = _pairwise_l1(data)

    rows: list[int] = []
    cols: list[int] = []
    dists: list[float] = []
    order_index = np.arange(n)
    for i in range(n):
        # Stable order by (distance, node index); self excluded.
        order = np.lexsort((order_index, dist[i]))
        picked = 0
        for j in order:
            if j == i:
                continue
            rows.append(i)
            cols.append(int(j))
            dists.append(float(dist[i, j]))
            picked += 1
            if picked == k:
                break

    dists_arr = np.array(dists)
    if kernel == "inverse":
        weights = 1.0 / (1.0 + dists_arr)
    else:
        d_max = dists_arr.max() if len(dists_arr) else 0.0
        weights = 1.0 - dists_arr / d_max if d_max > 0 else np.ones_like(dists_arr)

    directed = sp.csr_matrix((weights, (rows, cols)), shape=(n, n))
    symmetric = directed.maximum(directed.T)
    meta = {"kind": "artwork-l1-knn", "k": k, "kernel": kernel, "space_id": space}
    return ProximityGraph(node_ids=tuple(ids), matrix=symmetric, meta=meta)


def _pairwise_l1(data: np.ndarray) -> np.ndarray:
    # cdist(cityblock) equivalent; kept local so the exhaustive test oracle
    # can stay a genuinely independent implementation.
    from scipy.spatial.distance import cdist

    return cdist(data, data, metric="cityblock")


def build_artist_graph(
    artists: Sequence[ArtistRecord],
    dictionary: ArtDictionary,
    min_shared_tags: int = 1,
) -> ProximityGraph:
    """Connect artists sharing at least ``min_shared_tags`` dictionary tags.

    Edge weight is the category-weight sum over shared tags, divided by the
    maximum such sum so weights land in (0, 1].
    """
    if len(artists) < 2:
        raise GraphError("need at least 2 artists to build a graph")
    ids = [a.id for a in artists]
    if len(set(ids)) != len(ids):
        raise GraphError("duplicate artist ids")
    if min_shared_tags < 1:
        raise GraphError("min_shared_tags must be >= 1")

    by_keyword: dict[str, list[int]] = {}
    for i, artist in enumerate(artists):
        for tag in artist.tags:
            by_keyword.setdefault(tag, []).append(i)

    weight_sum: dict[tuple[int, int], float] = {}
    shared_count: dict[tuple[int, int], int] = {}
    for tag, members in by_keyword.items():
        w = dictionary.keyword_weight(tag)
        for a_pos in range(len(members)):
            for b_pos in range(a_pos + 1, len(members)):
                pair = (members[a_pos], members[b_pos])
                weight_sum[pair] = weight_sum.get(pair, 0.0) + w
                shared_count[pair] = shared_count.get(pair, 0) + 1

    kept = {
        pair: w
        for pair, w in weight_sum.items()
        if shared_count[pair] >= min_shared_tags and w > 0
    }
    top = max(kept.values(), default=0.0)

    n = len(artists)
    rows, cols, vals = [], [], []
    for (i, j), w in kept.items():
        normalized = w / top
        rows += [i, j]
        cols += [j, i]
        vals += [normalized, normalized]
    matrix = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    meta = {"kind": "artist-tags", "min_shared_tags": min_shared_tags}
    return ProximityGraph(node_ids=tuple(ids), matrix=matrix, meta=meta)


def lift_artist_graph(artist_graph: ProximityGraph, catalog: Catalog) -> ProximityGraph:
    """Project artist edges onto artwork pairs via authorship.

    Works by the same artist get weight 1; works by different artists get the
    artist-graph weight between their artists (no edge when that is 0).
    """
    works = catalog.artworks
    works_by_artist: dict[str, list[int]] = {}
    for i, work in enumerate(works):
        if work.artist_id not in artist_graph.index:
            raise GraphError(f"unresolved artist {work.artist_id} for artwork {work.id}")
        works_by_artist.setdefault(work.artist_id, []).append(i)

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []

    for members in works_by_artist.values():
        for a_pos in range(len(members)):
            for b_pos in range(a_pos + 1, len(members)):
                i, j = members[a_pos], members[b_pos]
                rows += [i, j]
                cols += [j, i]
                vals += [1.0, 1.0]

    artist_ids = list(works_by_artist)
    am = artist_graph.matrix
    for a_pos in range(len(artist_ids)):
        for b_pos in range(a_pos + 1, len(artist_ids)):
            w = float(
                am[
                    artist_graph.index[artist_ids[a_pos]],
                    artist_graph.index[artist_ids[b_pos]],
                ]
            )
            if w <= 0:
                continue
            for i in works_by_artist[artist_ids[a_pos]]:
                for j in works_by_artist[artist_ids[b_pos]]:
                    rows += [i, j]
                    cols += [j, i]
                    vals += [w, w]

    n = len(works)
    matrix = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    meta = {"kind": "lifted-artist", "source": dict(artist_graph.meta)}
    return ProximityGraph(
        node_ids=tuple(w.id for w in works), matrix=matrix, meta=meta
    )


# ---------------------------------------------------------------------------
# Graph files: <name>.meta.json (node ids + meta) and <name>.edges.tsv
# (one undirected edge per line, "id_i<TAB>id_j<TAB>weight").


def save_graph(graph: ProximityGraph, directory: str | Path, name: str) -> None:
    base = Path(directory)
    base.mkdir(parents=True, exist_ok=True)
    header = {"node_ids": list(graph.node_ids), "meta": dict(graph.meta)}
    with open(base / f"{name}.meta.json", "w", encoding="utf-8") as fh:
        json.dump(header, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    coo = graph.matrix.tocoo()
    with open(base / f"{name}.edges.tsv", "w", encoding="utf-8") as fh:
        for i, j, w in zip(coo.row, coo.col, coo.data):
            if i < j:
                fh.write(f"{graph.node_ids[i]}\t{graph.node_ids[j]}\t{float(w)!r}\n")


def load_graph(directory: str | Path, name: str) -> ProximityGraph:
    base = Path(directory)
    with open(base / f"{name}.meta.json", encoding="utf-8") as fh:
        header = json.load(fh)
    node_ids = tuple(str(x) for x in header["node_ids"])
    index = {node_id: i for i, node_id in enumerate(node_ids)}
    seen: dict[tuple[int, int], float] = {}
    with open(base / f"{name}.edges.tsv", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise GraphError(f"{name}.edges.tsv line {lineno}: expected 3 fields")
            a, b, w_str = parts
            if a not in index or b not in index:
                raise GraphError(f"{name}.edges.tsv line {lineno}: unknown node id")
            i, j = index[a], index[b]
            if i == j:
                raise GraphError(f"{name}.edges.tsv line {lineno}: self-loop")
            w = float(w_str)
            key = (min(i, j), max(i, j))
            if key in seen and seen[key] != w:
                raise GraphError(
                    f"{name}.edges.tsv line {lineno}: asymmetric duplicate edge {a}-{b}"
                )
            seen[key] = w
    rows, cols, vals = [], [], []
    for (i, j), w in seen.items():
        rows += [i, j]
        cols += [j, i]
        vals += [w, w]
    matrix = sp.csr_matrix((vals, (rows, cols)), shape=(len(node_ids), len(node_ids)))
    return ProximityGraph(node_ids=node_ids, matrix=matrix, meta=header.get("meta", {}))
