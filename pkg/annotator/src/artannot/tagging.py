"""Artist tagging: cosine similarity between dictionary keyword phrases and
each artist's document embedding (mean over their texts).

The built-in hashing encoder is deterministic and fully offline; any encoder
with an ``encode(texts) -> (n, d) array`` method can be swapped in.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Protocol, Sequence

import numpy as np
from sklearn.feature_extraction.text import HashingVectorizer


class TextEncoder(Protocol):
    def encode(self, texts: Sequence[str]) -> np.ndarray: ...


class HashingTextEncoder:
    """Token-hashing bag-of-words embedding, L2-normalized.

    Identical texts get cosine 1; texts with disjoint vocabulary get cosine 0
    (up to hash collisions, negligible at this dimensionality).
    """

    def __init__(self, dim: int = 4096) -> None:
        self._vectorizer = HashingVectorizer(
            n_features=dim, alternate_sign=False, norm="l2"
        )

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        return np.asarray(self._vectorizer.transform(list(texts)).todense())


@dataclass(frozen=True)
class TagAssignment:
    artist_id: str
    tag: str
    score: float  # cosine similarity in [-1, 1]
    accepted: bool

    def __post_init__(self) -> None:
        if not -1.0 - 1e-9 <= self.score <= 1.0 + 1e-9:
            raise ValueError(f"cosine score outside [-1,1]: {self.score}")


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def tag_artists(
    documents_by_artist: Mapping[str, Sequence[str]],
    keywords: Sequence[str],
    encoder: TextEncoder,
    threshold: float = 0.35,
    exclude: frozenset[str] | set[str] = frozenset(),
) -> tuple[list[TagAssignment], list[str]]:
    """Score every (artist, keyword) pair; accept at or above the threshold.

    Keywords on the exclusion list are never emitted. Artists without
    documents get no assignments and are returned in the report list.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0,1): {threshold}")
    active = [kw for kw in keywords if kw not in exclude]
    assignments: list[TagAssignment] = []
    undocumented: list[str] = []
    if not active:
        return assignments, sorted(
            a for a, docs in documents_by_artist.items() if not docs
        )
    keyword_vectors = encoder.encode(active)
    for artist_id in sorted(documents_by_artist):
        documents = [d for d in documents_by_artist[artist_id] if d.strip()]
        if not documents:
            undocumented.append(artist_id)
            continue
        profile = encoder.encode(documents).mean(axis=0)
        for keyword, vector in zip(active, keyword_vectors):
            score = cosine(vector, profile)
            assignments.append(
                TagAssignment(
                    artist_id=artist_id,
                    tag=keyword,
                    score=score,
                    accepted=score >= threshold,
                )
            )
    return assignments, undocumented


def read_dictionary_keywords(path: str | Path) -> dict[str, list[str]]:
    """Category -> keywords from an engine dictionary.json file."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return {str(c): [str(k) for k in kws] for c, kws in raw["categories"].items()}
