"""Weighted one-hot feature encoding for artworks and artists.

Artwork vectors follow the schema's block layout: one block per variable, the
annotated class position carries the variable's weight, unannotated blocks
stay all-zero. Artist vectors concatenate a dictionary-tag block (scaled by
category weights) with birth-decade, working-city and frequent-venue blocks.
"""
from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .catalog import AnnotationSchema, ArtDictionary, ArtistRecord, ArtworkRecord


class SpaceMismatchError(ValueError):
    """Two vectors (or a vector and a space) belong to different spaces."""


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """A dense nonnegative vector bound to the space that produced it."""

    values: np.ndarray
    space_id: str

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.shape[0])


def require_same_space(a: FeatureVector, b: FeatureVector) -> None:
    if a.space_id != b.space_id:
        raise SpaceMismatchError(f"space mismatch: {a.space_id} vs {b.space_id}")


def _digest(prefix: str, payload: object) -> str:
    blob = json.dumps(payload, sort_keys=True, ensure_ascii=False).encode("utf-8")
    return prefix + hashlib.sha256(blob).hexdigest()[:12]


def schema_space_id(schema: AnnotationSchema) -> str:
    return _digest("aw-", schema.to_dict())


def encode_artwork(artwork: ArtworkRecord, schema: AnnotationSchema) -> FeatureVector:
    """Encode one artwork's annotations into the schema's block layout."""
    values = np.zeros(schema.total_dim)
    for variable, label in artwork.annotations.items():
        var = schema.by_name.get(variable)
        if var is None:
            raise SpaceMismatchError(f"variable {variable!r} not in schema")
        try:
            class_index = var.classes.index(label)
        except ValueError:
            raise SpaceMismatchError(
                f"class {label!r} not in variable {variable!r}"
            ) from None
        values[schema.offsets[variable] + class_index] = var.weight
    return FeatureVector(values=values, space_id=schema_space_id(schema))


def encode_artworks(
    artworks: Iterable[ArtworkRecord], schema: AnnotationSchema
) -> list[FeatureVector]:
    return [encode_artwork(w, schema) for w in artworks]


# ---------------------------------------------------------------------------
# Artist space


@dataclass(frozen=True)
class CvEncodingConfig:
    """Granularity settings for the curriculum-vitae part of artist vectors."""

    decade_bins: tuple[int, ...] = tuple(range(1900, 2030, 10))
    min_venue_count: int = 2


@dataclass(frozen=True)
class ArtistSpace:
    """Vocabularies fixed at build time for encoding artists.

    Layout: [dictionary keywords | birth decades | cities | venues].
    """

    dictionary: ArtDictionary
    decade_bins: tuple[int, ...]
    cities: tuple[str, ...]
    venues: tuple[str, ...]

    @classmethod
    def from_artists(
        cls,
        artists: Iterable[ArtistRecord],
        dictionary: ArtDictionary,
        config: CvEncodingConfig | None = None,
    ) -> "ArtistSpace":
        config = config or CvEncodingConfig()
        artists = list(artists)
        cities = sorted({c for a in artists for c in a.working_cities})
        venue_counts = Counter(e.venue for a in artists for e in a.cv_events)
        venues = sorted(
            v for v, n in venue_counts.items() if n >= config.min_venue_count
        )
        return cls(
            dictionary=dictionary,
            decade_bins=tuple(config.decade_bins),
            cities=tuple(cities),
            venues=tuple(venues),
        )

    @property
    def dim(self) -> int:
        return (
            len(self.dictionary.keywords)
            + len(self.decade_bins)
            + len(self.cities)
            + len(self.venues)
        )

    @property
    def space_id(self) -> str:
        return _digest(
            "ar-",
            {
                "keywords": list(self.dictionary.keywords),
                "weights": {
                    c: self.dictionary.category_weights[c]
                    for c in self.dictionary.categories
                },
                "decades": list(self.decade_bins),
                "cities": list(self.cities),
                "venues": list(self.venues),
            },
        )


def encode_artist(artist: ArtistRecord, space: ArtistSpace) -> FeatureVector:
    """Encode one artist: multi-hot tags scaled by category weight, then the
    CV blocks (birth decade one-hot, cities and venues multi-hot)."""
    dictionary = space.dictionary
    values = np.zeros(space.dim)

    for i, keyword in enumerate(dictionary.keywords):
        if keyword in artist.tags:
            values[i] = dictionary.keyword_weight(keyword)

    offset = len(dictionary.keywords)
    if artist.birth_year is not None:
        for i, start in enumerate(space.decade_bins):
            if start <= artist.birth_year < start + 10:
                values[offset + i] = 1.0
                break

    offset += len(space.decade_bins)
    for i, city in enumerate(space.cities):
        if city in artist.working_cities:
            values[offset + i] = 1.0

    offset += len(space.cities)
    artist_venues = {e.venue for e in artist.cv_events}
    for i, venue in enumerate(space.venues):
        if venue in artist_venues:
            values[offset + i] = 1.0

    return FeatureVector(values=values, space_id=space.space_id)


# ---------------------------------------------------------------------------
# Accuracy-based variable weights


@dataclass(frozen=True)
class AccuracyReport:
    """Per-variable test accuracies of the annotation classifiers."""

    per_variable: Mapping[str, float]
    source: str = ""

    def __post_init__(self) -> None:
        for variable, acc in self.per_variable.items():
            if not 0.0 <= acc <= 1.0:
                raise ValueError(f"accuracy for {variable!r} outside [0,1]: {acc}")


def load_accuracy_report(path: str | Path) -> AccuracyReport:
    """Read the flat JSON map variable -> accuracy written by the annotator."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("accuracy report must be a JSON object")
    return AccuracyReport(
        per_variable={str(k): float(v) for k, v in raw.items()}, source=str(path)
    )


def weights_from_accuracy(
    report: AccuracyReport, schema: AnnotationSchema, floor: float = 0.0
) -> AnnotationSchema:
    """Reweight schema variables by classifier accuracy.

    Reported variables get max(accuracy, floor); unreported variables keep
    their prior weight; the result is normalized so the largest weight is 1.
    """
    if not 0.0 <= floor < 1.0:
        raise ValueError(f"floor must be in [0,1): {floor}")
    unknown = set(report.per_variable) - set(schema.by_name)
    if unknown:
        raise ValueError(f"accuracy report names unknown variables: {sorted(unknown)}")
    weights = {
        v.name: max(report.per_variable[v.name], floor)
        if v.name in report.per_variable
        else v.weight
        for v in schema.variables
    }
    top = max(weights.values(), default=0.0)
    if top > 0:
        weights = {name: w / top for name, w in weights.items()}
    return schema.with_weights(weights)
