"""Data model, validation and file ingestion for artworks, artists, the art
dictionary and annotation schemas.

File formats are UTF-8 throughout: one JSON document for ``dictionary.json``
and ``schema.json``, JSON-lines (one record per line) for ``artworks.jsonl``
and ``artists.jsonl``. Unknown fields on records are preserved on load and
written back on serialization, but are otherwise ignored.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

CV_EVENT_KINDS = ("exhibition", "award", "biennial", "residency")

MIN_PLAUSIBLE_YEAR = 1900
MAX_PLAUSIBLE_YEAR = 2100


class CatalogError(ValueError):
    """Raised on malformed or invariant-violating catalog inputs."""


class ValidationError(CatalogError):
    """A structural invariant was violated; the message names the entity."""


@dataclass(frozen=True)
class RecordIssue:
    """Diagnostics for one rejected record."""

    kind: str  # "artwork" | "artist"
    record_id: str
    problems: tuple[str, ...]

    def __str__(self) -> str:
        joined = "; ".join(self.problems)
        return f"{self.kind} {self.record_id}: {joined}"


# ---------------------------------------------------------------------------
# Art dictionary


@dataclass(frozen=True)
class ArtDictionary:
    """Curated keyword vocabulary, grouped by category, with per-category
    weights used when encoding artist tags.

    Invariants (checked at construction): every keyword belongs to exactly
    one category, no category is empty, weights are nonnegative and at least
    one is positive.
    """

    categories: Mapping[str, tuple[str, ...]]
    category_weights: Mapping[str, float]

    def __post_init__(self) -> None:
        if not self.categories:
            raise ValidationError("dictionary has no categories")
        seen: dict[str, str] = {}
        for category, keywords in self.categories.items():
            if not keywords:
                raise ValidationError(f"category {category!r} is empty")
            for kw in keywords:
                if not kw:
                    raise ValidationError(f"category {category!r} contains an empty keyword")
                if kw in seen:
                    raise ValidationError(
                        f"keyword {kw!r} appears in both {seen[kw]!r} and {category!r}"
                    )
                seen[kw] = category
        if set(self.category_weights) != set(self.categories):
            raise ValidationError("category_weights keys must match categories")
        if any(w < 0 for w in self.category_weights.values()):
            raise ValidationError("category weights must be >= 0")
        if not any(w > 0 for w in self.category_weights.values()):
            raise ValidationError("at least one category weight must be > 0")

    @cached_property
    def keyword_category(self) -> dict[str, str]:
        """Map keyword -> owning category."""
        return {kw: cat for cat, kws in self.categories.items() for kw in kws}

    @cached_property
    def keywords(self) -> tuple[str, ...]:
        """All keywords in category order, then file order within a category."""
        return tuple(kw for kws in self.categories.values() for kw in kws)

    def keyword_weight(self, keyword: str) -> float:
        return float(self.category_weights[self.keyword_category[keyword]])

    @classmethod
    def from_dict(cls, raw: Mapping) -> "ArtDictionary":
        categories = raw.get("categories")
        if not isinstance(categories, Mapping):
            raise CatalogError("dictionary must contain a 'categories' object")
        cats = {str(name): tuple(str(k) for k in kws) for name, kws in categories.items()}
        weights_raw = raw.get("category_weights") or {}
        weights = {name: float(weights_raw.get(name, 1.0)) for name in cats}
        return cls(categories=cats, category_weights=weights)

    def to_dict(self) -> dict:
        return {
            "categories": {name: list(kws) for name, kws in self.categories.items()},
            "category_weights": {name: self.category_weights[name] for name in self.categories},
        }


def load_dictionary(path: str | Path) -> ArtDictionary:
    """Load and validate an art dictionary from a JSON file."""
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"cannot parse dictionary file {path}: {exc}") from exc
    return ArtDictionary.from_dict(raw)


def dump_dictionary(dictionary: ArtDictionary, path: str | Path) -> None:
    _write_json(dictionary.to_dict(), path)


# ---------------------------------------------------------------------------
# Annotation schema


@dataclass(frozen=True)
class SchemaVariable:
    name: str
    classes: tuple[str, ...]
    weight: float = 1.0


@dataclass(frozen=True)
class AnnotationSchema:
    """Ordered categorical variables describing an artwork's visual
    properties, each with a nonnegative encoding weight."""

    variables: tuple[SchemaVariable, ...]

    def __post_init__(self) -> None:
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise ValidationError(f"duplicate variable name {dup!r}")
        for var in self.variables:
            if len(var.classes) < 2:
                raise ValidationError(f"variable {var.name!r} needs at least 2 classes")
            if len(set(var.classes)) != len(var.classes):
                raise ValidationError(f"variable {var.name!r} has duplicate class labels")
            if var.weight < 0:
                raise ValidationError(f"variable {var.name!r} has negative weight")

    @property
    def total_dim(self) -> int:
        return sum(len(v.classes) for v in self.variables)

    @cached_property
    def by_name(self) -> dict[str, SchemaVariable]:
        return {v.name: v for v in self.variables}

    @cached_property
    def offsets(self) -> dict[str, int]:
        """Start index of each variable's block in the encoded vector."""
        offsets: dict[str, int] = {}
        pos = 0
        for var in self.variables:
            offsets[var.name] = pos
            pos += len(var.classes)
        return offsets

    def with_weights(self, weights: Mapping[str, float]) -> "AnnotationSchema":
        """A copy with the given per-variable weights (others unchanged)."""
        return AnnotationSchema(
            variables=tuple(
                SchemaVariable(v.name, v.classes, float(weights.get(v.name, v.weight)))
                for v in self.variables
            )
        )

    @classmethod
    def from_dict(cls, raw: Mapping) -> "AnnotationSchema":
        entries = raw.get("variables")
        if not isinstance(entries, list):
            raise CatalogError("schema must contain a 'variables' list")
        variables = []
        for entry in entries:
            variables.append(
                SchemaVariable(
                    name=str(entry["name"]),
                    classes=tuple(str(c) for c in entry["classes"]),
                    weight=float(entry.get("weight", 1.0)),
                )
            )
        return cls(variables=tuple(variables))

    def to_dict(self) -> dict:
        return {
            "variables": [
                {"name": v.name, "classes": list(v.classes), "weight": v.weight}
                for v in self.variables
            ]
        }


def load_schema(path: str | Path) -> AnnotationSchema:
    """Load and validate an annotation schema from a JSON file."""
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"cannot parse schema file {path}: {exc}") from exc
    return AnnotationSchema.from_dict(raw)


def dump_schema(schema: AnnotationSchema, path: str | Path) -> None:
    _write_json(schema.to_dict(), path)


# ---------------------------------------------------------------------------
# Records


@dataclass(frozen=True)
class ArtworkRecord:
    id: str
    artist_id: str
    title: str = ""
    year: int | None = None
    image_ref: str | None = None
    annotations: Mapping[str, str] = field(default_factory=dict)
    extras: Mapping[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out: dict = {
            "id": self.id,
            "artist_id": self.artist_id,
            "title": self.title,
        }
        if self.year is not None:
            out["year"] = self.year
        if self.image_ref is not None:
            out["image_ref"] = self.image_ref
        out["annotations"] = dict(self.annotations)
        out.update(self.extras)
        return out

    @classmethod
    def from_dict(cls, raw: Mapping) -> "ArtworkRecord":
        known = {"id", "artist_id", "title", "year", "image_ref", "annotations"}
        return cls(
            id=str(raw["id"]),
            artist_id=str(raw.get("artist_id", "")),
            title=str(raw.get("title", "")),
            year=int(raw["year"]) if raw.get("year") is not None else None,
            image_ref=str(raw["image_ref"]) if raw.get("image_ref") is not None else None,
            annotations={str(k): str(v) for k, v in (raw.get("annotations") or {}).items()},
            extras={k: v for k, v in raw.items() if k not in known},
        )


@dataclass(frozen=True)
class CvEvent:
    kind: str
    venue: str
    year: int


@dataclass(frozen=True)
class ArtistRecord:
    id: str
    name: str = ""
    birth_year: int | None = None
    working_cities: frozenset[str] = frozenset()
    cv_events: tuple[CvEvent, ...] = ()
    tags: frozenset[str] = frozenset()
    extras: Mapping[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out: dict = {"id": self.id, "name": self.name}
        if self.birth_year is not None:
            out["birth_year"] = self.birth_year
        out["working_cities"] = sorted(self.working_cities)
        out["cv_events"] = [
            {"kind": e.kind, "venue": e.venue, "year": e.year} for e in self.cv_events
        ]
        out["tags"] = sorted(self.tags)
        out.update(self.extras)
        return out

    @classmethod
    def from_dict(cls, raw: Mapping) -> "ArtistRecord":
        known = {"id", "name", "birth_year", "working_cities", "cv_events", "tags"}
        events = tuple(
            CvEvent(kind=str(e.get("kind", "")), venue=str(e.get("venue", "")), year=int(e.get("year", 0)))
            for e in (raw.get("cv_events") or [])
        )
        return cls(
            id=str(raw["id"]),
            name=str(raw.get("name", "")),
            birth_year=int(raw["birth_year"]) if raw.get("birth_year") is not None else None,
            working_cities=frozenset(str(c) for c in (raw.get("working_cities") or [])),
            cv_events=events,
            tags=frozenset(str(t) for t in (raw.get("tags") or [])),
            extras={k: v for k, v in raw.items() if k not in known},
        )


def validate_artist(artist: ArtistRecord, dictionary: ArtDictionary) -> list[str]:
    """All invariant violations for one artist record (empty when valid)."""
    problems: list[str] = []
    if not artist.id:
        problems.append("missing id")
    for tag in sorted(artist.tags):
        if tag not in dictionary.keyword_category:
            problems.append(f"unknown tag {tag!r}")
    for event in artist.cv_events:
        if event.kind not in CV_EVENT_KINDS:
            problems.append(f"unknown cv event kind {event.kind!r}")
        if not (MIN_PLAUSIBLE_YEAR <= event.year <= MAX_PLAUSIBLE_YEAR):
            problems.append(f"implausible cv event year {event.year}")
    return problems


def validate_artwork(
    artwork: ArtworkRecord,
    schema: AnnotationSchema,
    artist_ids: set[str] | None = None,
) -> list[str]:
    """All invariant violations for one artwork record (empty when valid).

    Missing annotations are allowed; unknown variables or class labels are
    not. When ``artist_ids`` is given, the artist reference is checked too.
    """
    problems: list[str] = []
    if not artwork.id:
        problems.append("missing id")
    if artist_ids is not None and artwork.artist_id not in artist_ids:
        problems.append(f"unresolved artist {artwork.artist_id}")
    for variable, label in artwork.annotations.items():
        var = schema.by_name.get(variable)
        if var is None:
            problems.append(f"unknown variable {variable!r}")
        elif label not in var.classes:
            problems.append(f"unknown class {label!r} for variable {variable!r}")
    return problems


# ---------------------------------------------------------------------------
# Catalog


@dataclass(frozen=True)
class Catalog:
    """A validated, immutable collection of artworks and artists, bound to
    the schema and dictionary they were validated against."""

    schema: AnnotationSchema
    dictionary: ArtDictionary
    artworks: tuple[ArtworkRecord, ...]
    artists: tuple[ArtistRecord, ...]
    rejects: tuple[RecordIssue, ...] = ()

    @cached_property
    def artwork_by_id(self) -> dict[str, ArtworkRecord]:
        return {w.id: w for w in self.artworks}

    @cached_property
    def artist_by_id(self) -> dict[str, ArtistRecord]:
        return {a.id: a for a in self.artists}

    @cached_property
    def artist_of(self) -> dict[str, str]:
        """Map artwork id -> artist id."""
        return {w.id: w.artist_id for w in self.artworks}


def load_catalog(
    artworks_path: str | Path,
    artists_path: str | Path,
    schema: AnnotationSchema,
    dictionary: ArtDictionary,
    strict: bool = False,
) -> Catalog:
    """Load, validate and cross-link artworks and artists.

    Errors are collected per record by default (curators fix batches, not
    single rows); ``strict=True`` raises on the first problem instead.
    Rejected artists make their artworks unresolved.
    """
    rejects: list[RecordIssue] = []

    def reject(kind: str, record_id: str, problems: list[str]) -> None:
        issue = RecordIssue(kind=kind, record_id=record_id, problems=tuple(problems))
        if strict:
            raise ValidationError(str(issue))
        rejects.append(issue)

    artists: list[ArtistRecord] = []
    seen_artist_ids: set[str] = set()
    for lineno, raw in _read_jsonl(artists_path, "artist", reject):
        try:
            record = ArtistRecord.from_dict(raw)
        except (KeyError, TypeError, ValueError) as exc:
            reject("artist", f"line {lineno}", [f"malformed record: {exc}"])
            continue
        problems = validate_artist(record, dictionary)
        if record.id in seen_artist_ids:
            problems.append(f"duplicate artist id {record.id}")
        if problems:
            reject("artist", record.id or f"line {lineno}", problems)
            continue
        seen_artist_ids.add(record.id)
        artists.append(record)

    artworks: list[ArtworkRecord] = []
    seen_work_ids: set[str] = set()
    for lineno, raw in _read_jsonl(artworks_path, "artwork", reject):
        try:
            record = ArtworkRecord.from_dict(raw)
        except (KeyError, TypeError, ValueError) as exc:
            reject("artwork", f"line {lineno}", [f"malformed record: {exc}"])
            continue
        problems = validate_artwork(record, schema, artist_ids=seen_artist_ids)
        if record.id in seen_work_ids:
            problems.append(f"duplicate artwork id {record.id}")
        if problems:
            reject("artwork", record.id or f"line {lineno}", problems)
            continue
        seen_work_ids.add(record.id)
        artworks.append(record)

    return Catalog(
        schema=schema,
        dictionary=dictionary,
        artworks=tuple(artworks),
        artists=tuple(artists),
        rejects=tuple(rejects),
    )


def dump_artworks(artworks: Iterable[ArtworkRecord], path: str | Path) -> None:
    _write_jsonl((w.to_dict() for w in artworks), path)


def dump_artists(artists: Iterable[ArtistRecord], path: str | Path) -> None:
    _write_jsonl((a.to_dict() for a in artists), path)


def dump_catalog(catalog: Catalog, out_dir: str | Path) -> None:
    """Write the four catalog files into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dump_dictionary(catalog.dictionary, out / "dictionary.json")
    dump_schema(catalog.schema, out / "schema.json")
    dump_artworks(catalog.artworks, out / "artworks.jsonl")
    dump_artists(catalog.artists, out / "artists.jsonl")


def load_catalog_dir(path: str | Path, strict: bool = False) -> Catalog:
    """Load a catalog from a directory produced by :func:`dump_catalog`."""
    base = Path(path)
    dictionary = load_dictionary(base / "dictionary.json")
    schema = load_schema(base / "schema.json")
    return load_catalog(
        base / "artworks.jsonl", base / "artists.jsonl", schema, dictionary, strict=strict
    )


# ---------------------------------------------------------------------------
# helpers


def _read_jsonl(path: str | Path, kind: str, reject) -> Iterable[tuple[int, Mapping]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                reject(kind, f"line {lineno}", [f"parse error: {exc}"])
                continue
            if not isinstance(raw, Mapping):
                reject(kind, f"line {lineno}", ["record is not a JSON object"])
                continue
            yield lineno, raw


def _write_jsonl(dicts: Iterable[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for d in dicts:
            fh.write(json.dumps(d, ensure_ascii=False))
            fh.write("\n")


def _write_json(obj: dict, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
