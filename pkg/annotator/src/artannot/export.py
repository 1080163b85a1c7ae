"""Write the engine's input files: artworks.jsonl, artists.jsonl and
accuracy.json, in the exact shapes the recommendation engine ingests.

The file formats are the public contract between the two packages; exported
output must pass the engine's `ingest` with zero rejected records.
"""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .tagging import TagAssignment


@dataclass(frozen=True)
class AnnotatedArtwork:
    id: str
    artist_id: str
    title: str = ""
    year: int | None = None
    image_ref: str | None = None
    annotations: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class ArtistProfile:
    id: str
    name: str = ""
    birth_year: int | None = None
    working_cities: tuple[str, ...] = ()
    cv_events: tuple[Mapping, ...] = ()  # {"kind", "venue", "year"} dicts


def export_engine_inputs(
    artworks: Sequence[AnnotatedArtwork],
    accuracies: Mapping[str, float],
    tag_assignments: Iterable[TagAssignment],
    artists: Sequence[ArtistProfile],
    out_dir: str | Path,
    manifest: Mapping | None = None,
) -> list[str]:
    """Write the three files atomically; returns non-fatal warnings.

    A variable that appears in annotations but has no accuracy entry keeps
    the engine's default weight and is only warned about. ``manifest``
    (backbone id, tapped layers, PCA dimension, seeds) is recorded alongside
    the outputs as ``manifest.json`` for provenance.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    warnings: list[str] = []

    annotated_variables = {v for w in artworks for v in w.annotations}
    for variable in sorted(annotated_variables - set(accuracies)):
        warnings.append(
            f"no accuracy entry for annotated variable {variable!r}; default weight kept"
        )
    for variable, value in accuracies.items():
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"accuracy for {variable!r} outside [0,1]: {value}")

    tags_by_artist: dict[str, set[str]] = {}
    for assignment in tag_assignments:
        if assignment.accepted:
            tags_by_artist.setdefault(assignment.artist_id, set()).add(assignment.tag)

    artwork_lines = []
    for work in artworks:
        record: dict = {
            "id": work.id,
            "artist_id": work.artist_id,
            "title": work.title,
        }
        if work.year is not None:
            record["year"] = work.year
        if work.image_ref is not None:
            record["image_ref"] = work.image_ref
        record["annotations"] = dict(work.annotations)
        artwork_lines.append(record)

    artist_lines = []
    for artist in artists:
        record = {
            "id": artist.id,
            "name": artist.name,
        }
        if artist.birth_year is not None:
            record["birth_year"] = artist.birth_year
        record["working_cities"] = sorted(artist.working_cities)
        record["cv_events"] = [dict(e) for e in artist.cv_events]
        record["tags"] = sorted(tags_by_artist.get(artist.id, set()))
        artist_lines.append(record)

    _atomic_write_jsonl(artwork_lines, out / "artworks.jsonl")
    _atomic_write_jsonl(artist_lines, out / "artists.jsonl")
    _atomic_write_json(dict(sorted(accuracies.items())), out / "accuracy.json")
    if manifest is not None:
        _atomic_write_json(dict(manifest), out / "manifest.json")
    return warnings


def _atomic_write_jsonl(records: list[dict], path: Path) -> None:
    _atomic_write(
        "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records), path
    )


def _atomic_write_json(obj: dict, path: Path) -> None:
    _atomic_write(json.dumps(obj, ensure_ascii=False, indent=2) + "\n", path)


def _atomic_write(content: str, path: Path) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise
