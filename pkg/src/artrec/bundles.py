"""Directory bundles: a validated catalog bundle (ingest output) and an
engine bundle (build output: catalog files, all three graphs, manifest).

Manifests carry no timestamps; identical inputs produce byte-identical
bundles, and the manifest's build id ties recommendations to the engine
that produced them.
"""
from __future__ import annotations

import json
from pathlib import Path

from .catalog import Catalog, dump_catalog, load_catalog_dir
from .proximity import load_graph, save_graph
from .recommender import Engine

CATALOG_MANIFEST = "catalog_manifest.json"
ENGINE_MANIFEST = "engine_manifest.json"


def save_catalog_bundle(catalog: Catalog, out_dir: str | Path) -> None:
    out = Path(out_dir)
    dump_catalog(catalog, out)
    manifest = {
        "kind": "catalog",
        "artworks": len(catalog.artworks),
        "artists": len(catalog.artists),
        "rejected": len(catalog.rejects),
    }
    _write_json(manifest, out / CATALOG_MANIFEST)


def load_catalog_bundle(path: str | Path, strict: bool = False) -> Catalog:
    return load_catalog_dir(path, strict=strict)


def save_engine_bundle(engine: Engine, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dump_catalog(engine.catalog, out)
    save_graph(engine.visual, out, "visual")
    save_graph(engine.contextual, out, "contextual")
    save_graph(engine.artist_graph, out, "artist")
    manifest = {
        "kind": "engine",
        "build_id": engine.build_id,
        "meta": dict(engine.meta),
    }
    _write_json(manifest, out / ENGINE_MANIFEST)


def load_engine_bundle(path: str | Path) -> Engine:
    base = Path(path)
    manifest_path = base / ENGINE_MANIFEST
    if not manifest_path.exists():
        raise FileNotFoundError(f"not an engine bundle (no {ENGINE_MANIFEST}): {base}")
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    catalog = load_catalog_dir(base)
    return Engine(
        catalog=catalog,
        visual=load_graph(base, "visual"),
        contextual=load_graph(base, "contextual"),
        artist_graph=load_graph(base, "artist"),
        build_id=str(manifest["build_id"]),
        meta=manifest.get("meta", {}),
    )


def _write_json(obj: dict, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")
