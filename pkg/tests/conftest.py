from __future__ import annotations

import numpy as np
import pytest

from artrec.catalog import (
    AnnotationSchema,
    ArtDictionary,
    ArtistRecord,
    ArtworkRecord,
    Catalog,
    CvEvent,
    SchemaVariable,
)


@pytest.fixture
def tiny_dictionary() -> ArtDictionary:
    return ArtDictionary(
        categories={
            "themes": ("feminism", "spirituality", "ecology"),
            "mediums": ("painting", "sculpture"),
        },
        category_weights={"themes": 1.0, "mediums": 0.5},
    )


@pytest.fixture
def tiny_schema() -> AnnotationSchema:
    return AnnotationSchema(
        variables=(
            SchemaVariable("style", ("abstract", "figurative", "conceptual")),
            SchemaVariable("medium", ("painting", "sculpture")),
            SchemaVariable("color", ("red", "blue", "green", "black")),
        )
    )


def make_artist(artist_id: str, tags=(), **kwargs) -> ArtistRecord:
    return ArtistRecord(id=artist_id, name=artist_id, tags=frozenset(tags), **kwargs)


def make_artwork(work_id: str, artist_id: str, annotations=None, **kwargs) -> ArtworkRecord:
    return ArtworkRecord(
        id=work_id, artist_id=artist_id, annotations=annotations or {}, **kwargs
    )


def make_catalog(schema, dictionary, artworks, artists) -> Catalog:
    return Catalog(
        schema=schema,
        dictionary=dictionary,
        artworks=tuple(artworks),
        artists=tuple(artists),
    )


@pytest.fixture
def tiny_catalog(tiny_schema, tiny_dictionary) -> Catalog:
    artists = [
        make_artist("a1", tags=("feminism", "painting")),
        make_artist(
            "a2",
            tags=("feminism", "spirituality"),
            birth_year=1987,
            cv_events=(CvEvent("exhibition", "Venue X", 2019),),
        ),
        make_artist("a3", tags=("ecology", "sculpture")),
    ]
    artworks = [
        make_artwork("w1", "a1", {"style": "abstract", "medium": "painting", "color": "red"}),
        make_artwork("w2", "a1", {"style": "abstract", "medium": "painting", "color": "blue"}),
        make_artwork("w3", "a2", {"style": "figurative", "medium": "painting", "color": "red"}),
        make_artwork("w4", "a3", {"style": "conceptual", "medium": "sculpture", "color": "green"}),
        make_artwork("w5", "a3", {"style": "abstract", "medium": "sculpture"}),
    ]
    return make_catalog(tiny_schema, tiny_dictionary, artworks, artists)


def random_annotation_catalog(
    rng: np.random.Generator,
    n_works: int,
    n_artists: int,
    schema: AnnotationSchema,
    dictionary: ArtDictionary,
    missing_rate: float = 0.1,
) -> Catalog:
    """Random valid catalog for property tests."""
    keywords = list(dictionary.keyword_category)
    artists = []
    for i in range(n_artists):
        n_tags = int(rng.integers(1, min(4, len(keywords)) + 1))
        chosen = rng.choice(len(keywords), size=n_tags, replace=False)
        artists.append(
            make_artist(f"artist-{i:03d}", tags=[keywords[j] for j in chosen])
        )
    artworks = []
    for i in range(n_works):
        annotations = {}
        for var in schema.variables:
            if rng.random() < missing_rate:
                continue
            annotations[var.name] = var.classes[int(rng.integers(len(var.classes)))]
        artworks.append(
            make_artwork(
                f"work-{i:03d}",
                f"artist-{int(rng.integers(n_artists)):03d}",
                annotations,
            )
        )
    return make_catalog(schema, dictionary, artworks, artists)
