from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artrec.catalog import AnnotationSchema, ArtDictionary, CvEvent, SchemaVariable
from artrec.embedding import (
    AccuracyReport,
    ArtistSpace,
    CvEncodingConfig,
    SpaceMismatchError,
    encode_artist,
    encode_artwork,
    schema_space_id,
    weights_from_accuracy,
)
from artrec.proximity import l1_distance
from conftest import make_artist, make_artwork


def uniform_schema(sizes: tuple[int, ...], weight: float = 1.0) -> AnnotationSchema:
    return AnnotationSchema(
        variables=tuple(
            SchemaVariable(
                name=f"v{i}",
                classes=tuple(f"v{i}c{j}" for j in range(size)),
                weight=weight,
            )
            for i, size in enumerate(sizes)
        )
    )


class TestEncodeArtwork:
    def test_block_layout(self):
        schema = uniform_schema((3, 2, 4))
        work = make_artwork(
            "w", "a", {"v0": "v0c0", "v1": "v1c1", "v2": "v2c3"}
        )
        vec = encode_artwork(work, schema)
        assert len(vec) == 9
        assert list(np.flatnonzero(vec.values)) == [0, 4, 8]
        assert set(vec.values[[0, 4, 8]]) == {1.0}

    def test_unannotated_block_is_zero(self):
        schema = uniform_schema((3, 2, 4))
        work = make_artwork("w", "a", {"v0": "v0c0", "v2": "v2c3"})
        vec = encode_artwork(work, schema)
        assert list(np.flatnonzero(vec.values)) == [0, 8]

    def test_hot_entry_carries_variable_weight(self):
        schema = AnnotationSchema(
            variables=(SchemaVariable("style", ("abstract", "figurative"), 0.8),)
        )
        vec = encode_artwork(make_artwork("w", "a", {"style": "abstract"}), schema)
        assert vec.values[0] == pytest.approx(0.8)

    def test_unknown_variable_rejected(self):
        schema = uniform_schema((2,))
        with pytest.raises(SpaceMismatchError):
            encode_artwork(make_artwork("w", "a", {"nope": "x"}), schema)

    def test_space_id_tracks_schema_weights(self):
        schema = uniform_schema((2, 2))
        reweighted = schema.with_weights({"v0": 0.5})
        assert schema_space_id(schema) != schema_space_id(reweighted)


class TestEncodeArtist:
    def test_tag_block_multi_hot(self, tiny_dictionary):
        artist = make_artist("a", tags=("feminism", "spirituality"))
        space = ArtistSpace.from_artists([artist], tiny_dictionary)
        vec = encode_artist(artist, space)
        tag_block = vec.values[: len(tiny_dictionary.keywords)]
        assert list(np.flatnonzero(tag_block)) == [0, 1]  # themes come first
        assert tag_block[0] == 1.0 and tag_block[1] == 1.0
        assert vec.values[len(tiny_dictionary.keywords):].sum() == 0  # no CV info

    def test_identical_inputs_identical_vectors(self, tiny_dictionary):
        a1 = make_artist("a1", tags=("ecology",), birth_year=1960)
        a2 = make_artist("a2", tags=("ecology",), birth_year=1960)
        space = ArtistSpace.from_artists([a1, a2], tiny_dictionary)
        assert np.array_equal(encode_artist(a1, space).values, encode_artist(a2, space).values)

    def test_birth_decade_bin(self, tiny_dictionary):
        bins = tuple(range(1950, 2010, 10))  # 1950s..2000s
        artist = make_artist("a", tags=(), birth_year=1987)
        space = ArtistSpace.from_artists(
            [artist], tiny_dictionary, CvEncodingConfig(decade_bins=bins)
        )
        vec = encode_artist(artist, space)
        decade_block = vec.values[
            len(tiny_dictionary.keywords) : len(tiny_dictionary.keywords) + len(bins)
        ]
        assert list(np.flatnonzero(decade_block)) == [bins.index(1980)]

    def test_category_weight_scales_tags(self, tiny_dictionary):
        artist = make_artist("a", tags=("painting",))  # mediums weight 0.5
        space = ArtistSpace.from_artists([artist], tiny_dictionary)
        vec = encode_artist(artist, space)
        assert vec.values.max() == pytest.approx(0.5)

    def test_venue_vocabulary_needs_min_count(self, tiny_dictionary):
        shared = (CvEvent("exhibition", "Common Hall", 2019),)
        artists = [
            make_artist("a1", tags=(), cv_events=shared),
            make_artist("a2", tags=(), cv_events=shared),
            make_artist("a3", tags=(), cv_events=(CvEvent("award", "One Off", 2018),)),
        ]
        space = ArtistSpace.from_artists(artists, tiny_dictionary)
        assert space.venues == ("Common Hall",)
        assert "One Off" not in space.venues

    def test_city_block(self, tiny_dictionary):
        artists = [
            make_artist("a1", tags=(), working_cities=frozenset({"Berlin"})),
            make_artist("a2", tags=(), working_cities=frozenset({"Lagos", "Berlin"})),
        ]
        space = ArtistSpace.from_artists(artists, tiny_dictionary)
        vec = encode_artist(artists[1], space)
        city_offset = len(tiny_dictionary.keywords) + len(space.decade_bins)
        city_block = vec.values[city_offset : city_offset + len(space.cities)]
        assert city_block.sum() == 2.0


class TestWeightsFromAccuracy:
    def schema(self):
        return AnnotationSchema(
            variables=(
                SchemaVariable("style", ("a", "b")),
                SchemaVariable("color", ("a", "b")),
            )
        )

    def test_max_already_one(self):
        out = weights_from_accuracy(
            AccuracyReport({"style": 0.5, "color": 1.0}), self.schema(), floor=0.0
        )
        assert out.by_name["style"].weight == pytest.approx(0.5)
        assert out.by_name["color"].weight == pytest.approx(1.0)

    def test_max_normalization(self):
        out = weights_from_accuracy(
            AccuracyReport({"style": 0.4, "color": 0.8}), self.schema(), floor=0.0
        )
        assert out.by_name["style"].weight == pytest.approx(0.5)
        assert out.by_name["color"].weight == pytest.approx(1.0)

    def test_accuracy_out_of_range(self):
        with pytest.raises(ValueError):
            AccuracyReport({"style": 1.2})

    def test_floor_applies(self):
        out = weights_from_accuracy(
            AccuracyReport({"style": 0.1, "color": 0.8}), self.schema(), floor=0.4
        )
        assert out.by_name["style"].weight == pytest.approx(0.5)  # 0.4 / 0.8

    def test_unreported_keeps_prior_weight(self):
        schema = AnnotationSchema(
            variables=(
                SchemaVariable("style", ("a", "b"), 0.9),
                SchemaVariable("color", ("a", "b"), 1.0),
            )
        )
        out = weights_from_accuracy(AccuracyReport({"style": 0.5}), schema)
        assert out.by_name["color"].weight == pytest.approx(1.0)
        assert out.by_name["style"].weight == pytest.approx(0.5)

    def test_unknown_variable_rejected(self):
        with pytest.raises(ValueError, match="mystery"):
            weights_from_accuracy(AccuracyReport({"mystery": 0.5}), self.schema())


# ---------------------------------------------------------------------------
# Properties

annotation_maps = st.dictionaries(
    keys=st.sampled_from(["v0", "v1", "v2", "v3"]),
    values=st.integers(min_value=0, max_value=2),
    max_size=4,
)


@given(annotation_maps)
@settings(max_examples=100, deadline=None)
def test_block_exclusivity(annotation_choice):
    schema = uniform_schema((3, 3, 3, 3))
    annotations = {f"v{i}": f"v{i}c{c}" for i, c in
                   ((int(k[1]), v) for k, v in annotation_choice.items())}
    vec = encode_artwork(make_artwork("w", "a", annotations), schema)
    for name in schema.by_name:
        offset = schema.offsets[name]
        block = vec.values[offset : offset + 3]
        assert np.count_nonzero(block) <= 1


@given(annotation_maps, annotation_maps)
@settings(max_examples=100, deadline=None)
def test_l1_is_twice_differing_variables_and_injective(map_a, map_b):
    schema = uniform_schema((3, 3, 3, 3))
    full_a = {f"v{i}": f"v{i}c{map_a.get(f'v{i}', 0)}" for i in range(4)}
    full_b = {f"v{i}": f"v{i}c{map_b.get(f'v{i}', 0)}" for i in range(4)}
    va = encode_artwork(make_artwork("wa", "a", full_a), schema)
    vb = encode_artwork(make_artwork("wb", "a", full_b), schema)
    differing = sum(1 for i in range(4) if full_a[f"v{i}"] != full_b[f"v{i}"])
    assert l1_distance(va, vb) == pytest.approx(2 * differing)
    if full_a != full_b:
        assert not np.array_equal(va.values, vb.values)


def test_zero_weight_variable_contributes_nothing():
    schema = AnnotationSchema(
        variables=(
            SchemaVariable("loud", ("a", "b"), 1.0),
            SchemaVariable("mute", ("a", "b"), 0.0),
        )
    )
    v1 = encode_artwork(make_artwork("w1", "x", {"loud": "a", "mute": "a"}), schema)
    v2 = encode_artwork(make_artwork("w2", "x", {"loud": "a", "mute": "b"}), schema)
    assert l1_distance(v1, v2) == 0.0


def test_space_mismatch_rejected():
    s1 = uniform_schema((2, 2))
    s2 = uniform_schema((2, 2), weight=0.7)
    v1 = encode_artwork(make_artwork("w", "a", {"v0": "v0c0"}), s1)
    v2 = encode_artwork(make_artwork("w", "a", {"v0": "v0c0"}), s2)
    with pytest.raises(SpaceMismatchError):
        l1_distance(v1, v2)
