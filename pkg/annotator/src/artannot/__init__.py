"""Offline annotation pipeline: frozen-backbone image features, per-variable
classifiers with accuracy reporting, cosine-similarity artist tagging, and
engine-input export."""

from .classify import (
    TrainedVariable,
    benchmark_classifiers,
    frequency_weighted_baseline,
    train_classifier,
)
from .export import AnnotatedArtwork, ArtistProfile, export_engine_inputs
from .features import ExtractionReport, FeatureExtraction, extract_features
from .tagging import (
    HashingTextEncoder,
    TagAssignment,
    cosine,
    read_dictionary_keywords,
    tag_artists,
)
from .toyset import TOY_CLASSES, make_toy_image_set

__version__ = "0.1.0"

__all__ = [
    "AnnotatedArtwork",
    "ArtistProfile",
    "ExtractionReport",
    "FeatureExtraction",
    "HashingTextEncoder",
    "TOY_CLASSES",
    "TagAssignment",
    "TrainedVariable",
    "benchmark_classifiers",
    "cosine",
    "export_engine_inputs",
    "extract_features",
    "frequency_weighted_baseline",
    "make_toy_image_set",
    "read_dictionary_keywords",
    "tag_artists",
    "train_classifier",
]
