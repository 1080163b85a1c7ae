"""Content-based contemporary-art recommendation engine.

Artworks and artists become weighted one-hot feature vectors; L1 distances
and shared-tag structure become proximity graphs; a personalized ranking over
the blended graph yields diversity-constrained top-k recommendations.
"""

from .catalog import (
    AnnotationSchema,
    ArtDictionary,
    ArtistRecord,
    ArtworkRecord,
    Catalog,
    CvEvent,
    SchemaVariable,
    load_catalog,
    load_dictionary,
    load_schema,
)
from .embedding import (
    AccuracyReport,
    ArtistSpace,
    CvEncodingConfig,
    FeatureVector,
    encode_artist,
    encode_artwork,
    weights_from_accuracy,
)
from .proximity import (
    ProximityGraph,
    build_artist_graph,
    build_artwork_graph,
    l1_distance,
    lift_artist_graph,
)
from .ranking import (
    RankingConfig,
    RankingDistribution,
    pagerank,
    personalized_pagerank,
    transition_matrix,
)
from .recommender import (
    Engine,
    Recommendation,
    RecommenderConfig,
    blend_graphs,
    build_engine,
    explain,
    recommend,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationSchema",
    "ArtDictionary",
    "ArtistRecord",
    "ArtworkRecord",
    "AccuracyReport",
    "ArtistSpace",
    "Catalog",
    "CvEncodingConfig",
    "CvEvent",
    "Engine",
    "FeatureVector",
    "ProximityGraph",
    "RankingConfig",
    "RankingDistribution",
    "Recommendation",
    "RecommenderConfig",
    "SchemaVariable",
    "blend_graphs",
    "build_artist_graph",
    "build_artwork_graph",
    "build_engine",
    "encode_artist",
    "encode_artwork",
    "explain",
    "l1_distance",
    "lift_artist_graph",
    "load_catalog",
    "load_dictionary",
    "load_schema",
    "pagerank",
    "personalized_pagerank",
    "recommend",
    "transition_matrix",
    "weights_from_accuracy",
]
