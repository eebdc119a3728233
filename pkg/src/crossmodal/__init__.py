"""crossmodal: quantify the consistency between a document's image and
the person / location / event entities mentioned in its text.

The pipeline links text mentions to a knowledge base, crawls reference
images for each entity, embeds them with modality-specific providers,
and reports the maximum cosine similarity between the document image
and each entity's visual evidence. An evaluation harness measures how
reliably the scores separate original documents from tampered ones.
"""

from .clock import ManualClock, SystemClock
from .cache import TTLCache, MemoryCacheBackend, DiskCacheBackend, make_key
from . import errors
from .linking import (
    EntityLinker,
    EntityType,
    GazetteerAnnotator,
    KBRecord,
    LinkedEntity,
    StaticKBClient,
    classify_entity,
    select_candidate,
)
from .evidence import DirectoryImageSearch, ImageFetcher, ReferenceImageCollector
from .features import (
    EmbeddingVector,
    HashEmbedProvider,
    ImagePayload,
    Modality,
    cluster_majority_mean,
    hash_embed,
)
from .scoring import ConsistencyEngine, DocumentReport, ScoreOptions, cosine, entity_similarity
from .evaluation import (
    auc,
    haversine_km,
    parse_strategy,
    run_evaluation,
    sample_tampered,
    verification_accuracy,
)
from .pipeline import PipelineConfig, build_engine

__version__ = "0.1.0"

__all__ = [
    "ManualClock",
    "SystemClock",
    "TTLCache",
    "MemoryCacheBackend",
    "DiskCacheBackend",
    "make_key",
    "errors",
    "EntityLinker",
    "EntityType",
    "GazetteerAnnotator",
    "KBRecord",
    "LinkedEntity",
    "StaticKBClient",
    "classify_entity",
    "select_candidate",
    "DirectoryImageSearch",
    "ImageFetcher",
    "ReferenceImageCollector",
    "EmbeddingVector",
    "HashEmbedProvider",
    "ImagePayload",
    "Modality",
    "cluster_majority_mean",
    "hash_embed",
    "ConsistencyEngine",
    "DocumentReport",
    "ScoreOptions",
    "cosine",
    "entity_similarity",
    "auc",
    "haversine_km",
    "parse_strategy",
    "run_evaluation",
    "sample_tampered",
    "verification_accuracy",
    "PipelineConfig",
    "build_engine",
    "__version__",
]
