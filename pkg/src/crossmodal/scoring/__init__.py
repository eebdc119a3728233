"""Cross-modal similarity scoring between a document image and the
visual profiles of its linked entities."""

from .types import CrossModalScore, DocumentReport, ScoreKind
from .engine import (
    ConsistencyEngine,
    ScoreOptions,
    cosine,
    entity_similarity,
    score_profile_against_image,
)
from .report import report_from_json, report_to_json, report_to_json_str

__all__ = [
    "CrossModalScore",
    "DocumentReport",
    "ScoreKind",
    "ConsistencyEngine",
    "ScoreOptions",
    "cosine",
    "entity_similarity",
    "score_profile_against_image",
    "report_from_json",
    "report_to_json",
    "report_to_json_str",
]
