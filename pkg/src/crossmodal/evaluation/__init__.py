"""Tampering-based evaluation: attribute-matched entity substitution,
verification accuracy, and collection-retrieval AUC."""

from .geo import haversine_km
from .metrics import auc, verification_accuracy
from .types import CatalogEntity, EvalDocument, EvaluationRun
from .strategies import (
    DistanceBand,
    RandomSameType,
    SameCitizenship,
    SameCitizenshipAndGender,
    SameGender,
    SharedParentClass,
    TamperingStrategy,
    parse_strategy,
    sample_tampered,
    strategy_names,
)
from .datasets import load_catalog, load_documents
from .runner import render_table, run_evaluation, run_to_json, runs_to_json

__all__ = [
    "haversine_km",
    "auc",
    "verification_accuracy",
    "CatalogEntity",
    "EvalDocument",
    "EvaluationRun",
    "TamperingStrategy",
    "RandomSameType",
    "SameCitizenship",
    "SameGender",
    "SameCitizenshipAndGender",
    "DistanceBand",
    "SharedParentClass",
    "parse_strategy",
    "sample_tampered",
    "strategy_names",
    "load_catalog",
    "load_documents",
    "run_evaluation",
    "render_table",
    "run_to_json",
    "runs_to_json",
]
