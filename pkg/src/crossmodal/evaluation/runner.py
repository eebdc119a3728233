"""Evaluation runner: tamper, score, and reduce to VA / AUC.

The run is hermetic and seedable: reference evidence comes from the
catalog's stored image paths (never live crawling), replacements are
sampled with a seeded ``random.Random`` in document order before any
scoring happens, and scores are sorted by document id before the metric
reduction, so results do not depend on execution order.
"""

from __future__ import annotations

import logging
import mimetypes
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import FormatError
from ..evidence.types import ReferenceImage, ReferenceImageSet
from ..features.detectors import FaceDetector
from ..features.profiles import build_person_profile, build_place_or_event_profile
from ..features.providers import EmbedProvider
from ..features.types import EntityVisualProfile, ImagePayload, Modality, name_for_path
from ..linking.types import EntityType
from ..scoring.engine import score_profile_against_image
from ..scoring.types import MODALITY_FOR_TYPE
from .metrics import auc, verification_accuracy
from .strategies import TamperingStrategy, sample_tampered
from .types import CatalogEntity, EvalDocument, EvaluationRun

logger = logging.getLogger(__name__)

RUN_VERSION = "1"


def refset_from_catalog(entity: CatalogEntity) -> ReferenceImageSet:
    """Materialize a reference set from the catalog's stored image paths;
    unreadable paths are skipped with a warning."""
    images = []
    warnings = []
    for path in entity.reference_images:
        p = Path(path)
        try:
            content = p.read_bytes()
        except OSError as exc:
            warnings.append(f"unreadable reference {path}: {exc}")
            continue
        content_type = mimetypes.guess_type(p.name)[0] or "image/unknown"
        if not content_type.startswith("image/"):
            content_type = "image/unknown"
        images.append(
            ReferenceImage(
                source_url=p.as_posix(),
                content=content,
                content_type=content_type,
                fetched_at=0.0,
            )
        )
    return ReferenceImageSet(
        kb_id=entity.kb_id,
        query=entity.label,
        images=tuple(images),
        k=max(1, len(entity.reference_images)),
        warnings=tuple(warnings),
    )


@dataclass
class EvaluationScorer:
    """Scores catalog entities against document images, memoizing one
    profile per entity."""

    providers: dict[Modality, EmbedProvider]
    detector: FaceDetector
    cluster_threshold: float = 0.5
    _profiles: dict[str, EntityVisualProfile | None] = field(default_factory=dict)

    def profile_for(self, entity: CatalogEntity) -> EntityVisualProfile | None:
        if entity.kb_id in self._profiles:
            return self._profiles[entity.kb_id]
        refset = refset_from_catalog(entity)
        modality = MODALITY_FOR_TYPE[entity.entity_type]
        provider = self.providers[modality]
        if entity.entity_type == EntityType.PERSON:
            result = build_person_profile(
                refset, self.detector, provider, threshold=self.cluster_threshold
            )
        else:
            result = build_place_or_event_profile(refset, modality, provider)
        self._profiles[entity.kb_id] = result.profile
        return result.profile

    def score_entity(self, image: ImagePayload, entity: CatalogEntity) -> float | None:
        warnings: list[str] = []
        score = score_profile_against_image(
            image,
            self.profile_for(entity),
            kb_id=entity.kb_id,
            entity_type=entity.entity_type,
            providers=self.providers,
            detector=self.detector,
            warnings=warnings,
        )
        return None if score is None else score.value

    def score_set(self, image: ImagePayload, entities: list[CatalogEntity]) -> float | None:
        """Document-level score for an entity set: the maximum over the
        per-entity similarities; None when no entity is scorable."""
        values = [v for v in (self.score_entity(image, e) for e in entities) if v is not None]
        return max(values) if values else None


def _document_image(document: EvalDocument) -> ImagePayload | None:
    p = Path(document.image)
    try:
        content = p.read_bytes()
    except OSError as exc:
        raise FormatError(f"document {document.id}: cannot read image {p}: {exc}") from exc
    return ImagePayload(
        content=content,
        content_type=mimetypes.guess_type(p.name)[0],
        name=name_for_path(p),
    )


def run_evaluation(
    documents: list[EvalDocument],
    catalog: list[CatalogEntity],
    strategy: TamperingStrategy,
    scorer: EvaluationScorer,
    *,
    seed: int = 0,
    workers: int = 4,
) -> EvaluationRun:
    """Score every document's untampered and tampered entity sets and
    reduce to VA / AUC; documents missing a score on either side are
    excluded and counted."""
    rng = random.Random(seed)
    by_id = {entity.kb_id: entity for entity in catalog}
    docs = sorted(documents, key=lambda d: d.id)

    # sample all replacements up front, in document order, so the RNG
    # stream is independent of scoring parallelism
    plan: list[tuple[EvalDocument, list[CatalogEntity], list[CatalogEntity]]] = []
    for document in docs:
        originals = []
        for kb_id in document.originals_for(strategy.entity_type):
            if kb_id not in by_id:
                raise ValueError(
                    f"document {document.id}: entity {kb_id} missing from catalog"
                )
            originals.append(by_id[kb_id])
        materialized = document.tampered.get(strategy.name, {})
        replacements = []
        for original in originals:
            if original.kb_id in materialized:
                replacement_id = materialized[original.kb_id]
                if replacement_id not in by_id:
                    raise ValueError(
                        f"document {document.id}: tampered entity {replacement_id} "
                        "missing from catalog"
                    )
                replacements.append(by_id[replacement_id])
            else:
                replacements.append(sample_tampered(original, strategy, catalog, rng))
        plan.append((document, originals, replacements))

    def score_document(item) -> tuple[str, float | None, float | None]:
        document, originals, replacements = item
        if not originals:
            return document.id, None, None
        image = _document_image(document)
        return (
            document.id,
            scorer.score_set(image, originals),
            scorer.score_set(image, replacements),
        )

    if workers > 1:
        # warm profile memoization sequentially to keep it race-free
        for document, originals, replacements in plan:
            for entity in (*originals, *replacements):
                scorer.profile_for(entity)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(score_document, plan))
    else:
        outcomes = [score_document(item) for item in plan]
    outcomes.sort(key=lambda o: o[0])

    pairs: list[tuple[str, float, float]] = []
    excluded_ids: list[str] = []
    for document_id, untampered, tampered in outcomes:
        if untampered is None or tampered is None:
            excluded_ids.append(document_id)
        else:
            pairs.append((document_id, untampered, tampered))
    if not pairs:
        raise ValueError("every document was excluded; nothing to evaluate")

    va = verification_accuracy([(u, t) for _, u, t in pairs])
    roc = auc([u for _, u, _ in pairs], [t for _, _, t in pairs])
    return EvaluationRun(
        strategy_name=strategy.name,
        strategy_params=_strategy_params(strategy),
        seed=seed,
        dataset_size=len(docs),
        pairs=pairs,
        excluded_ids=excluded_ids,
        va=va,
        auc=roc,
    )


def _strategy_params(strategy: TamperingStrategy) -> dict:
    params = {}
    for key, value in vars(strategy).items():
        if key == "entity_type":
            continue
        params[key] = value
    return params


def run_to_json(run: EvaluationRun) -> dict:
    return {
        "run_version": RUN_VERSION,
        "strategy": {"name": run.strategy_name, "params": run.strategy_params},
        "seed": run.seed,
        "dataset_size": run.dataset_size,
        "excluded": run.excluded,
        "excluded_ids": list(run.excluded_ids),
        "metrics": {"va": run.va, "auc": run.auc},
        "pairs": [
            {"id": document_id, "untampered": u, "tampered": t}
            for document_id, u, t in run.pairs
        ],
    }


def runs_to_json(runs: list[EvaluationRun]) -> list[dict]:
    return [run_to_json(run) for run in runs]


def render_table(runs: list[EvaluationRun]) -> str:
    """Strategy x {VA, AUC} rows, two decimals (round-half-to-even)."""
    header = f"{'strategy':<32} {'va':>6} {'auc':>6}"
    lines = [header, "-" * len(header)]
    for run in runs:
        lines.append(f"{run.strategy_name:<32} {run.va:>6.2f} {run.auc:>6.2f}")
    return "\n".join(lines) + "\n"
