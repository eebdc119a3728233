"""Document report serialization.

Field order is stable (insertion order, never sorted at dump time) so
reports are byte-comparable across runs; the schema is versioned through
``report_version`` and published at ``schemas/report.schema.json``.
"""

from __future__ import annotations

import json

from .types import CrossModalScore, DocumentReport

REPORT_VERSION = "1"


def report_to_json(report: DocumentReport) -> dict:
    return {
        "report_version": REPORT_VERSION,
        "document_id": report.document_id,
        "language": report.language,
        "entities": [entity.to_json() for entity in report.entities],
        "scores": {
            kb_id: (score.to_json() if score is not None else None)
            for kb_id, score in sorted(report.scores.items())
        },
        "warnings": list(report.warnings),
    }


def report_to_json_str(report: DocumentReport, *, indent: int | None = None) -> str:
    return json.dumps(report_to_json(report), indent=indent)


def report_from_json(data: dict) -> DocumentReport:
    from ..linking.types import LinkedEntity

    if data.get("report_version") != REPORT_VERSION:
        raise ValueError(f"unsupported report version: {data.get('report_version')!r}")
    return DocumentReport(
        document_id=data["document_id"],
        language=data.get("language", "en"),
        entities=[LinkedEntity.from_json(e) for e in data["entities"]],
        scores={
            kb_id: (CrossModalScore.from_json(s) if s is not None else None)
            for kb_id, s in data["scores"].items()
        },
        warnings=list(data.get("warnings", [])),
    )
