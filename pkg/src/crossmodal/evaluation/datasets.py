"""JSON-lines loaders for evaluation datasets and catalogs.

One record per line; the schemas are documented with examples in
``schemas/dataset.md``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .types import CatalogEntity, EvalDocument


def _iter_jsonl(path: str | Path):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read dataset file {p}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            yield json.loads(line)
        except ValueError as exc:
            raise ValueError(f"{p}:{lineno}: invalid JSON: {exc}") from exc


def load_catalog(path: str | Path) -> list[CatalogEntity]:
    entities = [CatalogEntity.from_json(record) for record in _iter_jsonl(path)]
    seen: set[str] = set()
    for entity in entities:
        if entity.kb_id in seen:
            raise ValueError(f"duplicate catalog entity {entity.kb_id}")
        seen.add(entity.kb_id)
    return entities


def load_documents(path: str | Path) -> list[EvalDocument]:
    documents = [EvalDocument.from_json(record) for record in _iter_jsonl(path)]
    seen: set[str] = set()
    for document in documents:
        if document.id in seen:
            raise ValueError(f"duplicate document id {document.id}")
        seen.add(document.id)
    return documents


def dump_jsonl(records: list, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record.to_json() if hasattr(record, "to_json") else record))
            handle.write("\n")
