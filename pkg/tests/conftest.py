"""Shared fixtures: deterministic clocks, tiny PNG factories, and
hermetic knowledge-base / gazetteer builders."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from pathlib import Path

import pytest
import yaml
from PIL import Image

from crossmodal.clock import ManualClock
from crossmodal.linking.types import Coordinate, KBRecord


def png_bytes(width: int = 64, height: int = 64, color=(200, 30, 30)) -> bytes:
    buf = io.BytesIO()
    Image.new("RGB", (width, height), color).save(buf, format="PNG")
    return buf.getvalue()


def write_png(path, width: int = 64, height: int = 64, color=(200, 30, 30)) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.new("RGB", (width, height), color).save(path, format="PNG")


@pytest.fixture
def clock() -> ManualClock:
    return ManualClock()


@pytest.fixture
def kb_records() -> dict[str, KBRecord]:
    return {
        "Q76": KBRecord(
            kb_id="Q76",
            label="Barack Obama",
            instance_of=("Q5",),
            country_of_citizenship="Q30",
            gender="Q6581097",
            description="44th president of the United States",
            depiction="https://img.example/obama.jpg",
        ),
        "Q64": KBRecord(
            kb_id="Q64",
            label="Berlin",
            instance_of=("Q515",),
            coordinate=Coordinate(52.52, 13.405),
            description="capital of Germany",
        ),
        "Q30": KBRecord(kb_id="Q30", label="United States"),
        "Q8866": KBRecord(
            kb_id="Q8866",
            label="2016 United States elections",
            instance_of=("Q40231",),
            parent_classes=("Q40231",),
            coordinate=Coordinate(38.9, -77.0),
            description="general elections",
        ),
    }


@pytest.fixture
def event_ids() -> frozenset[str]:
    return frozenset({"Q8866"})


@dataclass
class FixtureEnv:
    """A self-contained pipeline environment on disk.

    The document text mentions one person (Q76), one location (Q64), and
    one event (Q8866). Under the fixture backend every entity's reference
    evidence embeds to exactly the query image's vector, so all three
    similarities come out 1.0.
    """

    root: Path
    config_path: Path  # fixture backend
    hash_config_path: Path  # hash-mock backend
    doc_image: Path
    text: str
    text_path: Path


def build_fixture_env(root: Path) -> FixtureEnv:
    root.mkdir(parents=True, exist_ok=True)

    gazetteer = root / "gazetteer.tsv"
    gazetteer.write_text(
        "Obama\tQ76\nBarack Obama\tQ76\nBerlin\tQ64\nthe elections\tQ8866\n",
        encoding="utf-8",
    )

    kb_path = root / "kb.json"
    kb_path.write_text(
        json.dumps(
            {
                "records": [
                    {
                        "kb_id": "Q76",
                        "label": "Barack Obama",
                        "instance_of": ["Q5"],
                        "country_of_citizenship": "Q30",
                        "gender": "Q6581097",
                        "description": "44th president of the United States",
                        "depiction": "https://img.example/obama.jpg",
                    },
                    {
                        "kb_id": "Q64",
                        "label": "Berlin",
                        "instance_of": ["Q515"],
                        "coordinate": [52.52, 13.405],
                        "description": "capital of Germany",
                    },
                    {
                        "kb_id": "Q8866",
                        "label": "2016 United States elections",
                        "instance_of": ["Q40231"],
                        "parent_classes": ["Q40231"],
                        "coordinate": [38.9, -77.0],
                    },
                    {
                        "kb_id": "Q7259",
                        "label": "Ada Lovelace",
                        "instance_of": ["Q5"],
                        "description": "mathematician; no crawlable evidence in this fixture",
                    },
                ],
                "search": {"Barack Obama": ["Q76"], "Berlin": ["Q64"]},
            }
        ),
        encoding="utf-8",
    )

    events_path = root / "events.txt"
    events_path.write_text("Q8866\n", encoding="utf-8")

    fixtures = root / "fixtures"
    write_png(fixtures / "Q76" / "00.png", color=(40, 40, 200))
    write_png(fixtures / "Q64" / "00.png", color=(0, 130, 0))
    write_png(fixtures / "Q64" / "01.png", color=(0, 150, 0))
    write_png(fixtures / "Q8866" / "00.png", color=(150, 0, 150))

    doc_image = root / "docs" / "query.png"
    write_png(doc_image, color=(220, 220, 0))

    e1, e2, e3, e4 = "1,0,0,0", "0,1,0,0", "0,0,1,0", "0,0,0,1"
    (root / "face.tsv").write_text(
        f"docs/query@2,2,16,16\t{e1}\nQ76/00@0,0,16,16\t{e1}\n", encoding="utf-8"
    )
    (root / "location.tsv").write_text(
        f"docs/query\t{e2}\nQ64/00\t{e2}\nQ64/01\t{e3}\n", encoding="utf-8"
    )
    (root / "event.tsv").write_text(
        f"docs/query\t{e4}\nQ8866/00\t{e4}\n", encoding="utf-8"
    )
    (root / "detections.tsv").write_text(
        "docs/query\t2,2,16,16,0.95\nQ76/00\t0,0,16,16,0.9\n", encoding="utf-8"
    )

    base = {
        "gazetteer_path": str(gazetteer),
        "kb_records_path": str(kb_path),
        "event_list_path": str(events_path),
        "engine_fixture_root": str(fixtures),
    }
    config_path = root / "config.yaml"
    config_path.write_text(
        yaml.safe_dump(
            {
                **base,
                "backend": "fixture",
                "fixture_vectors": {
                    "face": str(root / "face.tsv"),
                    "location": str(root / "location.tsv"),
                    "event": str(root / "event.tsv"),
                },
                "fixture_detections_path": str(root / "detections.tsv"),
            }
        ),
        encoding="utf-8",
    )
    hash_config_path = root / "config-hash.yaml"
    hash_config_path.write_text(
        yaml.safe_dump({**base, "backend": "hash-mock", "hash_dim": 16}),
        encoding="utf-8",
    )

    text = "Obama visited Berlin during the elections."
    text_path = root / "docs" / "article.txt"
    text_path.write_text(text, encoding="utf-8")
    return FixtureEnv(
        root=root,
        config_path=config_path,
        hash_config_path=hash_config_path,
        doc_image=doc_image,
        text=text,
        text_path=text_path,
    )


@pytest.fixture
def fixture_env(tmp_path) -> FixtureEnv:
    return build_fixture_env(tmp_path / "env")


@dataclass
class EvalEnv:
    """Synthetic evaluation dataset with fully controlled geometry.

    Each document mentions one original location whose reference image
    embeds to exactly the query image's vector, while every confounder's
    reference embeds to an orthogonal vector (or the other way around
    with ``invert=True``). ``excluded`` documents reference an original
    with zero stored reference images, producing the no-evidence
    outcome on the untampered side.
    """

    root: Path
    dataset_path: Path
    catalog_path: Path
    vectors_path: Path
    doc_count: int
    excluded: int


def build_eval_env(
    root: Path,
    *,
    doc_count: int = 10,
    invert: bool = False,
    materialize: bool = True,
    excluded: int = 0,
) -> EvalEnv:
    import math

    from crossmodal.evaluation.types import CatalogEntity, EvalDocument
    from crossmodal.linking.types import EntityType, Coordinate

    root.mkdir(parents=True, exist_ok=True)
    refs_root = root / "refs"
    docs_root = root / "docs"

    match_vec = "1,0,0,0"
    other_vec = "0,1,0,0"
    untampered_vec, tampered_vec = (
        (other_vec, match_vec) if invert else (match_vec, other_vec)
    )

    vector_lines: list[str] = []
    catalog: list[CatalogEntity] = []
    documents: list[EvalDocument] = []

    for i in range(doc_count):
        original_id = f"L{i:02d}"
        confounder_id = f"X{i:02d}"
        has_evidence = i < doc_count - excluded

        original_refs = []
        if has_evidence:
            ref_path = refs_root / original_id / "00.png"
            write_png(ref_path, color=(i * 9 % 255, 80, 80))
            original_refs.append(str(ref_path))
            vector_lines.append(f"{original_id}/00\t{untampered_vec}")

        conf_path = refs_root / confounder_id / "00.png"
        write_png(conf_path, color=(80, i * 9 % 255, 80))
        vector_lines.append(f"{confounder_id}/00\t{tampered_vec}")

        # coordinates on a ring so location strategies stay satisfiable
        angle = 2 * math.pi * i / doc_count
        catalog.append(
            CatalogEntity(
                kb_id=original_id,
                entity_type=EntityType.LOCATION,
                label=f"Place {i}",
                coordinate=Coordinate(10 * math.sin(angle), 10 * math.cos(angle)),
                location_type="city",
                reference_images=tuple(original_refs),
            )
        )
        catalog.append(
            CatalogEntity(
                kb_id=confounder_id,
                entity_type=EntityType.LOCATION,
                label=f"Confounder {i}",
                coordinate=Coordinate(-10 * math.sin(angle), -10 * math.cos(angle)),
                location_type="city",
                reference_images=(str(conf_path),),
            )
        )

        doc_image = docs_root / f"D{i:02d}.png"
        write_png(doc_image, color=(200, 200, i * 9 % 255))
        vector_lines.append(f"docs/D{i:02d}\t{match_vec}")
        tampered = (
            {"random-location": {original_id: confounder_id}} if materialize else {}
        )
        documents.append(
            EvalDocument(
                id=f"D{i:02d}",
                text=f"story {i}",
                image=str(doc_image),
                entities={"location": [original_id]},
                tampered=tampered,
            )
        )

    vectors_path = root / "location.tsv"
    vectors_path.write_text("\n".join(vector_lines) + "\n", encoding="utf-8")

    dataset_path = root / "dataset.jsonl"
    dataset_path.write_text(
        "".join(json.dumps(d.to_json()) + "\n" for d in documents), encoding="utf-8"
    )
    catalog_path = root / "catalog.jsonl"
    catalog_path.write_text(
        "".join(json.dumps(c.to_json()) + "\n" for c in catalog), encoding="utf-8"
    )
    return EvalEnv(
        root=root,
        dataset_path=dataset_path,
        catalog_path=catalog_path,
        vectors_path=vectors_path,
        doc_count=doc_count,
        excluded=excluded,
    )
