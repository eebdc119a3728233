"""Score a document end to end with the deterministic hash-mock backend.

Builds a tiny fixture tree in a temp directory (gazetteer, KB snapshot,
crawlable images), wires the pipeline, and prints the per-entity
similarity report. The same image is planted as the query and as the
person's reference evidence, so the person's score lands at 1.0.
"""

import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from conftest import build_fixture_env  # reuse the hermetic environment builder

from crossmodal.features.types import ImagePayload
from crossmodal.pipeline import PipelineConfig, build_engine
from crossmodal.scoring.report import report_to_json


def main():
    with tempfile.TemporaryDirectory() as tmp:
        env = build_fixture_env(Path(tmp) / "env")
        config = PipelineConfig.from_file(env.config_path)
        engine = build_engine(config)

        report = engine.score_document(env.text, ImagePayload.from_file(env.doc_image))
        print(json.dumps(report_to_json(report), indent=2))

        print("\nsummary:")
        for kb_id, score in sorted(report.scores.items()):
            if score is None:
                print(f"  {kb_id}: no visual evidence")
            else:
                print(f"  {kb_id}: {score.kind.value} = {score.value:+.3f} "
                      f"({score.evidence_count} reference vector(s))")


if __name__ == "__main__":
    main()
