"""Walk the HTTP API in-process: submit an analysis, poll the job,
fetch the entity card and the reference gallery."""

import sys
import tempfile
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from conftest import build_fixture_env

from fastapi.testclient import TestClient

from crossmodal.pipeline import PipelineConfig
from crossmodal.service.app import create_app
from crossmodal.service.config import ServiceConfig


def main():
    with tempfile.TemporaryDirectory() as tmp:
        env = build_fixture_env(Path(tmp) / "env")
        pipeline = PipelineConfig.from_file(env.config_path)
        config = ServiceConfig(pipeline=pipeline, journal_path=str(Path(tmp) / "jobs.jsonl"))
        app = create_app(config)

        with TestClient(app) as client:
            print("POST /v1/analyze ...")
            submitted = client.post(
                "/v1/analyze",
                json={
                    "text": env.text,
                    "image_url": env.doc_image.resolve().as_uri(),
                },
            ).json()
            job_id = submitted["job_id"]
            print(f"  job_id = {job_id}")

            while True:
                job = client.get(f"/v1/jobs/{job_id}").json()
                print(f"  state={job['state']:<9} progress={job['progress']}")
                if job["state"] in ("done", "failed"):
                    break
                time.sleep(0.05)

            report = job["result"]
            print("\nscores:")
            for kb_id, score in report["scores"].items():
                value = "no visual evidence" if score is None else f"{score['kind']} {score['value']:+.3f}"
                print(f"  {kb_id}: {value}")

            print("\nGET /v1/entities/Q76/card ->")
            print(" ", client.get("/v1/entities/Q76/card").json())

            refs = client.get("/v1/entities/Q64/references").json()
            print(f"\nQ64 has {len(refs['images'])} cached reference image(s);")
            thumb = client.get(refs["images"][0]["thumbnail_url"])
            print(f"thumbnail: {len(thumb.content)} bytes of {thumb.headers['content-type']}")


if __name__ == "__main__":
    main()
