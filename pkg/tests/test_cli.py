"""End-to-end CLI tests through the installed console script, checking
the documented exit codes: 0 success, 2 usage, 78 config, 1 runtime."""

import json
import signal
import socket
import subprocess
import sys
import time
from pathlib import Path

CLI = [sys.executable, "-c", "import sys; from crossmodal.cli import main; sys.exit(main())"]


def run_cli(*args, **kwargs):
    return subprocess.run([*CLI, *args], capture_output=True, text=True, timeout=120, **kwargs)


def test_analyze_fixture_backend(fixture_env):
    result = run_cli(
        "analyze",
        "--text-file", str(fixture_env.text_path),
        "--image", str(fixture_env.doc_image),
        "--config", str(fixture_env.config_path),
    )
    assert result.returncode == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["report_version"] == "1"
    assert {k: v["value"] for k, v in report["scores"].items()} == {
        "Q76": 1.0, "Q64": 1.0, "Q8866": 1.0,
    }


def test_analyze_types_subset_omits_other_kinds(fixture_env, tmp_path):
    out = tmp_path / "report.json"
    result = run_cli(
        "analyze",
        "--text-file", str(fixture_env.text_path),
        "--image", str(fixture_env.doc_image),
        "--config", str(fixture_env.config_path),
        "--types", "p",
        "--json", str(out),
    )
    assert result.returncode == 0, result.stderr
    report = json.loads(out.read_text())
    kinds = {v["kind"] for v in report["scores"].values() if v}
    assert kinds == {"CMPS"}
    assert set(report["scores"]) == {"Q76"}


def test_analyze_usage_errors(fixture_env):
    missing_source = run_cli("analyze", "--image", str(fixture_env.doc_image))
    assert missing_source.returncode == 2

    missing_image = run_cli(
        "analyze", "--text", "x", "--image", "/nonexistent/image.png",
        "--config", str(fixture_env.config_path),
    )
    assert missing_image.returncode == 2


def test_verify_claim_with_matching_evidence(fixture_env):
    result = run_cli(
        "verify-claim",
        "--entity", "Barack Obama",
        "--image", str(fixture_env.doc_image),
        "--config", str(fixture_env.config_path),
    )
    assert result.returncode == 0, result.stderr
    verdict = json.loads(result.stdout)
    assert verdict["kb_id"] == "Q76"
    assert verdict["kind"] == "CMPS"
    assert verdict["score"]["value"] == 1.0


def test_verify_claim_no_evidence_still_succeeds(fixture_env):
    result = run_cli(
        "verify-claim",
        "--entity", "Q7259",
        "--image", str(fixture_env.doc_image),
        "--config", str(fixture_env.config_path),
    )
    assert result.returncode == 0, result.stderr
    verdict = json.loads(result.stdout)
    assert verdict["score"] is None
    assert verdict["warnings"]


def test_verify_claim_unresolvable_label(fixture_env):
    result = run_cli(
        "verify-claim",
        "--entity", "No Such Person Anywhere",
        "--image", str(fixture_env.doc_image),
        "--config", str(fixture_env.config_path),
    )
    assert result.returncode == 1
    assert "cannot resolve" in result.stderr


def write_eval_config(fixture_env, eval_env) -> Path:
    import yaml

    config = {
        "backend": "fixture",
        "gazetteer_path": str(fixture_env.root / "gazetteer.tsv"),
        "kb_records_path": str(fixture_env.root / "kb.json"),
        "engine_fixture_root": str(fixture_env.root / "fixtures"),
        "fixture_vectors": {
            "face": str(fixture_env.root / "face.tsv"),
            "location": str(eval_env.vectors_path),
            "event": str(fixture_env.root / "event.tsv"),
        },
        "fixture_detections_path": str(fixture_env.root / "detections.tsv"),
    }
    path = eval_env.root / "eval-config.yaml"
    path.write_text(yaml.safe_dump(config), encoding="utf-8")
    return path


def test_evaluate_writes_outputs_and_is_seed_deterministic(fixture_env, tmp_path):
    from tests.conftest import build_eval_env

    eval_env = build_eval_env(tmp_path / "eval", materialize=False)
    config = write_eval_config(fixture_env, eval_env)

    outputs = []
    for n in (1, 2):
        out = tmp_path / f"out{n}"
        result = run_cli(
            "evaluate",
            "--dataset", str(eval_env.dataset_path),
            "--catalog", str(eval_env.catalog_path),
            "--strategy", "random-location",
            "--seed", "42",
            "--out", str(out),
            "--config", str(config),
        )
        assert result.returncode == 0, result.stderr
        outputs.append((out / "run.json").read_bytes())
        assert (out / "table.txt").exists()

    assert outputs[0] == outputs[1]
    run = json.loads(outputs[0])
    assert run["seed"] == 42
    assert run["strategy"]["name"] == "random-location"


def test_evaluate_unknown_strategy_is_usage_error(fixture_env, tmp_path):
    from tests.conftest import build_eval_env

    eval_env = build_eval_env(tmp_path / "eval")
    result = run_cli(
        "evaluate",
        "--dataset", str(eval_env.dataset_path),
        "--catalog", str(eval_env.catalog_path),
        "--strategy", "definitely-not-a-strategy",
    )
    assert result.returncode == 2
    assert "random-person" in result.stderr


def test_serve_invalid_config_exits_78(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("backend: fixture\nunknown_key: 1\n", encoding="utf-8")
    result = run_cli("serve", "--config", str(bad))
    assert result.returncode == 78
    assert "configuration error" in result.stderr


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def test_serve_answers_healthz_and_drains_on_sigterm(fixture_env, tmp_path):
    import httpx
    import yaml

    port = free_port()
    config = yaml.safe_load(fixture_env.config_path.read_text())
    config["service"] = {
        "port": port,
        "journal_path": str(tmp_path / "journal.jsonl"),
        "workers": 1,
    }
    config_path = tmp_path / "serve.yaml"
    config_path.write_text(yaml.safe_dump(config), encoding="utf-8")

    process = subprocess.Popen(
        [*CLI, "serve", "--config", str(config_path)],
        stdout=subprocess.PIPE, stderr=subprocess.PIPE,
    )
    try:
        base = f"http://127.0.0.1:{port}"
        deadline = time.monotonic() + 30
        while time.monotonic() < deadline:
            try:
                if httpx.get(base + "/healthz", timeout=1.0).status_code == 200:
                    break
            except httpx.HTTPError:
                time.sleep(0.2)
        else:
            raise AssertionError("service never became healthy")

        submitted = httpx.post(
            base + "/v1/analyze",
            json={
                "text": fixture_env.text,
                "image_url": fixture_env.doc_image.resolve().as_uri(),
            },
            timeout=5.0,
        )
        assert submitted.status_code == 202
        job_id = submitted.json()["job_id"]
        deadline = time.monotonic() + 20
        while time.monotonic() < deadline:
            job = httpx.get(f"{base}/v1/jobs/{job_id}", timeout=2.0).json()
            if job["state"] == "done":
                break
            time.sleep(0.1)
        assert job["state"] == "done"

        process.send_signal(signal.SIGTERM)
        # uvicorn drains (lifespan shutdown stops the worker pool), then
        # re-raises the signal so supervisors see the true exit cause
        rc = process.wait(timeout=20)
        assert rc in (0, -signal.SIGTERM)
        stderr = process.stderr.read().decode()
        assert "Application shutdown complete" in stderr
    finally:
        if process.poll() is None:
            process.kill()
            process.wait()
