"""Acceptance suite.

One test per release criterion, each printing a PASS/FAIL line.
Tolerances are pinned here and nowhere else; oracles are independent
re-derivations (pair counting, from-scratch agglomeration, spherical law
of cosines), never calls back into the code under test.

Run with ``pytest tests/test_acceptance.py -v -s``.
"""

from __future__ import annotations

import functools
import json
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from tests.conftest import build_eval_env, build_fixture_env


def criterion(name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print(f"[ACCEPTANCE] {name}: FAIL")
                raise
            print(f"[ACCEPTANCE] {name}: PASS")
            return result

        return wrapper

    return decorate


# ---------------------------------------------------------------------------
# Metric oracles: auc vs exhaustive pair counting (1e-12) on 500 random
# list pairs up to size 200; VA vs direct counting exactly; complement
# symmetry on tie-free inputs. Runtime < 5 s.
# ---------------------------------------------------------------------------


@criterion("metric-oracles")
def test_metric_oracles():
    from crossmodal.evaluation.metrics import auc, verification_accuracy

    rng = np.random.default_rng(20240811)
    started = time.monotonic()
    for trial in range(500):
        nu = int(rng.integers(1, 201))
        nt = int(rng.integers(1, 201))
        if trial % 3 == 0:
            # quantized scores so ties occur
            u = rng.integers(0, 8, size=nu) / 7.0
            t = rng.integers(0, 8, size=nt) / 7.0
        else:
            u = rng.uniform(-1, 1, size=nu)
            t = rng.uniform(-1, 1, size=nt)

        got = auc(list(u), list(t))
        wins = float((u[:, None] > t[None, :]).sum())
        ties = float((u[:, None] == t[None, :]).sum())
        oracle = (wins + 0.5 * ties) / (nu * nt)
        assert abs(got - oracle) <= 1e-12

        pair_n = min(nu, nt)
        pairs = list(zip(u[:pair_n], t[:pair_n]))
        got_va = verification_accuracy(pairs)
        oracle_va = sum(1 for a, b in pairs if a > b) / pair_n
        assert got_va == oracle_va

        if ties == 0.0:
            assert abs(auc(list(u), list(t)) + auc(list(t), list(u)) - 1.0) <= 1e-12
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"metric oracle run took {elapsed:.2f}s"


# ---------------------------------------------------------------------------
# Clustering oracle: equals a brute-force agglomerative oracle on all
# randomized inputs of <= 8 vectors across 1000 trials; permutation
# invariance on every trial. Runtime < 10 s.
# ---------------------------------------------------------------------------


@criterion("clustering-oracle")
def test_clustering_oracle():
    from crossmodal.features.cluster import cluster_assignments, cluster_majority_mean
    from crossmodal.features.types import EmbeddingVector
    from tests.test_cluster import oracle_majority_mean, oracle_partition

    rng = random.Random(987654)
    started = time.monotonic()
    for _ in range(1000):
        n = rng.randint(1, 8)
        dim = rng.randint(2, 5)
        vectors = [
            EmbeddingVector.from_raw([rng.gauss(0, 1) for _ in range(dim)], "test")
            for _ in range(n)
        ]
        tuples = [v.values for v in vectors]

        got_partition = sorted(cluster_assignments(vectors))
        want_partition = sorted(oracle_partition(tuples))
        assert got_partition == want_partition

        _, want_mean = oracle_majority_mean(tuples)
        got = cluster_majority_mean(vectors)
        assert np.allclose(got.values, want_mean, atol=1e-9)

        shuffled = list(vectors)
        rng.shuffle(shuffled)
        assert cluster_majority_mean(shuffled).values == got.values
    elapsed = time.monotonic() - started
    assert elapsed < 10.0, f"clustering oracle run took {elapsed:.2f}s"


# ---------------------------------------------------------------------------
# Geometry: haversine within 0.5% of the spherical-law-of-cosines oracle
# on 100 random pairs; antipodal distance 20015.1 +- 0.1 km.
# ---------------------------------------------------------------------------


@criterion("geometry")
def test_geometry():
    from crossmodal.evaluation.geo import haversine_km
    from crossmodal.linking.types import Coordinate
    from tests.test_geo import spherical_law_of_cosines_km

    rng = random.Random(1789)
    for _ in range(100):
        a = Coordinate(rng.uniform(-90, 90), rng.uniform(-179.99, 180))
        b = Coordinate(rng.uniform(-90, 90), rng.uniform(-179.99, 180))
        got = haversine_km(a, b)
        oracle = spherical_law_of_cosines_km(a, b)
        assert got == pytest.approx(oracle, rel=0.005, abs=1e-9)

    antipodal = haversine_km(Coordinate(0.0, 0.0), Coordinate(0.0, 180.0))
    assert abs(antipodal - 20015.1) <= 0.1


# ---------------------------------------------------------------------------
# Strategy correctness: for each strategy, 1000 seeded samples over a
# synthetic 500-entity catalog all satisfy the strategy predicate;
# sampling-exhausted raised exactly when no confounder exists.
# ---------------------------------------------------------------------------


@criterion("strategy-correctness")
def test_strategy_correctness():
    from crossmodal.errors import SamplingExhaustedError
    from crossmodal.evaluation.geo import haversine_km
    from crossmodal.evaluation.strategies import parse_strategy, sample_tampered, strategy_names
    from tests.test_strategies import synthetic_catalog

    rng = random.Random(555)
    catalog = synthetic_catalog(rng, size=500)

    for name in strategy_names():
        strategy = parse_strategy(name)
        of_type = [c for c in catalog if c.entity_type == strategy.entity_type]
        draw_rng = random.Random(hash(name) & 0xFFFF)
        samples = 0
        for _ in range(1000):
            original = of_type[draw_rng.randrange(len(of_type))]
            eligible_exists = any(
                c.kb_id != original.kb_id
                and c.entity_type == strategy.entity_type
                and strategy.matches(original, c)
                for c in catalog
            )
            try:
                got = sample_tampered(original, strategy, catalog, draw_rng)
            except SamplingExhaustedError:
                assert not eligible_exists, (name, original.kb_id)
                continue
            assert eligible_exists
            samples += 1
            assert got.kb_id != original.kb_id
            assert got.entity_type == strategy.entity_type
            assert strategy.matches(original, got)
            if name.startswith("location-gcd-"):
                lo, hi = (float(x) for x in name.removeprefix("location-gcd-").split("-"))
                distance = haversine_km(original.coordinate, got.coordinate)
                assert lo <= distance < hi
                assert got.location_type == original.location_type
        assert samples > 0, f"{name} never produced a sample"

    # forced exhaustion: a catalog with no eligible confounder at all
    lonely = [c for c in catalog if c.entity_type.value == "person"][:1]
    with pytest.raises(SamplingExhaustedError):
        sample_tampered(lonely[0], parse_strategy("random-person"), lonely, random.Random(0))


# ---------------------------------------------------------------------------
# Hermetic end-to-end: synthetic 10-document dataset where untampered
# evidence matches the query (cosine 1) and tampered evidence is
# orthogonal -> VA = 1.00 and AUC = 1.00 exactly; inverted construction
# -> VA = 0.00, AUC = 0.00. Full run < 30 s.
# ---------------------------------------------------------------------------


@criterion("hermetic-end-to-end")
def test_hermetic_end_to_end(tmp_path):
    from tests.test_eval_runner import run_env

    started = time.monotonic()
    env = build_eval_env(tmp_path / "forward")
    run = run_env(env)
    assert run.va == 1.0
    assert run.auc == 1.0
    assert run.dataset_size == 10

    inverted = build_eval_env(tmp_path / "inverted", invert=True)
    run_inverted = run_env(inverted)
    assert run_inverted.va == 0.0
    assert run_inverted.auc == 0.0
    elapsed = time.monotonic() - started
    assert elapsed < 30.0, f"hermetic run took {elapsed:.2f}s"


# ---------------------------------------------------------------------------
# Determinism: two `evaluate` CLI runs with the same seed produce
# byte-identical run.json; score_document under the hash-mock backend is
# bit-stable across runs.
# ---------------------------------------------------------------------------


@criterion("determinism")
def test_determinism(tmp_path):
    from crossmodal.features.types import ImagePayload
    from crossmodal.pipeline import PipelineConfig, build_engine
    from crossmodal.scoring.report import report_to_json_str
    from tests.test_cli import write_eval_config

    fixture_env = build_fixture_env(tmp_path / "env")
    eval_env = build_eval_env(tmp_path / "eval", materialize=False)
    config = write_eval_config(fixture_env, eval_env)

    blobs = []
    for n in (1, 2):
        out = tmp_path / f"out{n}"
        result = subprocess.run(
            [sys.executable, "-c", "import sys; from crossmodal.cli import main; sys.exit(main())",
             "evaluate",
             "--dataset", str(eval_env.dataset_path),
             "--catalog", str(eval_env.catalog_path),
             "--strategy", "random-location",
             "--seed", "2024",
             "--out", str(out),
             "--config", str(config)],
            capture_output=True, text=True, timeout=120,
        )
        assert result.returncode == 0, result.stderr
        blobs.append((out / "run.json").read_bytes())
    assert blobs[0] == blobs[1]

    pipeline = PipelineConfig.from_file(fixture_env.hash_config_path, env={})
    payload = ImagePayload.from_file(fixture_env.doc_image)
    first = report_to_json_str(build_engine(pipeline).score_document(fixture_env.text, payload))
    second = report_to_json_str(build_engine(pipeline).score_document(fixture_env.text, payload))
    assert first == second


# ---------------------------------------------------------------------------
# Cache TTL: with an injected clock, entries hit at +23h59m and miss at
# +24h01m; a duplicate /analyze within the TTL returns the same job_id.
# ---------------------------------------------------------------------------


@criterion("cache-ttl")
def test_cache_ttl(tmp_path):
    from fastapi.testclient import TestClient

    from crossmodal.cache import MemoryCacheBackend, TTLCache
    from crossmodal.clock import ManualClock
    from tests.test_service import analyze_payload, make_service

    clock = ManualClock()
    cache = TTLCache(MemoryCacheBackend(), clock=clock, default_ttl=24 * 3600.0)
    cache.put("entry", b"payload")
    clock.advance(23 * 3600 + 59 * 60)
    assert cache.get("entry") == b"payload"
    clock.advance(2 * 60)
    assert cache.get("entry") is None

    fixture_env = build_fixture_env(tmp_path / "env")
    app, *_ = make_service(fixture_env, tmp_path)
    with TestClient(app) as client:
        first = client.post("/v1/analyze", json=analyze_payload(fixture_env)).json()
        second = client.post("/v1/analyze", json=analyze_payload(fixture_env)).json()
    assert first["job_id"] == second["job_id"]


# ---------------------------------------------------------------------------
# Typing truth table: classify_entity against the enumerated 8-case
# precedence table (human -> person, event list -> event,
# coordinate -> location, else discard).
# ---------------------------------------------------------------------------


@criterion("typing-truth-table")
def test_typing_truth_table():
    import itertools

    from crossmodal.linking.classify import classify_entity
    from crossmodal.linking.types import Coordinate, EntityType, KBRecord

    for human, listed, coord in itertools.product([False, True], repeat=3):
        record = KBRecord(
            kb_id="QT",
            label="T",
            instance_of=("Q5",) if human else ("Q515",),
            coordinate=Coordinate(1.0, 2.0) if coord else None,
        )
        events = frozenset({"QT"}) if listed else frozenset()
        expected = (
            EntityType.PERSON
            if human
            else EntityType.EVENT
            if listed
            else EntityType.LOCATION
            if coord
            else None
        )
        assert classify_entity(record, events) == expected, (human, listed, coord)


# ---------------------------------------------------------------------------
# Service contract: job states monotone under concurrent polling;
# crash-resume recovers at the last completed stage; API responses
# validate against the published schemas.
# ---------------------------------------------------------------------------


@criterion("service-contract")
def test_service_contract(tmp_path, fixture_env):
    from tests.test_schemas import test_api_responses_validate
    from tests.test_service import (
        test_crash_resume_recovers_at_last_completed_stage,
        test_job_states_monotone_under_concurrent_polling,
    )

    for sub in ("monotone", "resume", "api"):
        (tmp_path / sub).mkdir(exist_ok=True)
    test_job_states_monotone_under_concurrent_polling(fixture_env, tmp_path / "monotone")
    test_crash_resume_recovers_at_last_completed_stage(fixture_env, tmp_path / "resume")

    import json as json_module

    from referencing import Registry, Resource

    from tests.test_schemas import SCHEMA_DIR

    resources = []
    for name in ("report.schema.json", "run.schema.json", "api.schema.json"):
        schema = json_module.loads((SCHEMA_DIR / name).read_text())
        resource = Resource.from_contents(schema)
        resources.extend([(schema["$id"], resource), (name, resource)])
    registry = Registry().with_resources(resources)
    test_api_responses_validate(fixture_env, tmp_path / "api", registry)
