"""Configuration and wiring for the analysis pipeline.

``PipelineConfig`` is plain data loadable from a YAML/JSON file with
environment overrides; ``build_engine`` turns it into a ready
:class:`~crossmodal.scoring.engine.ConsistencyEngine`. Three provider
backends exist: ``hash-mock`` (deterministic, zero dependencies),
``fixture`` (vectors and detections from annotation files), and
``remote`` (the RPC sidecar).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from .cache import DiskCacheBackend, MemoryCacheBackend, TTLCache
from .clock import Clock, SystemClock
from .errors import ConfigurationError
from .evidence.fetch import FetchPolicy, ImageFetcher
from .evidence.refset import ReferenceImageCollector
from .evidence.search import DirectoryImageSearch, HttpImageSearch
from .features.detectors import FixtureFaceDetector, FullFrameFaceDetector
from .features.providers import FixtureEmbedProvider, HashEmbedProvider
from .features.types import Modality
from .linking.annotator import HttpAnnotator
from .linking.events import load_event_list
from .linking.gazetteer import GazetteerAnnotator
from .linking.kb import CachingKBClient, HttpKBClient, StaticKBClient
from .linking.linker import EntityLinker
from .scoring.engine import ConsistencyEngine

BACKENDS = ("hash-mock", "fixture", "remote")

ENV_PREFIX = "CROSSMODAL_"


def load_config_mapping(path: str | Path) -> dict:
    try:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"invalid config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigurationError(f"config root must be a mapping: {path}")
    return raw


@dataclass
class PipelineConfig:
    backend: str = "hash-mock"
    language: str = "en"
    k: int = 5
    hash_dim: int = 128
    cluster_threshold: float = 0.5

    cache_dir: str | None = None
    cache_ttl_hours: float = 24.0
    cache_capacity: int = 4096

    gazetteer_path: str | None = None
    annotation_url: str | None = None
    kb_records_path: str | None = None
    kb_entity_url: str | None = None
    kb_search_url: str | None = None
    event_list_path: str | None = None

    engine_fixture_root: str | None = None
    engine_search_url: str | None = None
    engine_api_key_env: str = "CROSSMODAL_ENGINE_API_KEY"

    fixture_vectors: dict[str, str] = field(default_factory=dict)
    fixture_detections_path: str | None = None
    provider_rpc_address: str | None = None

    fetch_min_dimension: int = 64
    fetch_parallelism: int = 4
    workers: int = 2

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ConfigurationError(
                f"unknown backend {self.backend!r}; choose from {', '.join(BACKENDS)}"
            )

    @classmethod
    def from_mapping(cls, raw: dict, *, env: dict | None = None, source: str = "<config>") -> "PipelineConfig":
        """Build from a parsed mapping; unknown keys are rejected.

        Environment overrides: ``CROSSMODAL_BACKEND``,
        ``CROSSMODAL_PROVIDER_RPC_ADDRESS``, ``CROSSMODAL_WORKERS``,
        ``CROSSMODAL_CACHE_TTL_HOURS``, ``CROSSMODAL_CACHE_DIR``.
        """
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")

        raw = dict(raw)
        env = os.environ if env is None else env
        overrides = {
            "backend": env.get(ENV_PREFIX + "BACKEND"),
            "provider_rpc_address": env.get(ENV_PREFIX + "PROVIDER_RPC_ADDRESS"),
            "workers": env.get(ENV_PREFIX + "WORKERS"),
            "cache_ttl_hours": env.get(ENV_PREFIX + "CACHE_TTL_HOURS"),
            "cache_dir": env.get(ENV_PREFIX + "CACHE_DIR"),
        }
        for key, value in overrides.items():
            if value is not None:
                raw[key] = value
        try:
            if "workers" in raw:
                raw["workers"] = int(raw["workers"])
            if "cache_ttl_hours" in raw:
                raw["cache_ttl_hours"] = float(raw["cache_ttl_hours"])
            return cls(**raw)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"invalid config {source}: {exc}") from exc

    @classmethod
    def from_file(cls, path: str | Path, *, env: dict | None = None) -> "PipelineConfig":
        """Load from YAML (JSON is valid YAML)."""
        return cls.from_mapping(load_config_mapping(path), env=env, source=str(path))

    @property
    def cache_ttl_seconds(self) -> float:
        return self.cache_ttl_hours * 3600.0


def build_cache(config: PipelineConfig, clock: Clock) -> TTLCache:
    backend = (
        DiskCacheBackend(config.cache_dir) if config.cache_dir else MemoryCacheBackend()
    )
    return TTLCache(
        backend,
        clock=clock,
        default_ttl=config.cache_ttl_seconds,
        capacity=config.cache_capacity,
    )


def build_linker(config: PipelineConfig, cache: TTLCache) -> EntityLinker:
    if config.gazetteer_path:
        annotator = GazetteerAnnotator.from_file(config.gazetteer_path)
    elif config.annotation_url:
        annotator = HttpAnnotator(config.annotation_url)
    else:
        raise ConfigurationError("configure gazetteer_path or annotation_url")

    if config.kb_records_path:
        kb = StaticKBClient.from_file(config.kb_records_path)
    elif config.kb_entity_url and config.kb_search_url:
        kb = HttpKBClient(config.kb_entity_url, config.kb_search_url, language=config.language)
    else:
        raise ConfigurationError("configure kb_records_path or kb_entity_url + kb_search_url")
    kb = CachingKBClient(kb, cache)

    event_ids = (
        load_event_list(config.event_list_path) if config.event_list_path else frozenset()
    )
    return EntityLinker(annotator, kb, event_ids)


def build_collector(
    config: PipelineConfig, cache: TTLCache, clock: Clock
) -> ReferenceImageCollector:
    if config.engine_fixture_root:
        engine = DirectoryImageSearch(config.engine_fixture_root)
    elif config.engine_search_url:
        engine = HttpImageSearch(
            config.engine_search_url, api_key_env=config.engine_api_key_env
        )
    else:
        raise ConfigurationError("configure engine_fixture_root or engine_search_url")
    fetcher = ImageFetcher(
        clock=clock,
        policy=FetchPolicy(min_dimension=config.fetch_min_dimension),
    )
    return ReferenceImageCollector(
        engine, fetcher, cache, parallelism=config.fetch_parallelism
    )


def build_providers(config: PipelineConfig):
    if config.backend == "hash-mock":
        providers = {m: HashEmbedProvider(m, dim=config.hash_dim) for m in Modality}
        detector = FullFrameFaceDetector()
        return providers, detector

    if config.backend == "fixture":
        providers = {}
        for modality in Modality:
            path = config.fixture_vectors.get(modality.value)
            if path is None:
                raise ConfigurationError(
                    f"fixture backend needs fixture_vectors[{modality.value!r}]"
                )
            providers[modality] = FixtureEmbedProvider.from_file(modality, path)
        if not config.fixture_detections_path:
            raise ConfigurationError("fixture backend needs fixture_detections_path")
        detector = FixtureFaceDetector.from_file(config.fixture_detections_path)
        return providers, detector

    # remote
    if not config.provider_rpc_address:
        raise ConfigurationError("remote backend needs provider_rpc_address")
    from .features.rpc import RpcEmbedProvider, RpcFaceDetector

    providers = {
        m: RpcEmbedProvider(config.provider_rpc_address, m) for m in Modality
    }
    detector = RpcFaceDetector(config.provider_rpc_address)
    return providers, detector


@dataclass
class PipelineBundle:
    """Wired pipeline plus the shared cache and clock it was built with."""

    config: PipelineConfig
    clock: Clock
    cache: TTLCache
    engine: ConsistencyEngine


def build_bundle(config: PipelineConfig, *, clock: Clock | None = None) -> PipelineBundle:
    clock = clock if clock is not None else SystemClock()
    cache = build_cache(config, clock)
    linker = build_linker(config, cache)
    collector = build_collector(config, cache, clock)
    providers, detector = build_providers(config)
    engine = ConsistencyEngine(
        linker=linker,
        collector=collector,
        providers=providers,
        detector=detector,
    )
    return PipelineBundle(config=config, clock=clock, cache=cache, engine=engine)


def build_engine(config: PipelineConfig, *, clock: Clock | None = None) -> ConsistencyEngine:
    return build_bundle(config, clock=clock).engine
