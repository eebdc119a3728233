"""Service configuration: the pipeline config plus HTTP and worker
settings, loadable from one YAML file with environment overrides.

Layout: pipeline keys at the top level, service keys under ``service:``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigurationError
from ..pipeline import ENV_PREFIX, PipelineConfig, load_config_mapping


@dataclass
class ServiceConfig:
    pipeline: PipelineConfig
    host: str = "127.0.0.1"
    port: int = 8080
    journal_path: str | None = None
    workers: int = 2
    analyze_ttl_hours: float = 24.0
    parse_ttl_hours: float = 24.0
    max_upload_bytes: int = 10 * 1024 * 1024
    frontend_dir: str | None = None  # serve the built UI from this directory

    @classmethod
    def from_file(cls, path: str | Path, *, env: dict | None = None) -> "ServiceConfig":
        raw = load_config_mapping(path)
        service_raw = raw.pop("service", {})
        if not isinstance(service_raw, dict):
            raise ConfigurationError("'service' section must be a mapping")
        pipeline = PipelineConfig.from_mapping(raw, env=env, source=str(path))

        env = os.environ if env is None else env
        for key, env_key in (
            ("workers", ENV_PREFIX + "SERVICE_WORKERS"),
            ("journal_path", ENV_PREFIX + "JOURNAL_PATH"),
            ("port", ENV_PREFIX + "PORT"),
        ):
            value = env.get(env_key)
            if value is not None:
                service_raw[key] = value
        try:
            if "workers" in service_raw:
                service_raw["workers"] = int(service_raw["workers"])
            if "port" in service_raw:
                service_raw["port"] = int(service_raw["port"])
            if "analyze_ttl_hours" in service_raw:
                service_raw["analyze_ttl_hours"] = float(service_raw["analyze_ttl_hours"])
            if "parse_ttl_hours" in service_raw:
                service_raw["parse_ttl_hours"] = float(service_raw["parse_ttl_hours"])
            return cls(pipeline=pipeline, **service_raw)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"invalid service config {path}: {exc}") from exc
