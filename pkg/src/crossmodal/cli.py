"""Command-line access to the pipeline and the evaluation harness.

Exit codes: 0 success, 2 usage error, 78 configuration error, 1 runtime
failure. Data goes to stdout, logs to stderr.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from .errors import ConfigurationError, CrossmodalError, NoCandidateError
from .evaluation.datasets import load_catalog, load_documents
from .evaluation.runner import EvaluationScorer, render_table, run_evaluation, run_to_json
from .evaluation.strategies import parse_strategy, strategy_names
from .features.types import ImagePayload
from .linking.types import EntityType
from .pipeline import PipelineConfig, build_bundle, build_providers
from .scoring.engine import ScoreOptions
from .scoring.report import report_to_json
from .scoring.types import KIND_FOR_TYPE

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 78
EXIT_RUNTIME = 1

logger = logging.getLogger(__name__)

TYPE_ALIASES = {
    "p": EntityType.PERSON,
    "person": EntityType.PERSON,
    "persons": EntityType.PERSON,
    "l": EntityType.LOCATION,
    "location": EntityType.LOCATION,
    "locations": EntityType.LOCATION,
    "e": EntityType.EVENT,
    "event": EntityType.EVENT,
    "events": EntityType.EVENT,
}


def _parse_types(spec: str | None) -> frozenset[EntityType]:
    if not spec:
        return frozenset(EntityType)
    types = set()
    for token in spec.split(","):
        token = token.strip().lower()
        if not token:
            continue
        if token not in TYPE_ALIASES:
            raise click.BadParameter(
                f"unknown entity type {token!r}; use p, l, e or person, location, event"
            )
        types.add(TYPE_ALIASES[token])
    if not types:
        raise click.BadParameter("no entity types selected")
    return frozenset(types)


def _load_config(config_path: str | None, backend: str | None) -> PipelineConfig:
    if config_path:
        config = PipelineConfig.from_file(config_path)
    else:
        config = PipelineConfig()
    if backend:
        from dataclasses import replace

        config = replace(config, backend=backend)
    return config


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log debug output to stderr.")
def cli(verbose: bool):
    """Quantify image-text consistency for named entities."""
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@cli.command()
@click.option("--url", help="Analyze the article behind this link.")
@click.option("--text-file", type=click.Path(exists=True, dir_okay=False), help="Read the document text from a file.")
@click.option("--text", "text_inline", help="Document text given inline (single-claim mode).")
@click.option("--image", "image_path", type=click.Path(exists=True, dir_okay=False), help="Query image path.")
@click.option("--types", "types_spec", help="Comma-separated subset: p,l,e.")
@click.option("--language", default="en", show_default=True)
@click.option("--json", "json_out", type=click.Path(dir_okay=False), help="Also write the report to this file.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--backend", type=click.Choice(["hash-mock", "fixture", "remote"]))
def analyze(url, text_file, text_inline, image_path, types_spec, language, json_out, config_path, backend):
    """Score one document (text + image) against its entities."""
    sources = [s for s in (url, text_file, text_inline) if s]
    if len(sources) != 1:
        raise click.UsageError("provide exactly one of --url, --text-file, --text")
    types = _parse_types(types_spec)

    config = _load_config(config_path, backend)
    bundle = build_bundle(config)

    if url:
        from .evidence.fetch import FetchPolicy, ImageFetcher
        from .service.articles import ArticleExtractor

        article = ArticleExtractor().extract(url)
        text = article.text
        if image_path is None and article.main_image_url:
            # the document image is scored as-is; the evidence quality
            # floor applies only to crawled references
            fetcher = ImageFetcher(policy=FetchPolicy(enforce_dimensions=False))
            image = fetcher.fetch(article.main_image_url)
            payload = ImagePayload(content=image.content, content_type=image.content_type)
        else:
            payload = ImagePayload.from_file(image_path) if image_path else None
    else:
        text = Path(text_file).read_text(encoding="utf-8") if text_file else text_inline
        payload = ImagePayload.from_file(image_path) if image_path else None

    options = ScoreOptions(types=types, language=language, k=config.k)
    report = bundle.engine.score_document(text, payload, options)
    output = json.dumps(report_to_json(report), indent=2)
    click.echo(output)
    if json_out:
        Path(json_out).write_text(output + "\n", encoding="utf-8")


@cli.command("verify-claim")
@click.option("--entity", required=True, help="Knowledge-base id or label of the claimed entity.")
@click.option("--image", "image_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--backend", type=click.Choice(["hash-mock", "fixture", "remote"]))
def verify_claim(entity, image_path, config_path, backend):
    """Score a single claimed entity against an image."""
    config = _load_config(config_path, backend)
    bundle = build_bundle(config)
    engine = bundle.engine

    record = engine.linker.resolve_label(entity)
    from .linking.classify import classify_entity

    entity_type = classify_entity(record, engine.linker.event_ids)
    if entity_type is None:
        raise CrossmodalError(
            f"{record.kb_id} is neither a person, a location, nor a listed event"
        )

    from .linking.types import LinkedEntity, TextSpan

    linked = LinkedEntity(
        kb_id=record.kb_id,
        label=record.label,
        entity_type=entity_type,
        spans=(TextSpan(0, len(record.label), record.label),),
        record=record,
    )
    payload = ImagePayload.from_file(image_path)
    warnings: list[str] = []
    score = engine.score_entity(payload, linked, warnings=warnings)
    result = {
        "kb_id": record.kb_id,
        "label": record.label,
        "entity_type": entity_type.value,
        "kind": KIND_FOR_TYPE[entity_type].value,
        "score": score.to_json() if score is not None else None,
        "warnings": warnings,
    }
    click.echo(json.dumps(result, indent=2))


@cli.command()
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--catalog", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--strategy", "strategy_name", required=True)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".", show_default=True)
@click.option("--workers", default=4, show_default=True, type=int)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--backend", type=click.Choice(["hash-mock", "fixture", "remote"]))
def evaluate(dataset, catalog, strategy_name, seed, out_dir, workers, config_path, backend):
    """Run one tampering strategy and write run.json + table.txt."""
    try:
        strategy = parse_strategy(strategy_name)
    except ValueError:
        raise click.BadParameter(
            f"unknown strategy {strategy_name!r}; valid: {', '.join(strategy_names())}",
            param_hint="--strategy",
        )
    config = _load_config(config_path, backend)
    providers, detector = build_providers(config)
    scorer = EvaluationScorer(
        providers=providers, detector=detector, cluster_threshold=config.cluster_threshold
    )
    documents = load_documents(dataset)
    catalog_entities = load_catalog(catalog)
    run = run_evaluation(
        documents, catalog_entities, strategy, scorer, seed=seed, workers=workers
    )

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    run_json = json.dumps(run_to_json(run), indent=2) + "\n"
    (out / "run.json").write_text(run_json, encoding="utf-8")
    table = render_table([run])
    (out / "table.txt").write_text(table, encoding="utf-8")
    click.echo(table, nl=False)
    click.echo(f"wrote {out / 'run.json'} and {out / 'table.txt'}", err=True)


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
def serve(config_path):
    """Run the HTTP service until terminated."""
    import uvicorn

    from .service.app import create_app
    from .service.config import ServiceConfig

    config = ServiceConfig.from_file(config_path)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")


def main() -> int:
    try:
        cli.main(standalone_mode=False)
        return EXIT_OK
    except click.exceptions.Abort:
        return EXIT_RUNTIME
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as exc:
        click.echo(f"configuration error: {exc}", err=True)
        return EXIT_CONFIG
    except NoCandidateError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_RUNTIME
    except CrossmodalError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_RUNTIME
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_RUNTIME
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
