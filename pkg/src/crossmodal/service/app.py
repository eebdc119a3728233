"""HTTP API, versioned under ``/v1``.

Request handlers never do heavy work: analysis runs on the worker pool
behind a job queue, handlers enqueue and snapshot. Responses follow the
JSON Schemas published under ``schemas/``. External requests and
completed analyses are cached with configurable TTLs (24 h default);
a duplicate ``/analyze`` submission within the TTL returns the same
job id.
"""

from __future__ import annotations

import base64
import io
import threading
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from starlette.datastructures import UploadFile
from PIL import Image, UnidentifiedImageError
from pydantic import BaseModel

from ..cache import make_key
from ..clock import Clock
from ..errors import (
    ConfigurationError,
    ExtractionEmptyError,
    NotFoundError,
    TransportError,
)
from ..evidence.types import ReferenceImageSet
from ..linking.kb import entity_card
from ..linking.types import EntityType
from ..pipeline import PipelineBundle, build_bundle
from .articles import ArticleExtractor
from .config import ServiceConfig
from .jobs import AnalyzeRequest, JobJournal, JobRunner, JobStore, build_stages

API_PREFIX = "/v1"
THUMBNAIL_MAX_SIDE = 256

VALID_TYPES = tuple(t.value for t in EntityType)


class ParseBody(BaseModel):
    url: str


class AnalyzeBody(BaseModel):
    text: str = ""
    image_b64: str | None = None
    image_url: str | None = None
    types: list[str] | None = None
    language: str = "en"


def _error(status: int, error: str, detail: str = "") -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": error, "detail": detail})


def create_app(
    config: ServiceConfig,
    *,
    bundle: PipelineBundle | None = None,
    clock: Clock | None = None,
    extractor: ArticleExtractor | None = None,
    store: JobStore | None = None,
    runner: JobRunner | None = None,
) -> FastAPI:
    if bundle is None:
        bundle = build_bundle(config.pipeline, clock=clock)
    cache = bundle.cache
    engine = bundle.engine
    extractor = extractor if extractor is not None else ArticleExtractor()

    if store is None:
        journal = JobJournal(config.journal_path) if config.journal_path else None
        store = (
            JobStore.load(journal, clock=bundle.clock)
            if journal is not None and journal.path.exists()
            else JobStore(journal, clock=bundle.clock)
        )
    if runner is None:
        runner = JobRunner(store, build_stages(engine), workers=config.workers)

    analyze_ttl = config.analyze_ttl_hours * 3600.0
    parse_ttl = config.parse_ttl_hours * 3600.0
    submit_lock = threading.Lock()
    # image_url submissions fetch in request context for hash-based
    # dedup, so the budget stays well under the 2 s endpoint contract
    from ..evidence.fetch import FetchPolicy, ImageFetcher

    submit_fetcher = ImageFetcher(
        clock=bundle.clock,
        policy=FetchPolicy(timeout=1.5, retries=0, enforce_dimensions=False),
    )

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        runner.start()
        runner.resume()
        yield
        runner.stop(graceful=True)

    app = FastAPI(title="crossmodal", version="1", lifespan=lifespan)
    app.state.store = store
    app.state.runner = runner
    app.state.bundle = bundle

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    # -- article parsing

    @app.post(API_PREFIX + "/parse")
    def parse(body: ParseBody):
        cache_key = make_key("parse", body.url)
        cached = cache.get_json(cache_key)
        if cached is not None:
            return cached
        try:
            article = extractor.extract(body.url)
        except ValueError as exc:
            return _error(422, "invalid-url", str(exc))
        except ExtractionEmptyError as exc:
            return _error(422, "extraction-empty", str(exc))
        except TransportError as exc:
            return _error(502, "upstream-error", str(exc))
        payload = article.to_json()
        cache.put_json(cache_key, payload, ttl=parse_ttl)
        return payload

    # -- analysis jobs

    def _decode_image(content: bytes, source: str) -> Response | bytes:
        if len(content) > config.max_upload_bytes:
            return _error(413, "image-too-large", f"{source} exceeds {config.max_upload_bytes} bytes")
        try:
            with Image.open(io.BytesIO(content)):
                pass
        except (UnidentifiedImageError, OSError):
            return _error(422, "image-undecodable", f"{source} is not a decodable image")
        return content

    def _submit(text: str, image: bytes | None, image_name: str | None, types, language: str):
        if types is None or not types:
            types = list(VALID_TYPES)
        invalid = [t for t in types if t not in VALID_TYPES]
        if invalid:
            return _error(422, "invalid-types", f"unknown entity types: {invalid}")
        if not text and image is None:
            return _error(422, "empty-request", "need text or an image")

        request = AnalyzeRequest(
            text=text,
            image=image,
            image_name=image_name,
            types=tuple(sorted(types)),
            language=language,
            k=config.pipeline.k,
        )
        dedup_key = make_key("analyze", request.dedup_key())
        with submit_lock:
            cached_id = cache.get_json(dedup_key)
            if cached_id is not None and store.get(str(cached_id)) is not None:
                job_id = str(cached_id)
                reused = True
            else:
                job = store.create(request)
                cache.put_json(dedup_key, job.job_id, ttl=analyze_ttl)
                runner.submit(job.job_id)
                job_id = job.job_id
                reused = False
        return JSONResponse(
            status_code=202,
            content={
                "job_id": job_id,
                "status_url": f"{API_PREFIX}/jobs/{job_id}",
                "reused": reused,
            },
        )

    @app.post(API_PREFIX + "/analyze")
    async def analyze(request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload = form.get("image")
            image = None
            image_name = None
            if isinstance(upload, UploadFile):
                image = _decode_image(await upload.read(), upload.filename or "upload")
                if isinstance(image, Response):
                    return image
                image_name = None  # uploads key by content hash
            types = form.get("types")
            types = [t.strip() for t in str(types).split(",") if t.strip()] if types else None
            return _submit(
                str(form.get("text", "")), image, image_name, types, str(form.get("language", "en"))
            )

        try:
            body = AnalyzeBody.model_validate(await request.json())
        except Exception:
            return _error(422, "invalid-request", "body must be a JSON analyze request")
        image = None
        image_name = None
        if body.image_b64:
            try:
                raw = base64.b64decode(body.image_b64, validate=True)
            except Exception:
                return _error(422, "invalid-base64", "image_b64 is not valid base64")
            image = _decode_image(raw, "image_b64")
            if isinstance(image, Response):
                return image
        elif body.image_url:
            try:
                fetched = submit_fetcher.fetch(body.image_url)
            except TransportError as exc:
                return _error(502, "upstream-error", str(exc))
            except Exception as exc:
                return _error(422, "image-unusable", str(exc))
            image = _decode_image(fetched.content, body.image_url)
            if isinstance(image, Response):
                return image
            from ..features.types import name_for_url

            image_name = name_for_url(body.image_url)
        return _submit(body.text, image, image_name, body.types, body.language)

    @app.get(API_PREFIX + "/jobs/{job_id}")
    def get_job(job_id: str):
        job = store.get(job_id)
        if job is None:
            return _error(404, "job-not-found", job_id)
        return job.to_json()

    # -- entity cards and reference exploration

    @app.get(API_PREFIX + "/entities/{kb_id}/card")
    def get_card(kb_id: str):
        try:
            record = engine.linker.kb.get_record(kb_id)
        except ValueError as exc:
            return _error(400, "invalid-kb-id", str(exc))
        except NotFoundError as exc:
            return _error(404, "entity-not-found", str(exc))
        except (TransportError, ConfigurationError) as exc:
            return _error(502, "upstream-error", str(exc))
        return entity_card(record).to_json()

    def _cached_refset(kb_id: str) -> ReferenceImageSet | None:
        payload = cache.get_json(make_key("refset", kb_id, config.pipeline.k))
        if payload is None:
            return None
        return ReferenceImageSet.from_json(payload)

    @app.get(API_PREFIX + "/entities/{kb_id}/references")
    def get_references(kb_id: str):
        refset = _cached_refset(kb_id)
        if refset is None:
            return _error(
                409,
                "evidence-not-crawled",
                f"no cached crawl for {kb_id}; POST {API_PREFIX}/analyze first",
            )
        return {
            "kb_id": refset.kb_id,
            "query": refset.query,
            "k": refset.k,
            "images": [
                {
                    "index": index,
                    "source_url": image.source_url,
                    "content_type": image.content_type,
                    "fetched_at": image.fetched_at,
                    "thumbnail_url": f"{API_PREFIX}/entities/{kb_id}/references/{index}/thumbnail",
                }
                for index, image in enumerate(refset.images)
            ],
        }

    @app.get(API_PREFIX + "/entities/{kb_id}/references/{index}/thumbnail")
    def get_thumbnail(kb_id: str, index: int):
        refset = _cached_refset(kb_id)
        if refset is None:
            return _error(409, "evidence-not-crawled", kb_id)
        if not 0 <= index < len(refset.images):
            return _error(404, "reference-not-found", f"{kb_id}[{index}]")
        image = refset.images[index]
        try:
            with Image.open(io.BytesIO(image.content)) as img:
                img.thumbnail((THUMBNAIL_MAX_SIDE, THUMBNAIL_MAX_SIDE))
                buf = io.BytesIO()
                img.convert("RGB").save(buf, format="PNG")
        except (UnidentifiedImageError, OSError) as exc:
            return _error(500, "thumbnail-failed", str(exc))
        return Response(content=buf.getvalue(), media_type="image/png")

    if config.frontend_dir:
        # registered last so every /v1 and /healthz route wins first
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.frontend_dir, html=True), name="ui")

    return app
