"""Asynchronous analysis jobs.

A job advances through ``queued -> linking -> crawling -> scoring ->
done`` (``failed`` is reachable from any non-done state) and never moves
backwards. Every transition and every completed stage is appended to a
journal file, so a restarted service replays the journal and resumes
each interrupted job at its last completed stage; stages are idempotent
(the crawl stage only warms the evidence cache).

Heavy work happens exclusively on the worker pool; request handlers
only enqueue and snapshot.
"""

from __future__ import annotations

import base64
import hashlib
import json
import logging
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from queue import Empty, Queue

from ..clock import Clock, SystemClock
from ..features.types import ImagePayload
from ..linking.types import EntityType, LinkedEntity
from ..scoring.engine import ConsistencyEngine, ScoreOptions
from ..scoring.report import report_to_json

logger = logging.getLogger(__name__)

STAGES = ("linking", "crawling", "scoring")
STATE_ORDER = {"queued": 0, "linking": 1, "crawling": 2, "scoring": 3, "done": 4}
TERMINAL_STATES = ("done", "failed")


class SimulatedCrash(BaseException):
    """Raised by test hooks to emulate a worker dying mid-job; escapes
    normal failure handling so nothing gets journaled."""


@dataclass(frozen=True)
class AnalyzeRequest:
    text: str
    image: bytes | None
    image_name: str | None
    types: tuple[str, ...]
    language: str
    k: int = 5

    def dedup_key(self) -> str:
        digest = hashlib.sha256()
        digest.update(self.language.encode("utf-8"))
        digest.update(b"|")
        digest.update(",".join(sorted(self.types)).encode("utf-8"))
        digest.update(b"|")
        digest.update(self.text.encode("utf-8"))
        digest.update(b"|")
        if self.image is not None:
            digest.update(hashlib.sha256(self.image).digest())
        return digest.hexdigest()

    def image_payload(self) -> ImagePayload | None:
        if self.image is None:
            return None
        return ImagePayload(content=self.image, name=self.image_name)

    def to_json(self) -> dict:
        return {
            "text": self.text,
            "image_b64": base64.b64encode(self.image).decode("ascii") if self.image else None,
            "image_name": self.image_name,
            "types": list(self.types),
            "language": self.language,
            "k": self.k,
        }

    @classmethod
    def from_json(cls, data: dict) -> "AnalyzeRequest":
        image_b64 = data.get("image_b64")
        return cls(
            text=data.get("text", ""),
            image=base64.b64decode(image_b64) if image_b64 else None,
            image_name=data.get("image_name"),
            types=tuple(data.get("types", [t.value for t in EntityType])),
            language=data.get("language", "en"),
            k=data.get("k", 5),
        )


@dataclass
class AnalysisJob:
    job_id: str
    state: str
    submitted_at: float
    progress: dict[str, float] = field(default_factory=lambda: {s: 0.0 for s in STAGES})
    result: dict | None = None
    error: str | None = None
    failed_stage: str | None = None

    def to_json(self) -> dict:
        return {
            "job_id": self.job_id,
            "state": self.state,
            "submitted_at": self.submitted_at,
            "progress": dict(self.progress),
            "result": self.result,
            "error": self.error,
            "failed_stage": self.failed_stage,
        }


class JobJournal:
    """Append-only JSONL record of job transitions."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def append(self, record: dict) -> None:
        line = json.dumps(record)
        with self._lock:
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(line + "\n")
                handle.flush()

    def replay(self) -> list[dict]:
        if not self.path.exists():
            return []
        records = []
        for line in self.path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except ValueError:
                logger.warning("skipping corrupt journal line")
        return records


class JobStore:
    """Thread-safe job state with journal-backed persistence."""

    def __init__(self, journal: JobJournal | None = None, *, clock: Clock | None = None):
        self.journal = journal
        self.clock = clock if clock is not None else SystemClock()
        self._lock = threading.RLock()
        self._jobs: dict[str, AnalysisJob] = {}
        self._requests: dict[str, AnalyzeRequest] = {}
        self._stage_payloads: dict[tuple[str, str], dict] = {}

    # -- construction / recovery

    @classmethod
    def load(cls, journal: JobJournal, *, clock: Clock | None = None) -> "JobStore":
        store = cls(journal=None, clock=clock)
        for record in journal.replay():
            store._apply(record)
        store.journal = journal
        return store

    def _apply(self, record: dict) -> None:
        event = record.get("event")
        job_id = record.get("job_id")
        if event == "created":
            job = AnalysisJob(
                job_id=job_id, state="queued", submitted_at=record.get("ts", 0.0)
            )
            self._jobs[job_id] = job
            self._requests[job_id] = AnalyzeRequest.from_json(record["request"])
        elif job_id not in self._jobs:
            logger.warning("journal references unknown job %s", job_id)
        elif event == "state":
            self._jobs[job_id].state = record["state"]
        elif event == "stage_done":
            self._stage_payloads[(job_id, record["stage"])] = record["payload"]
            self._jobs[job_id].progress[record["stage"]] = 1.0
        elif event == "done":
            job = self._jobs[job_id]
            job.state = "done"
            job.result = record["report"]
            job.progress = {s: 1.0 for s in STAGES}
        elif event == "failed":
            job = self._jobs[job_id]
            job.state = "failed"
            job.error = record["error"]
            job.failed_stage = record.get("stage")

    def _journal(self, record: dict) -> None:
        if self.journal is not None:
            self.journal.append(record)

    # -- lifecycle

    def create(self, request: AnalyzeRequest) -> AnalysisJob:
        job_id = uuid.uuid4().hex
        now = self.clock.now()
        job = AnalysisJob(job_id=job_id, state="queued", submitted_at=now)
        with self._lock:
            self._jobs[job_id] = job
            self._requests[job_id] = request
        self._journal(
            {"event": "created", "job_id": job_id, "ts": now, "request": request.to_json()}
        )
        return self.get(job_id)

    def get(self, job_id: str) -> AnalysisJob | None:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                return None
            return AnalysisJob(
                job_id=job.job_id,
                state=job.state,
                submitted_at=job.submitted_at,
                progress=dict(job.progress),
                result=job.result,
                error=job.error,
                failed_stage=job.failed_stage,
            )

    def request(self, job_id: str) -> AnalyzeRequest | None:
        with self._lock:
            return self._requests.get(job_id)

    def pending_ids(self) -> list[str]:
        with self._lock:
            return [
                job_id
                for job_id, job in self._jobs.items()
                if job.state not in TERMINAL_STATES
            ]

    # -- transitions (monotone)

    def set_state(self, job_id: str, state: str) -> None:
        with self._lock:
            job = self._jobs[job_id]
            if job.state == state:
                return
            if job.state in TERMINAL_STATES:
                raise ValueError(f"job {job_id} already {job.state}")
            if STATE_ORDER[state] < STATE_ORDER[job.state]:
                raise ValueError(
                    f"job {job_id} cannot move backwards {job.state} -> {state}"
                )
            job.state = state
        self._journal({"event": "state", "job_id": job_id, "state": state, "ts": self.clock.now()})

    def set_progress(self, job_id: str, stage: str, fraction: float) -> None:
        with self._lock:
            job = self._jobs[job_id]
            job.progress[stage] = max(job.progress.get(stage, 0.0), min(1.0, fraction))

    def stage_done(self, job_id: str, stage: str, payload: dict) -> None:
        with self._lock:
            self._stage_payloads[(job_id, stage)] = payload
            self._jobs[job_id].progress[stage] = 1.0
        self._journal(
            {
                "event": "stage_done",
                "job_id": job_id,
                "stage": stage,
                "payload": payload,
                "ts": self.clock.now(),
            }
        )

    def stage_payload(self, job_id: str, stage: str) -> dict | None:
        with self._lock:
            return self._stage_payloads.get((job_id, stage))

    def finish(self, job_id: str, report: dict) -> None:
        with self._lock:
            job = self._jobs[job_id]
            job.state = "done"
            job.result = report
            job.progress = {s: 1.0 for s in STAGES}
        self._journal(
            {"event": "done", "job_id": job_id, "report": report, "ts": self.clock.now()}
        )

    def fail(self, job_id: str, stage: str | None, error: str) -> None:
        with self._lock:
            job = self._jobs[job_id]
            if job.state == "done":
                raise ValueError(f"job {job_id} already done")
            job.state = "failed"
            job.error = error
            job.failed_stage = stage
        self._journal(
            {
                "event": "failed",
                "job_id": job_id,
                "stage": stage,
                "error": error,
                "ts": self.clock.now(),
            }
        )


def build_stages(engine: ConsistencyEngine):
    """Stage functions for the worker: each takes (request, context,
    progress callback) and returns a JSON-serializable payload."""

    def linking(request: AnalyzeRequest, ctx: dict, progress) -> dict:
        if request.text:
            result = engine.linker.link_document(request.text, request.language)
            entities = [e.to_json() for e in result.entities]
            warnings = list(result.warnings)
        else:
            entities, warnings = [], []
        progress(1.0)
        return {"entities": entities, "warnings": warnings}

    def _wanted(request: AnalyzeRequest, ctx: dict) -> list[LinkedEntity]:
        types = {EntityType(t) for t in request.types}
        entities = [LinkedEntity.from_json(e) for e in ctx["linking"]["entities"]]
        return [e for e in entities if e.entity_type in types]

    def crawling(request: AnalyzeRequest, ctx: dict, progress) -> dict:
        entities = _wanted(request, ctx)
        warnings = []
        crawled = []
        for index, entity in enumerate(entities):
            try:
                refset = engine.collector.get_reference_set(
                    entity.kb_id, entity.label, request.k
                )
                crawled.append({"kb_id": entity.kb_id, "images": len(refset.images)})
            except Exception as exc:  # crawl failures degrade to warnings
                warnings.append(f"{entity.kb_id}: crawl failed: {exc}")
            progress((index + 1) / max(1, len(entities)))
        progress(1.0)
        return {"crawled": crawled, "warnings": warnings}

    def scoring(request: AnalyzeRequest, ctx: dict, progress) -> dict:
        entities = [LinkedEntity.from_json(e) for e in ctx["linking"]["entities"]]
        options = ScoreOptions(
            types=frozenset(EntityType(t) for t in request.types),
            language=request.language,
            k=request.k,
        )
        report = engine.score_document(
            request.text,
            request.image_payload(),
            options,
            entities=entities,
        )
        report.warnings = (
            ctx["linking"]["warnings"] + ctx["crawling"]["warnings"] + report.warnings
        )
        progress(1.0)
        return {"report": report_to_json(report)}

    return {"linking": linking, "crawling": crawling, "scoring": scoring}


class JobRunner:
    """Worker pool consuming the job queue; at most one worker executes
    a given job at a time (jobs enter the queue exactly once)."""

    def __init__(
        self,
        store: JobStore,
        stages: dict,
        *,
        workers: int = 2,
        crash_hook=None,
    ):
        self.store = store
        self.stages = stages
        self.workers = max(1, workers)
        self.crash_hook = crash_hook
        self._queue: Queue = Queue()
        self._threads: list[threading.Thread] = []
        self._stop = threading.Event()

    def start(self) -> None:
        for n in range(self.workers):
            thread = threading.Thread(target=self._worker, name=f"job-worker-{n}", daemon=True)
            thread.start()
            self._threads.append(thread)

    def stop(self, *, graceful: bool = True) -> None:
        """Drain: running jobs finish, queued jobs stay journaled for the
        next boot."""
        self._stop.set()
        if graceful:
            for thread in self._threads:
                thread.join(timeout=30.0)
        self._threads.clear()

    def submit(self, job_id: str) -> None:
        self._queue.put(job_id)

    def resume(self) -> int:
        """Re-enqueue every non-terminal job from the journal."""
        pending = self.store.pending_ids()
        for job_id in pending:
            self._queue.put(job_id)
        return len(pending)

    def _worker(self) -> None:
        while not self._stop.is_set():
            try:
                job_id = self._queue.get(timeout=0.1)
            except Empty:
                continue
            try:
                self._execute(job_id)
            except SimulatedCrash:
                return  # worker "dies"; journal keeps whatever completed
            except Exception:  # pragma: no cover - defensive
                logger.exception("worker crashed on job %s", job_id)
            finally:
                self._queue.task_done()

    def run_pending_inline(self) -> None:
        """Synchronous drain used by tests and the CLI."""
        while True:
            try:
                job_id = self._queue.get_nowait()
            except Empty:
                return
            try:
                self._execute(job_id)
            finally:
                self._queue.task_done()

    def _execute(self, job_id: str) -> None:
        request = self.store.request(job_id)
        if request is None:
            logger.warning("no request recorded for job %s", job_id)
            return
        job = self.store.get(job_id)
        if job is None or job.state in TERMINAL_STATES:
            return
        context: dict = {}
        stage = None
        try:
            for stage in STAGES:
                payload = self.store.stage_payload(job_id, stage)
                if payload is None:
                    self.store.set_state(job_id, stage)
                    if self.crash_hook is not None:
                        self.crash_hook(job_id, stage)
                    fn = self.stages[stage]
                    payload = fn(
                        request,
                        context,
                        lambda fraction, s=stage: self.store.set_progress(job_id, s, fraction),
                    )
                    self.store.stage_done(job_id, stage, payload)
                context[stage] = payload
            self.store.finish(job_id, context["scoring"]["report"])
        except SimulatedCrash:
            raise
        except Exception as exc:
            logger.warning("job %s failed at %s: %s", job_id, stage, exc)
            self.store.fail(job_id, stage, str(exc))
