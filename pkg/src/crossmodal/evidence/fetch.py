"""Image fetching with retry, size, and quality constraints.

Oversized or tiny images are skipped before they ever reach a feature
provider: embeddings of sub-64px thumbnails are unreliable, and a 10 MiB
cap bounds memory per request. Failed fetches get one retry round with
exponential backoff, then the image is skipped.
"""

from __future__ import annotations

import io
import logging
import mimetypes
import time
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urlparse, unquote

import httpx
from PIL import Image, UnidentifiedImageError

from ..clock import Clock, SystemClock
from ..errors import FormatError, TransportError
from .types import ReferenceImage

logger = logging.getLogger(__name__)

MAX_IMAGE_BYTES = 10 * 1024 * 1024
MIN_DECODED_DIMENSION = 64


@dataclass(frozen=True)
class FetchPolicy:
    max_bytes: int = MAX_IMAGE_BYTES
    min_dimension: int = MIN_DECODED_DIMENSION
    timeout: float = 10.0
    retries: int = 1
    backoff_base: float = 0.25
    enforce_dimensions: bool = True


class ImageFetcher:
    """Fetches a URL into a :class:`ReferenceImage`.

    Supports ``http(s)`` URLs through an injected httpx client and
    ``file`` URLs / bare paths for fixture trees.
    """

    def __init__(
        self,
        *,
        client: httpx.Client | None = None,
        clock: Clock | None = None,
        policy: FetchPolicy | None = None,
        sleep=time.sleep,
    ):
        self._client = client
        self.clock = clock if clock is not None else SystemClock()
        self.policy = policy if policy is not None else FetchPolicy()
        self._sleep = sleep

    def fetch(self, url: str) -> ReferenceImage:
        """Fetch with one retry round; raises FormatError for non-image or
        below-floor content and TransportError for network failures."""
        attempts = self.policy.retries + 1
        last_error: Exception | None = None
        for attempt in range(attempts):
            try:
                return self._fetch_once(url)
            except TransportError as exc:
                last_error = exc
                if not exc.retryable or attempt == attempts - 1:
                    raise
                self._sleep(self.policy.backoff_base * (2**attempt))
        raise TransportError(f"fetch failed for {url}: {last_error}")

    def _fetch_once(self, url: str) -> ReferenceImage:
        parsed = urlparse(url)
        if parsed.scheme in ("", "file"):
            content, content_type = self._read_local(unquote(parsed.path) or url)
        else:
            content, content_type = self._read_remote(url)

        if not content:
            raise FormatError(f"empty payload from {url}")
        if len(content) > self.policy.max_bytes:
            raise FormatError(
                f"image exceeds {self.policy.max_bytes} bytes cap: {url}"
            )
        if not content_type.startswith("image/"):
            raise FormatError(f"non-image content type {content_type!r} from {url}")
        if self.policy.enforce_dimensions:
            self._check_dimensions(content, url)
        return ReferenceImage(
            source_url=url,
            content=content,
            content_type=content_type,
            fetched_at=self.clock.now(),
        )

    def _read_local(self, path: str) -> tuple[bytes, str]:
        p = Path(path)
        try:
            content = p.read_bytes()
        except OSError as exc:
            raise TransportError(f"cannot read {path}: {exc}", retryable=False) from exc
        content_type = mimetypes.guess_type(p.name)[0] or "application/octet-stream"
        return content, content_type

    def _read_remote(self, url: str) -> tuple[bytes, str]:
        client = self._client
        if client is None:
            client = self._client = httpx.Client(timeout=self.policy.timeout, follow_redirects=True)
        try:
            response = client.get(url)
        except httpx.TimeoutException as exc:
            raise TransportError(f"timeout fetching {url}") from exc
        except httpx.HTTPError as exc:
            raise TransportError(f"fetch failed for {url}: {exc}") from exc
        if response.status_code >= 500:
            raise TransportError(f"{url} returned {response.status_code}")
        if response.status_code >= 400:
            raise TransportError(
                f"{url} returned {response.status_code}", retryable=False
            )
        content_type = response.headers.get("content-type", "").split(";")[0].strip()
        if not content_type:
            content_type = mimetypes.guess_type(url)[0] or "application/octet-stream"
        return response.content, content_type

    def _check_dimensions(self, content: bytes, url: str) -> None:
        try:
            with Image.open(io.BytesIO(content)) as img:
                width, height = img.size
        except (UnidentifiedImageError, OSError) as exc:
            raise FormatError(f"undecodable image from {url}: {exc}") from exc
        if min(width, height) < self.policy.min_dimension:
            raise FormatError(
                f"image {width}x{height} below {self.policy.min_dimension}px floor: {url}"
            )
