"""Readability-style article extraction.

A deliberately small extractor: title from ``og:title`` or ``<title>``,
main image from ``og:image`` (falling back to the first ``<img>``), body
text from ``<p>`` blocks. The HTML may come from the live Web or, for
tests, from a transport that maps URLs to recorded files; the third
party full-article parsers stay behind this same interface.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from html import unescape
from html.parser import HTMLParser
from pathlib import Path
from urllib.parse import urljoin, urlparse

import httpx

from ..errors import ExtractionEmptyError, TransportError

_GERMAN_STOPWORDS = {"der", "die", "das", "und", "nicht", "ein", "eine", "mit", "für", "ist"}
_ENGLISH_STOPWORDS = {"the", "and", "not", "with", "for", "that", "this", "from", "have", "is"}


@dataclass(frozen=True)
class ParsedArticle:
    url: str
    title: str
    text: str
    main_image_url: str | None
    language: str

    def __post_init__(self):
        if not self.text and not self.main_image_url:
            raise ExtractionEmptyError(f"nothing extractable at {self.url}")

    def to_json(self) -> dict:
        return {
            "url": self.url,
            "title": self.title,
            "text": self.text,
            "main_image_url": self.main_image_url,
            "language": self.language,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ParsedArticle":
        return cls(
            url=data["url"],
            title=data.get("title", ""),
            text=data.get("text", ""),
            main_image_url=data.get("main_image_url"),
            language=data.get("language", "en"),
        )


class _ArticleParser(HTMLParser):
    _SKIP = {"script", "style", "nav", "footer", "header", "aside", "noscript"}

    def __init__(self):
        super().__init__()
        self.title_parts: list[str] = []
        self.meta: dict[str, str] = {}
        self.paragraphs: list[str] = []
        self.first_img: str | None = None
        self.html_lang: str | None = None
        self._in_title = False
        self._p_depth = 0
        self._skip_depth = 0
        self._current: list[str] = []

    def handle_starttag(self, tag, attrs):
        attrs = dict(attrs)
        if tag == "html" and attrs.get("lang"):
            self.html_lang = attrs["lang"]
        if tag in self._SKIP:
            self._skip_depth += 1
        if self._skip_depth:
            return
        if tag == "meta":
            prop = attrs.get("property") or attrs.get("name")
            if prop and attrs.get("content"):
                self.meta[prop.lower()] = attrs["content"]
        elif tag == "img" and self.first_img is None and attrs.get("src"):
            self.first_img = attrs["src"]
        elif tag == "title":
            self._in_title = True
        elif tag == "p":
            self._p_depth += 1

    def handle_endtag(self, tag):
        if tag in self._SKIP and self._skip_depth:
            self._skip_depth -= 1
            return
        if tag == "title":
            self._in_title = False
        elif tag == "p" and self._p_depth:
            self._p_depth -= 1
            if not self._p_depth:
                paragraph = re.sub(r"\s+", " ", "".join(self._current)).strip()
                if paragraph:
                    self.paragraphs.append(paragraph)
                self._current = []

    def handle_data(self, data):
        if self._skip_depth:
            return
        if self._in_title:
            self.title_parts.append(data)
        if self._p_depth:
            self._current.append(data)


def guess_language(text: str, html_lang: str | None) -> str:
    if html_lang:
        tag = html_lang.split("-")[0].lower()
        if tag in ("en", "de"):
            return tag
    words = set(re.findall(r"[a-zäöüß]+", text.lower()))
    german = len(words & _GERMAN_STOPWORDS)
    english = len(words & _ENGLISH_STOPWORDS)
    return "de" if german > english else "en"


def parse_article_html(url: str, html: str) -> ParsedArticle:
    parser = _ArticleParser()
    parser.feed(html)
    title = parser.meta.get("og:title") or unescape("".join(parser.title_parts)).strip()
    text = "\n\n".join(unescape(p) for p in parser.paragraphs)
    image = parser.meta.get("og:image") or parser.first_img
    if image:
        image = urljoin(url, image)
    if not text and not image:
        raise ExtractionEmptyError(f"no article content found at {url}")
    return ParsedArticle(
        url=url,
        title=title,
        text=text,
        main_image_url=image,
        language=guess_language(text, parser.html_lang),
    )


class FileTransport:
    """Maps URLs to recorded HTML files for hermetic extraction tests."""

    def __init__(self, mapping: dict[str, str | Path]):
        self.mapping = {url: Path(path) for url, path in mapping.items()}

    def get(self, url: str) -> str:
        if url not in self.mapping:
            raise TransportError(f"no recorded page for {url}", retryable=False)
        return self.mapping[url].read_text(encoding="utf-8")


class HttpTransport:
    def __init__(self, *, client: httpx.Client | None = None, timeout: float = 15.0):
        self._client = client if client is not None else httpx.Client(
            timeout=timeout, follow_redirects=True
        )

    def get(self, url: str) -> str:
        try:
            response = self._client.get(url)
        except httpx.HTTPError as exc:
            raise TransportError(f"cannot fetch {url}: {exc}") from exc
        if response.status_code >= 400:
            raise TransportError(
                f"{url} returned {response.status_code}",
                retryable=response.status_code >= 500,
            )
        return response.text


class ArticleExtractor:
    def __init__(self, transport=None):
        self.transport = transport if transport is not None else HttpTransport()

    def extract(self, url: str) -> ParsedArticle:
        parsed = urlparse(url)
        if parsed.scheme not in ("http", "https"):
            raise ValueError(f"expected an http(s) URL, got {url!r}")
        html = self.transport.get(url)
        return parse_article_html(url, html)
