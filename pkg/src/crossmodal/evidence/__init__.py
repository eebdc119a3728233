"""Reference image acquisition: Web image search, fetching, and caching."""

from .types import ReferenceImage, ReferenceImageSet
from .search import DirectoryImageSearch, HttpImageSearch, ImageSearchEngine
from .fetch import FetchPolicy, ImageFetcher
from .refset import ReferenceImageCollector

__all__ = [
    "ReferenceImage",
    "ReferenceImageSet",
    "ImageSearchEngine",
    "DirectoryImageSearch",
    "HttpImageSearch",
    "ImageFetcher",
    "FetchPolicy",
    "ReferenceImageCollector",
]
