"""HTTP service: asynchronous analysis jobs, article parsing, entity
cards, and reference-image exploration."""

from .articles import ArticleExtractor, FileTransport, ParsedArticle
from .config import ServiceConfig
from .jobs import AnalysisJob, AnalyzeRequest, JobRunner, JobStore, SimulatedCrash, build_stages
from .app import create_app

__all__ = [
    "ArticleExtractor",
    "FileTransport",
    "ParsedArticle",
    "ServiceConfig",
    "AnalysisJob",
    "AnalyzeRequest",
    "JobRunner",
    "JobStore",
    "SimulatedCrash",
    "build_stages",
    "create_app",
]
