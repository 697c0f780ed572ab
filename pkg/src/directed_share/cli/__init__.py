"""Command-line interface (``directed-share`` / ``python -m directed_share``)."""

from .app import build_parser, main, run
from .params import PipelineParams, RunConfig

__all__ = ["main", "run", "build_parser", "RunConfig", "PipelineParams"]
