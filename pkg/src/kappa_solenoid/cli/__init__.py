from .app import RunConfig, build_parser, document, emit_plotdata, main, render, run
from .polyparse import PolyParseError, parse_poly

__all__ = [
    "PolyParseError",
    "RunConfig",
    "build_parser",
    "document",
    "emit_plotdata",
    "main",
    "parse_poly",
    "render",
    "run",
]
