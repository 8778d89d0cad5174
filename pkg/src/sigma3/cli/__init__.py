"""Command-line interface, expression grammar and file formats."""
from .config import RunConfig
from .expr import ParseError, parse_poly
from .main import main

__all__ = ["ParseError", "RunConfig", "main", "parse_poly"]
