"""Command-line front end."""
from .main import Config, main, run
from .parser import ParseError, parse, to_text

__all__ = ["Config", "ParseError", "main", "parse", "run", "to_text"]
