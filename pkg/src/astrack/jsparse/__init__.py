"""Self-contained ECMAScript parsing: source text in, ESTree-shaped dicts out."""

from .lexer import ParseError, Token, tokenize
from .parser import parse

__all__ = ["parse", "tokenize", "ParseError", "Token"]
