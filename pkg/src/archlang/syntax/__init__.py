from archlang.syntax import ast
from archlang.syntax.lexer import Kind, Token, tokenize
from archlang.syntax.parser import parse_model
from archlang.syntax.printer import format_model
from archlang.syntax.stimulus import Stimulus, parse_stimulus

__all__ = [
    "Kind", "Stimulus", "Token", "ast", "format_model", "parse_model",
    "parse_stimulus", "tokenize",
]
