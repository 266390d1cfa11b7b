"""Tag-expression mini-language over scenes.

Grammar: literal ``category.group.name``; operators NOT, AND, OR (in
precedence order); parentheses. Matching is exact on the tag triple,
independent of origin.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class TagExprError(ValueError):
    """Parse error carrying the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(r"\s*(\(|\)|AND\b|OR\b|NOT\b|[A-Za-z0-9_\-]+(?:\.[A-Za-z0-9_\-]+){2})")


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'AND' | 'OR' | 'NOT' | '(' | ')' | 'LIT'
    value: tuple[str, str, str] | None
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            bad = len(text) - len(text[pos:].lstrip())
            raise TagExprError(f"unexpected input {text[bad:bad + 10]!r}", bad)
        tok = m.group(1)
        tok_pos = m.start(1)
        if tok in ("(", ")", "AND", "OR", "NOT"):
            out.append(_Tok(tok, None, tok_pos))
        else:
            cat, group, name = tok.split(".")
            out.append(_Tok("LIT", (cat, group, name), tok_pos))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise TagExprError("unexpected end of expression", len(self.text))
        self.i += 1
        return tok

    def parse(self):
        node = self.or_expr()
        if self.peek() is not None:
            raise TagExprError(f"trailing input {self.peek().kind!r}", self.peek().pos)
        return node

    def or_expr(self):
        node = self.and_expr()
        while self.peek() is not None and self.peek().kind == "OR":
            self.take()
            node = ("or", node, self.and_expr())
        return node

    def and_expr(self):
        node = self.unary()
        while self.peek() is not None and self.peek().kind == "AND":
            self.take()
            node = ("and", node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok is not None and tok.kind == "NOT":
            self.take()
            return ("not", self.unary())
        return self.atom()

    def atom(self):
        tok = self.take()
        if tok.kind == "LIT":
            return ("lit", tok.value)
        if tok.kind == "(":
            node = self.or_expr()
            closing = self.take()
            if closing.kind != ")":
                raise TagExprError("expected ')'", closing.pos)
            return node
        raise TagExprError(f"expected literal or '(', got {tok.kind!r}", tok.pos)


def parse_tag_expr(text: str):
    """Parse an expression into a nested ('op', ...) tree."""
    return _Parser(text).parse()


def eval_tag_expr(node, tag_keys: set[tuple[str, str, str]]) -> bool:
    op = node[0]
    if op == "lit":
        return node[1] in tag_keys
    if op == "not":
        return not eval_tag_expr(node[1], tag_keys)
    if op == "and":
        return eval_tag_expr(node[1], tag_keys) and eval_tag_expr(node[2], tag_keys)
    return eval_tag_expr(node[1], tag_keys) or eval_tag_expr(node[2], tag_keys)
