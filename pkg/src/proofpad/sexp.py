"""Group a token stream into top-level forms.

Parsing is total: unbalanced input never raises, it just yields a trailing
form with ``complete == False`` (or a one-token stub for a dangling close
paren, which lint picks up).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .lex import BuiltinTable, Token, TokenClass, TRIVIA, default_table

QUOTE_PUNCT = {"'", "`", ",", ",@"}


@dataclass(frozen=True)
class SexpAtom:
    token: Token

    @property
    def start(self) -> int:
        return self.token.start

    @property
    def end(self) -> int:
        return self.token.end

    @property
    def text(self) -> str:
        return self.token.lexeme


@dataclass
class SexpList:
    start: int
    end: int
    items: list["Sexp"] = field(default_factory=list)
    closed: bool = True


Sexp = Union[SexpAtom, SexpList]


@dataclass
class TopLevelForm:
    start: int
    end: int
    head: str  # first-element symbol text, "" for atoms
    kind: str  # "event" | "expression"
    complete: bool
    tree: Sexp

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


def _is_event_head(head: str, table: BuiltinTable) -> bool:
    entry = table.lookup(head)
    if entry is not None:
        return entry.kind == "event"
    # Unknown heads: assume user macros named def* introduce events.
    return head.lower().startswith("def")


class _Parser:
    def __init__(self, tokens: list[Token], table: BuiltinTable):
        self.tokens = [t for t in tokens if t.cls not in TRIVIA]
        self.pos = 0

    def peek(self) -> Optional[Token]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse_one(self) -> Sexp:
        """Parse one datum; caller guarantees a token is available."""
        tok = self.next()
        if tok.cls is TokenClass.LPAREN:
            node = SexpList(tok.start, tok.end, [], closed=False)
            while True:
                nxt = self.peek()
                if nxt is None:
                    node.end = self.tokens[self.pos - 1].end
                    return node
                if nxt.cls is TokenClass.RPAREN:
                    self.next()
                    node.end = nxt.end
                    node.closed = True
                    return node
                node.items.append(self.parse_one())
        if tok.cls is TokenClass.SYMBOL and tok.lexeme in QUOTE_PUNCT:
            # Quote sugar binds to the following datum.
            if self.peek() is None or self.peek().cls is TokenClass.RPAREN:
                return SexpAtom(tok)
            inner = self.parse_one()
            wrapper = SexpList(tok.start, inner.end, [SexpAtom(tok), inner])
            wrapper.closed = _is_complete(inner)
            return wrapper
        return SexpAtom(tok)


def _is_complete(node: Sexp) -> bool:
    if isinstance(node, SexpAtom):
        return True
    return node.closed and all(_is_complete(i) for i in node.items)


def parse_top_level(tokens: list[Token],
                    table: BuiltinTable | None = None) -> list[TopLevelForm]:
    """Split a lossless token stream into ordered top-level forms."""
    if table is None:
        table = default_table()
    parser = _Parser(tokens, table)
    forms: list[TopLevelForm] = []
    while True:
        tok = parser.peek()
        if tok is None:
            return forms
        if tok.cls is TokenClass.RPAREN:
            # Dangling close paren: keep it visible as an incomplete stub.
            parser.next()
            forms.append(TopLevelForm(tok.start, tok.end, "", "expression",
                                      False, SexpAtom(tok)))
            continue
        node = parser.parse_one()
        head = ""
        if isinstance(node, SexpList) and node.items:
            first = node.items[0]
            if isinstance(first, SexpAtom) and first.token.cls in (
                    TokenClass.EVENT, TokenClass.BUILTIN_FUNCTION,
                    TokenClass.BUILTIN_MACRO, TokenClass.SYMBOL):
                if first.token.lexeme not in QUOTE_PUNCT:
                    head = first.token.lexeme
        kind = "event" if head and _is_event_head(head, table) else "expression"
        forms.append(TopLevelForm(node.start, node.end, head, kind,
                                  _is_complete(node), node))


def form_at(forms: list[TopLevelForm], offset: int) -> Optional[int]:
    """Index of the form whose span contains offset, if any."""
    for idx, form in enumerate(forms):
        if form.start <= offset < form.end:
            return idx
    return None


def parse_source(source: str,
                 table: BuiltinTable | None = None) -> list[TopLevelForm]:
    """Convenience: tokenize then group."""
    from .lex import tokenize
    return parse_top_level(tokenize(source, table), table)
