"""Indentation: next-line indent from a source prefix, and region reindent.

Two rules, driven by the builtin table's indent-style field:

  body style  continuation lines sit at the head's open-paren column + 2
              (defun, defthm, let, ...)
  call style  continuation lines align with the first argument written on
              the head's line; with nothing after the head, open column + 1

Tabs are expanded at width 8 for column math; emitted indentation is spaces.
"""
from __future__ import annotations

from dataclasses import dataclass

from .lex import BuiltinTable, TokenClass, TRIVIA, default_table, tokenize

TAB_WIDTH = 8


@dataclass
class _OpenParen:
    open_col: int
    head: str | None = None
    head_line: int = -1
    first_arg_col: int | None = None


def _advance(line: int, col: int, text: str) -> tuple[int, int]:
    for ch in text:
        if ch == "\n":
            line += 1
            col = 0
        elif ch == "\t":
            col = (col // TAB_WIDTH + 1) * TAB_WIDTH
        else:
            col += 1
    return line, col


def indent_for_newline(prefix: str,
                       table: BuiltinTable | None = None) -> int:
    """Column for the line that would follow the given source prefix."""
    if table is None:
        table = default_table()
    stack: list[_OpenParen] = []
    line, col = 0, 0
    for tok in tokenize(prefix, table):
        if tok.cls not in TRIVIA:
            if tok.cls is TokenClass.LPAREN:
                _note_element(stack, line, col)
                stack.append(_OpenParen(open_col=col))
            elif tok.cls is TokenClass.RPAREN:
                if stack:
                    stack.pop()
            else:
                _note_element(stack, line, col, tok.lexeme)
        line, col = _advance(line, col, tok.lexeme)
    if not stack:
        return 0
    top = stack[-1]
    if top.head is None:
        return top.open_col + 1
    entry = table.lookup(top.head)
    body_style = (entry.indent_style == "body" if entry is not None
                  else top.head.lower().startswith("def"))
    if body_style:
        return top.open_col + 2
    if top.first_arg_col is not None:
        return top.first_arg_col
    return top.open_col + 1


def _note_element(stack: list[_OpenParen], line: int, col: int,
                  lexeme: str | None = None):
    """Record the head or first-argument position of the enclosing form."""
    if not stack:
        return
    top = stack[-1]
    if top.head is None and lexeme is not None:
        top.head = lexeme
        top.head_line = line
    elif top.first_arg_col is None and line == top.head_line:
        top.first_arg_col = col


def _protected_lines(source: str) -> set[int]:
    """Line indices whose start falls inside a multi-line token."""
    protected: set[int] = set()
    line_starts = [0]
    for i, ch in enumerate(source):
        if ch == "\n":
            line_starts.append(i + 1)
    for tok in tokenize(source):
        if tok.cls in (TokenClass.STRING, TokenClass.COMMENT,
                       TokenClass.ERROR) and "\n" in tok.lexeme:
            for idx, start in enumerate(line_starts):
                if tok.start < start <= tok.end - 1:
                    protected.add(idx)
    return protected


def reindent(source: str, region: tuple[int, int] | None = None,
             table: BuiltinTable | None = None) -> str:
    """Recompute leading whitespace for every line in region.

    Region boundaries must lie on line boundaries; None means the whole
    source.  Only leading whitespace changes, so the non-whitespace token
    stream is preserved.
    """
    if table is None:
        table = default_table()
    if region is None:
        region = (0, len(source))
    start, end = region
    lines = source.split("\n")
    protected = _protected_lines(source)

    offset = 0
    out: list[str] = []
    prefix_parts: list[str] = []
    for idx, text in enumerate(lines):
        line_start = offset
        offset += len(text) + 1
        # A line is reindented only if it starts inside the region.
        if not (start <= line_start < end):
            new = text
        elif idx in protected:
            new = text
        else:
            stripped = text.lstrip(" \t")
            if not stripped:
                new = ""
            else:
                col = indent_for_newline("".join(prefix_parts), table)
                new = " " * col + stripped
        out.append(new)
        prefix_parts.append(new)
        prefix_parts.append("\n")
    return "\n".join(out)
