"""Single-pass lexer for ACL2 source.

Tokenizing is lossless: concatenating the lexemes of the returned tokens
reproduces the input exactly, and unrecognized byte runs come back as
``ERROR`` tokens instead of raising.  Spans are half-open offsets into the
source string.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from importlib import resources


class TokenClass(enum.Enum):
    LPAREN = "lparen"
    RPAREN = "rparen"
    EVENT = "event"
    BUILTIN_FUNCTION = "builtin-function"
    BUILTIN_MACRO = "builtin-macro"
    KEYWORD = "keyword"
    SYMBOL = "symbol"
    NUMBER = "number"
    RATIONAL = "rational"
    CHARACTER = "character"
    STRING = "string"
    COMMENT = "comment"
    WHITESPACE = "whitespace"
    ERROR = "error"


#: Token classes that never affect s-expression structure.
TRIVIA = frozenset({TokenClass.WHITESPACE, TokenClass.COMMENT})

#: Token classes that can head or fill a form.
ATOM_CLASSES = frozenset({
    TokenClass.EVENT, TokenClass.BUILTIN_FUNCTION, TokenClass.BUILTIN_MACRO,
    TokenClass.KEYWORD, TokenClass.SYMBOL, TokenClass.NUMBER,
    TokenClass.RATIONAL, TokenClass.CHARACTER, TokenClass.STRING,
})


@dataclass(frozen=True)
class Token:
    lexeme: str
    start: int
    end: int
    cls: TokenClass

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class BuiltinEntry:
    name: str
    kind: str  # "event" | "function" | "macro"
    min_arity: int
    max_arity: int | None  # None = unbounded
    indent_style: str  # "body" | "call"


class BuiltinTable:
    """Known ACL2 names with kind, arity bounds, and indent style.

    Lookup is case-insensitive, matching the ACL2 reader's upcasing.
    """

    def __init__(self, entries: dict[str, BuiltinEntry]):
        self.entries = entries

    def lookup(self, name: str) -> BuiltinEntry | None:
        return self.entries.get(name.lower())

    def __contains__(self, name: str) -> bool:
        return name.lower() in self.entries

    @classmethod
    def from_lines(cls, lines) -> "BuiltinTable":
        entries: dict[str, BuiltinEntry] = {}
        for raw in lines:
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            name, kind, lo, hi, style = line.split("\t")
            key = name.lower()
            if key in entries:
                raise ValueError(f"duplicate builtin entry: {name}")
            max_arity = None if hi == "*" else int(hi)
            if max_arity is not None and int(lo) > max_arity:
                raise ValueError(f"bad arity bounds for {name}")
            entries[key] = BuiltinEntry(key, kind, int(lo), max_arity, style)
        return cls(entries)

    @classmethod
    def from_file(cls, path) -> "BuiltinTable":
        with open(path, encoding="utf-8") as f:
            return cls.from_lines(f)


_DEFAULT_TABLE: BuiltinTable | None = None


def default_table() -> BuiltinTable:
    """The table shipped with the package, loaded once."""
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        data = resources.files("proofpad").joinpath("data/builtins.tsv")
        _DEFAULT_TABLE = BuiltinTable.from_lines(
            data.read_text(encoding="utf-8").splitlines())
    return _DEFAULT_TABLE


def classify(name: str, table: BuiltinTable) -> TokenClass:
    """Token class for a bare symbol: builtin kind if known, else SYMBOL."""
    entry = table.lookup(name)
    if entry is None:
        return TokenClass.SYMBOL
    return {
        "event": TokenClass.EVENT,
        "function": TokenClass.BUILTIN_FUNCTION,
        "macro": TokenClass.BUILTIN_MACRO,
    }[entry.kind]


_WS = " \t\r\n\f\v"
# Characters that terminate a constituent run.
_TERMINATORS = set(_WS) | set("()\";'`,")

_INTEGER_RE = re.compile(r"[+-]?[0-9]+\Z")
_RATIO_RE = re.compile(r"[+-]?[0-9]+/[0-9]+\Z")
_RADIX_RE = {
    "b": re.compile(r"[+-]?[01]+(/[01]+)?\Z"),
    "o": re.compile(r"[+-]?[0-7]+(/[0-7]+)?\Z"),
    "x": re.compile(r"[+-]?[0-9a-fA-F]+(/[0-9a-fA-F]+)?\Z"),
}


def tokenize(source: str, table: BuiltinTable | None = None) -> list[Token]:
    """Lex ACL2 source into a lossless token stream."""
    if table is None:
        table = default_table()
    tokens: list[Token] = []
    n = len(source)
    i = 0

    def emit(end: int, cls: TokenClass):
        nonlocal i
        tokens.append(Token(source[i:end], i, end, cls))
        i = end

    def constituent_end(start: int) -> int:
        j = start
        while j < n and source[j] not in _TERMINATORS:
            j += 1
        return j

    while i < n:
        c = source[i]
        if c in _WS:
            j = i + 1
            while j < n and source[j] in _WS:
                j += 1
            emit(j, TokenClass.WHITESPACE)
        elif c == ";":
            j = source.find("\n", i)
            emit(n if j < 0 else j, TokenClass.COMMENT)
        elif c == "(":
            emit(i + 1, TokenClass.LPAREN)
        elif c == ")":
            emit(i + 1, TokenClass.RPAREN)
        elif c == '"':
            j = i + 1
            closed = False
            while j < n:
                if source[j] == "\\" and j + 1 < n:
                    j += 2
                elif source[j] == '"':
                    j += 1
                    closed = True
                    break
                else:
                    j += 1
            emit(j, TokenClass.STRING if closed else TokenClass.ERROR)
        elif c in "'`":
            emit(i + 1, TokenClass.SYMBOL)
        elif c == ",":
            j = i + 2 if source.startswith(",@", i) else i + 1
            emit(j, TokenClass.SYMBOL)
        elif c == "#":
            if source.startswith("#|", i):
                # Nested block comment; unterminated runs to EOF.
                depth = 1
                j = i + 2
                while j < n and depth:
                    if source.startswith("#|", j):
                        depth += 1
                        j += 2
                    elif source.startswith("|#", j):
                        depth -= 1
                        j += 2
                    else:
                        j += 1
                emit(j, TokenClass.COMMENT)
            elif source.startswith("#\\", i) and i + 2 < n:
                j = i + 3
                if source[i + 2].isalpha():
                    # Named characters: #\Space, #\Newline, ...
                    while j < n and (source[j].isalnum() or source[j] == "-"):
                        j += 1
                emit(j, TokenClass.CHARACTER)
            elif i + 1 < n and source[i + 1].lower() in "box":
                radix = source[i + 1].lower()
                j = constituent_end(i + 2)
                digits = source[i + 2:j]
                if _RADIX_RE[radix].match(digits):
                    cls = (TokenClass.RATIONAL if "/" in digits
                           else TokenClass.NUMBER)
                else:
                    cls = TokenClass.ERROR
                emit(j, cls)
            else:
                emit(max(constituent_end(i), i + 1), TokenClass.ERROR)
        else:
            j = constituent_end(i)
            text = source[i:j]
            if _INTEGER_RE.match(text):
                emit(j, TokenClass.NUMBER)
            elif _RATIO_RE.match(text):
                emit(j, TokenClass.RATIONAL)
            elif text.startswith(":"):
                emit(j, TokenClass.KEYWORD)
            else:
                emit(j, classify(text, table))
    return tokens
