"""Drive an ACL2 process (or the hermetic fake) over a byte-stream protocol.

Completion detection keys on a sentinel, not on prompts: after each form we
ask the backend to print ``PROOFPAD-SENTINEL-<id>`` on its own line, and a
submission is complete once that line followed by a prompt has been seen.
This survives forms that produce multiple prompts (a progn of events).
"""
from __future__ import annotations

import os
import queue
import re
import shutil
import subprocess
import threading
import time
from dataclasses import dataclass
from fractions import Fraction

from . import output as output_mod
from .errors import (BackendCrashed, FormTimeout, PoisonedHandle, SpawnFailure,
                     StartupTimeout)
from .lex import TokenClass
from .sexp import QUOTE_PUNCT, SexpAtom, SexpList, parse_source

DEFAULT_PROMPT_PATTERN = r"ACL2 !?>"
SENTINEL_PREFIX = "PROOFPAD-SENTINEL-"


@dataclass
class BackendConfig:
    executable: str | None = None
    prompt_pattern: str = DEFAULT_PROMPT_PATTERN
    startup_timeout: float = 30.0
    form_timeout: float = 30.0

    def __post_init__(self):
        if self.startup_timeout <= 0 or self.form_timeout <= 0:
            raise ValueError("timeouts must be positive")


@dataclass
class Submission:
    form: str
    sentinel_id: int
    result: str  # raw output, verbatim
    outcome: str  # "success" | "failure" | "timeout" | "crashed"


class ProtocolScanner:
    """Incremental scanner over the backend's output stream.

    The scan result depends only on the accumulated bytes, never on how
    they were chunked.
    """

    def __init__(self, prompt_pattern: str = DEFAULT_PROMPT_PATTERN):
        self.prompt_re = re.compile(prompt_pattern)
        self.buffer = ""

    def feed(self, text: str):
        self.buffer += text

    def scan_first_prompt(self) -> bool:
        """Consume through the first prompt; True once it has appeared."""
        m = self.prompt_re.search(self.buffer)
        if m is None:
            return False
        self.buffer = self.buffer[m.end():]
        return True

    def scan_submission(self, sentinel_id: int) -> str | None:
        """Raw output preceding the sentinel line, once sentinel+prompt
        have both arrived; None while still incomplete."""
        sentinel = SENTINEL_PREFIX + str(sentinel_id)
        pattern = re.compile(r"^\s*" + re.escape(sentinel) + r"\s*$",
                             re.MULTILINE)
        m = pattern.search(self.buffer)
        if m is None:
            return None
        after = self.prompt_re.search(self.buffer, m.end())
        if after is None:
            return None
        raw = self.buffer[:m.start()]
        self.buffer = self.buffer[after.end():]
        return raw


def sentinel_command(sentinel_id: int) -> str:
    """The print command sent after each form."""
    return f'(cw "~%{SENTINEL_PREFIX}~x0~%" {sentinel_id})'


def classify_outcome(raw: str) -> str:
    return "failure" if output_mod.scan_failure(raw) else "success"


# ---------------------------------------------------------------------------
# ACL2 value model used by the fake backend's evaluator.
# nil is the empty tuple, t is True, proper lists are tuples.
# ---------------------------------------------------------------------------

NIL = ()
T = True


@dataclass(frozen=True)
class Symbol:
    name: str  # stored upcased

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Char:
    ch: str


_CHAR_NAMES = {"space": " ", "newline": "\n", "tab": "\t", "rubout": "\x7f",
               "return": "\r", "page": "\f", "null": "\0"}
_CHAR_NAMES_REV = {v: k.capitalize() for k, v in _CHAR_NAMES.items()}


class EvalError(Exception):
    """Raised inside the fake evaluator; converted to ACL2-style output."""


def format_value(value) -> str:
    if value is True:
        return "T"
    if value == () and isinstance(value, tuple):
        return "NIL"
    if isinstance(value, bool):
        return "T" if value else "NIL"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, Symbol):
        return value.name
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, Char):
        name = _CHAR_NAMES_REV.get(value.ch)
        return "#\\" + (name if name else value.ch)
    if isinstance(value, tuple):
        return "(" + " ".join(format_value(v) for v in value) + ")"
    raise EvalError(f"unprintable value {value!r}")


def _unescape_string(lexeme: str) -> str:
    body = lexeme[1:-1]
    out = []
    i = 0
    while i < len(body):
        if body[i] == "\\" and i + 1 < len(body):
            out.append(body[i + 1])
            i += 2
        else:
            out.append(body[i])
            i += 1
    return "".join(out)


def atom_value(atom: SexpAtom):
    """Literal value of an atom token (quoted context)."""
    tok = atom.token
    text = tok.lexeme
    if tok.cls is TokenClass.NUMBER:
        if text.lower().startswith(("#b", "#o", "#x")):
            base = {"b": 2, "o": 8, "x": 16}[text[1].lower()]
            return int(text[2:], base)
        return int(text)
    if tok.cls is TokenClass.RATIONAL:
        if text.lower().startswith(("#b", "#o", "#x")):
            base = {"b": 2, "o": 8, "x": 16}[text[1].lower()]
            num, den = text[2:].split("/")
            return Fraction(int(num, base), int(den, base))
        return Fraction(text)
    if tok.cls is TokenClass.STRING:
        return _unescape_string(text)
    if tok.cls is TokenClass.CHARACTER:
        name = text[2:]
        if len(name) == 1:
            return Char(name)
        return Char(_CHAR_NAMES.get(name.lower(), name[0]))
    lowered = text.lower()
    if lowered == "t":
        return T
    if lowered == "nil":
        return NIL
    return Symbol(text.upper())


def datum_value(node):
    """Value of a quoted datum."""
    if isinstance(node, SexpAtom):
        return atom_value(node)
    items = node.items
    if items and isinstance(items[0], SexpAtom) and items[0].text == "'":
        return (Symbol("QUOTE"), datum_value(items[1]))
    return tuple(datum_value(item) for item in items)


def _require_number(value, what: str):
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise EvalError(f"{what} expects numbers, got {format_value(value)}")
    return value


def _require_list(value, what: str):
    if not isinstance(value, tuple):
        raise EvalError(f"{what} expects a true list, got "
                        f"{format_value(value)}")
    return value


def _truthy(value) -> bool:
    return not (isinstance(value, tuple) and value == ())


def _bool(flag: bool):
    return T if flag else NIL


class _Evaluator:
    """Small applicative-ACL2 interpreter used by the fake backend."""

    MAX_DEPTH = 2000

    def __init__(self, functions: dict):
        self.functions = functions  # name -> (params, body ast)

    def eval(self, node, env: dict, depth: int = 0):
        if depth > self.MAX_DEPTH:
            raise EvalError("recursion depth limit exceeded")
        if isinstance(node, SexpAtom):
            tok = node.token
            if tok.cls in (TokenClass.NUMBER, TokenClass.RATIONAL,
                           TokenClass.STRING, TokenClass.CHARACTER,
                           TokenClass.KEYWORD):
                return atom_value(node)
            lowered = tok.lexeme.lower()
            if lowered == "t":
                return T
            if lowered == "nil":
                return NIL
            if lowered in env:
                return env[lowered]
            raise EvalError(f"variable {tok.lexeme.upper()} is unbound")
        items = node.items
        if not items:
            return NIL
        head_node = items[0]
        if isinstance(head_node, SexpAtom) and head_node.text in QUOTE_PUNCT:
            if head_node.text == "'":
                return datum_value(items[1])
            raise EvalError("backquote is not supported here")
        if not isinstance(head_node, SexpAtom):
            raise EvalError("only symbol heads can be applied")
        head = head_node.text.lower()
        if head == "quote":
            return datum_value(items[1])
        if head == "if":
            if len(items) != 4:
                raise EvalError("if takes exactly 3 arguments")
            test = self.eval(items[1], env, depth + 1)
            branch = items[2] if _truthy(test) else items[3]
            return self.eval(branch, env, depth + 1)
        if head in ("and", "or"):
            value = T if head == "and" else NIL
            for item in items[1:]:
                value = self.eval(item, env, depth + 1)
                if _truthy(value) == (head == "or"):
                    return value
            return value
        if head in ("let", "let*"):
            if len(items) < 3 or not isinstance(items[1], SexpList):
                raise EvalError(f"malformed {head}")
            scope = dict(env)
            for binding in items[1].items:
                if (not isinstance(binding, SexpList)
                        or len(binding.items) != 2
                        or not isinstance(binding.items[0], SexpAtom)):
                    raise EvalError(f"malformed {head} binding")
                var = binding.items[0].text.lower()
                value_env = scope if head == "let*" else env
                scope[var] = self.eval(binding.items[1], value_env, depth + 1)
            return self.eval(items[-1], scope, depth + 1)
        if head == "cond":
            for clause in items[1:]:
                if not isinstance(clause, SexpList) or not clause.items:
                    raise EvalError("malformed cond clause")
                if _truthy(self.eval(clause.items[0], env, depth + 1)):
                    if len(clause.items) == 1:
                        return T
                    return self.eval(clause.items[-1], env, depth + 1)
            return NIL
        args = [self.eval(item, env, depth + 1) for item in items[1:]]
        return self.apply(head, args, depth)

    def apply(self, head: str, args: list, depth: int):
        builtin = _BUILTINS.get(head)
        if builtin is not None:
            arity, fn = builtin
            if arity is not None and len(args) != arity:
                raise EvalError(f"{head} takes {arity} argument(s), "
                                f"got {len(args)}")
            return fn(args)
        user = self.functions.get(head)
        if user is None:
            raise EvalError(f"the function {head.upper()} is undefined")
        params, body = user
        if len(args) != len(params):
            raise EvalError(f"{head.upper()} takes {len(params)} "
                            f"argument(s), got {len(args)}")
        env = dict(zip(params, args))
        return self.eval(body, env, depth + 1)


def _arith(op, args, identity=None, what="+"):
    values = [_require_number(a, what) for a in args]
    if not values:
        return identity
    acc = values[0]
    if len(values) == 1 and what == "-":
        return -acc
    if len(values) == 1 and what == "/":
        return Fraction(1, 1) / acc
    for v in values[1:]:
        acc = op(acc, v)
    if isinstance(acc, Fraction) and acc.denominator == 1:
        return int(acc)
    return acc


def _cmp_chain(args, op, what):
    a = _require_number(args[0], what)
    b = _require_number(args[1], what)
    return _bool(op(a, b))


def _equal(a, b) -> bool:
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a == b
    if type(a) is not type(b):
        return False
    if isinstance(a, tuple):
        return len(a) == len(b) and all(_equal(x, y) for x, y in zip(a, b))
    return a == b


def _car(args):
    lst = args[0]
    if lst == () or not isinstance(lst, tuple):
        if lst == () and isinstance(lst, tuple):
            return NIL
        raise EvalError("car expects a list")
    return lst[0]


def _cdr(args):
    lst = args[0]
    if lst == () and isinstance(lst, tuple):
        return NIL
    if not isinstance(lst, tuple):
        raise EvalError("cdr expects a list")
    return lst[1:]


def _cons(args):
    head, tail = args
    _require_list(tail, "cons (proper lists only)")
    return (head,) + tail


def _append(args):
    out = ()
    for value in args:
        out = out + _require_list(value, "append")
    return out


def _member(args):
    item, lst = args
    _require_list(lst, "member")
    for i, v in enumerate(lst):
        if _equal(item, v):
            return lst[i:]
    return NIL


def _nat_listp(args):
    v = args[0]
    return _bool(isinstance(v, tuple) and all(
        isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in v))


def _nth(args):
    n, lst = args
    _require_number(n, "nth")
    _require_list(lst, "nth")
    return lst[n] if 0 <= n < len(lst) else NIL


_BUILTINS: dict[str, tuple[int | None, object]] = {
    "+": (None, lambda a: _arith(lambda x, y: x + y, a, identity=0, what="+")),
    "*": (None, lambda a: _arith(lambda x, y: x * y, a, identity=1, what="*")),
    "-": (None, lambda a: _arith(lambda x, y: x - y, a, what="-")),
    "/": (None, lambda a: _arith(lambda x, y: Fraction(x) / y, a, what="/")),
    "<": (2, lambda a: _cmp_chain(a, lambda x, y: x < y, "<")),
    "<=": (2, lambda a: _cmp_chain(a, lambda x, y: x <= y, "<=")),
    ">": (2, lambda a: _cmp_chain(a, lambda x, y: x > y, ">")),
    ">=": (2, lambda a: _cmp_chain(a, lambda x, y: x >= y, ">=")),
    "=": (2, lambda a: _cmp_chain(a, lambda x, y: x == y, "=")),
    "max": (2, lambda a: max(_require_number(a[0], "max"),
                             _require_number(a[1], "max"))),
    "min": (2, lambda a: min(_require_number(a[0], "min"),
                             _require_number(a[1], "min"))),
    "1+": (1, lambda a: _require_number(a[0], "1+") + 1),
    "1-": (1, lambda a: _require_number(a[0], "1-") - 1),
    "abs": (1, lambda a: abs(_require_number(a[0], "abs"))),
    "expt": (2, lambda a: _require_number(a[0], "expt")
             ** _require_number(a[1], "expt")),
    "equal": (2, lambda a: _bool(_equal(a[0], a[1]))),
    "eql": (2, lambda a: _bool(_equal(a[0], a[1]))),
    "eq": (2, lambda a: _bool(_equal(a[0], a[1]))),
    "not": (1, lambda a: _bool(not _truthy(a[0]))),
    "implies": (2, lambda a: _bool(not _truthy(a[0]) or _truthy(a[1]))),
    "iff": (2, lambda a: _bool(_truthy(a[0]) == _truthy(a[1]))),
    "car": (1, _car),
    "cdr": (1, _cdr),
    "first": (1, _car),
    "rest": (1, _cdr),
    "cons": (2, _cons),
    "append": (None, _append),
    "list": (None, lambda a: tuple(a)),
    "len": (1, lambda a: len(_require_list(a[0], "len"))),
    "length": (1, lambda a: len(a[0]) if isinstance(a[0], str)
               else len(_require_list(a[0], "length"))),
    "reverse": (1, lambda a: tuple(reversed(_require_list(a[0], "reverse")))),
    "nth": (2, _nth),
    "atom": (1, lambda a: _bool(not isinstance(a[0], tuple) or a[0] == ())),
    "consp": (1, lambda a: _bool(isinstance(a[0], tuple) and a[0] != ())),
    "endp": (1, lambda a: _bool(a[0] == () and isinstance(a[0], tuple))),
    "true-listp": (1, lambda a: _bool(isinstance(a[0], tuple))),
    "nat-listp": (1, _nat_listp),
    "member": (2, _member),
    "member-equal": (2, _member),
    "zp": (1, lambda a: _bool(not (isinstance(a[0], int)
                                   and not isinstance(a[0], bool)
                                   and a[0] > 0))),
    "natp": (1, lambda a: _bool(isinstance(a[0], int)
                                and not isinstance(a[0], bool) and a[0] >= 0)),
    "posp": (1, lambda a: _bool(isinstance(a[0], int)
                                and not isinstance(a[0], bool) and a[0] > 0)),
    "integerp": (1, lambda a: _bool(isinstance(a[0], int)
                                    and not isinstance(a[0], bool))),
    "rationalp": (1, lambda a: _bool(not isinstance(a[0], bool)
                                     and isinstance(a[0], (int, Fraction)))),
    "booleanp": (1, lambda a: _bool(a[0] is True
                                    or (isinstance(a[0], tuple)
                                        and a[0] == ()))),
    "characterp": (1, lambda a: _bool(isinstance(a[0], Char))),
    "stringp": (1, lambda a: _bool(isinstance(a[0], str))),
    "symbolp": (1, lambda a: _bool(isinstance(a[0], Symbol) or a[0] is True
                                   or (isinstance(a[0], tuple)
                                       and a[0] == ()))),
}


# ---------------------------------------------------------------------------
# Fake backend
# ---------------------------------------------------------------------------

def _form_banner(head: str, name: str) -> str:
    return f"( {head.upper()} {name.upper()} ...)"


class FakeBackend:
    """In-process stand-in for ACL2 with ACL2-shaped output.

    Implements defun admission with duplicate-name rejection, defthm
    admission unless the body is the literal nil, expression evaluation
    (arithmetic and list primitives, plus user defuns), progn, and an
    undo stack.  The submission log records every form text, for tests
    that assert what did or did not reach the backend.
    """

    def __init__(self):
        self.functions: dict[str, tuple[list[str], object]] = {}
        self.world: list[tuple[str, str]] = []  # (kind, name) undo entries
        self.submission_log: list[str] = []
        self._next_sentinel = 1
        self._lock = threading.Lock()
        self.alive = True

    @property
    def world_counter(self) -> int:
        return len(self.world)

    def submit(self, form_text: str) -> Submission:
        with self._lock:
            sentinel_id = self._next_sentinel
            self._next_sentinel += 1
            self.submission_log.append(form_text)
            raw = self._run(form_text)
            return Submission(form_text, sentinel_id, raw,
                              classify_outcome(raw))

    def undo_through(self, count: int) -> Submission:
        if count < 1:
            raise ValueError("undo count must be positive")
        with self._lock:
            if count > len(self.world):
                raise ValueError("cannot undo more events than were admitted")
            for _ in range(count):
                kind, name = self.world.pop()
                if kind == "defun":
                    self.functions.pop(name, None)
            sentinel_id = self._next_sentinel
            self._next_sentinel += 1
            raw = f"Undid {count} event(s).\n"
            return Submission(f":undo {count}", sentinel_id, raw, "success")

    def restart(self):
        self.functions.clear()
        self.world.clear()
        self.alive = True

    def terminate(self):
        self.alive = False

    # -- internals ----------------------------------------------------------

    def _run(self, form_text: str) -> str:
        forms = parse_source(form_text)
        forms = [f for f in forms if f.head or not isinstance(f.tree, SexpAtom)
                 or f.tree.token.cls is not TokenClass.RPAREN]
        if not forms:
            return self._error("TOP-LEVEL", "empty input")
        if not forms[0].complete:
            return self._error("TOP-LEVEL", "unbalanced form")
        return self._run_form(forms[0].tree)

    def _run_form(self, tree) -> str:
        if isinstance(tree, SexpList) and tree.items and \
                isinstance(tree.items[0], SexpAtom):
            head = tree.items[0].text.lower()
            if head in ("defun", "defund"):
                return self._admit_defun(tree)
            if head in ("defthm", "defthmd"):
                return self._admit_defthm(tree)
            if head == "progn":
                return self._admit_progn(tree)
        return self._evaluate(tree)

    def _error(self, context: str, message: str) -> str:
        return (f"ACL2 Error in {context}:  {message}\n\n"
                + output_mod.FAILED_BANNER + "\n")

    def _summary(self, form_banner: str, extra: str = "") -> str:
        return (f"{extra}Summary\nForm:  {form_banner}\nRules: NIL\n"
                "Time:  0.00 seconds (prove: 0.00, print: 0.00, other: 0.00)\n")

    def _admit_defun(self, tree: SexpList) -> str:
        if (len(tree.items) < 4 or not isinstance(tree.items[1], SexpAtom)
                or not isinstance(tree.items[2], SexpList)):
            return self._error("( DEFUN ...)", "malformed defun")
        name = tree.items[1].text.lower()
        banner = _form_banner("defun", name)
        if name in self.functions or name in _BUILTINS:
            return self._error(
                banner, f"The name {name.upper()} is in use as a function. "
                "Redefinition is not permitted.")
        params = [p.text.lower() for p in tree.items[2].items
                  if isinstance(p, SexpAtom)]
        body = tree.items[-1]
        self.functions[name] = (params, body)
        self.world.append(("defun", name))
        return self._summary(
            banner, f"Since {name.upper()} is admissible, we are done.\n\n") \
            + f" {name.upper()}\n"

    def _admit_defthm(self, tree: SexpList) -> str:
        if len(tree.items) < 3 or not isinstance(tree.items[1], SexpAtom):
            return self._error("( DEFTHM ...)", "malformed defthm")
        name = tree.items[1].text.lower()
        banner = _form_banner("defthm", name)
        body = tree.items[2]
        if isinstance(body, SexpAtom) and body.text.lower() == "nil":
            return (f"ACL2 Error in {banner}:  The proof of the formula "
                    "NIL has failed.\n\n"
                    + self._summary(banner)
                    + "\n" + output_mod.FAILED_BANNER + "\n")
        self.world.append(("defthm", name))
        return self._summary(banner, "Q.E.D.\n\n") + f" {name.upper()}\n"

    def _admit_progn(self, tree: SexpList) -> str:
        chunks = []
        added = 0
        for item in tree.items[1:]:
            before = len(self.world)
            raw = self._run_form(item)
            chunks.append(raw)
            if classify_outcome(raw) == "failure":
                # Atomic: roll back the events this progn already added.
                for _ in range(added):
                    kind, name = self.world.pop()
                    if kind == "defun":
                        self.functions.pop(name, None)
                return "".join(chunks)
            added += len(self.world) - before
        return "".join(chunks)

    def _evaluate(self, tree) -> str:
        evaluator = _Evaluator(self.functions)
        try:
            value = evaluator.eval(tree, {})
        except EvalError as exc:
            return self._error("TOP-LEVEL", str(exc))
        except RecursionError:
            return self._error("TOP-LEVEL", "call stack exhausted")
        return format_value(value) + "\n"


def fake_backend() -> FakeBackend:
    """A fresh hermetic backend with world counter 0."""
    return FakeBackend()


# ---------------------------------------------------------------------------
# Real ACL2 process backend
# ---------------------------------------------------------------------------

class ProcessBackend:
    """Wrap a real ACL2 process over stdin/stdout.

    One submission in flight at a time; a per-form timeout poisons the
    handle, which must then be restarted (the session replays admitted
    forms to restore state).
    """

    def __init__(self, config: BackendConfig):
        if not config.executable:
            raise SpawnFailure("no ACL2 executable configured")
        self.config = config
        self._lock = threading.Lock()
        self.poisoned = False
        self._next_sentinel = 1
        self._start_process()

    def _start_process(self):
        exe = self.config.executable
        if not (os.path.isfile(exe) and os.access(exe, os.X_OK)):
            raise SpawnFailure(f"{exe} is missing or not executable")
        try:
            self.proc = subprocess.Popen(
                [exe], stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                stderr=subprocess.STDOUT)
        except OSError as exc:
            raise SpawnFailure(str(exc)) from exc
        self.scanner = ProtocolScanner(self.config.prompt_pattern)
        self._chunks: queue.Queue = queue.Queue()
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()
        deadline = time.monotonic() + self.config.startup_timeout
        while not self.scanner.scan_first_prompt():
            self._pump(deadline, StartupTimeout)

    def _read_loop(self):
        stream = self.proc.stdout
        while True:
            data = stream.read1(65536) if hasattr(stream, "read1") \
                else stream.read(1)
            if not data:
                self._chunks.put(None)
                return
            self._chunks.put(data.decode("utf-8", errors="replace"))

    def _pump(self, deadline: float, timeout_exc):
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            raise timeout_exc("backend did not respond in time")
        try:
            chunk = self._chunks.get(timeout=min(remaining, 0.1))
        except queue.Empty:
            return
        if chunk is None:
            raise BackendCrashed("ACL2 process exited")
        self.scanner.feed(chunk)

    @property
    def alive(self) -> bool:
        return not self.poisoned and self.proc.poll() is None

    def submit(self, form_text: str) -> Submission:
        with self._lock:
            if self.poisoned:
                raise PoisonedHandle("handle must be restarted after timeout")
            sentinel_id = self._next_sentinel
            self._next_sentinel += 1
            payload = form_text + "\n" + sentinel_command(sentinel_id) + "\n"
            try:
                self.proc.stdin.write(payload.encode("utf-8"))
                self.proc.stdin.flush()
            except (BrokenPipeError, OSError):
                return Submission(form_text, sentinel_id, "", "crashed")
            deadline = time.monotonic() + self.config.form_timeout
            while True:
                raw = self.scanner.scan_submission(sentinel_id)
                if raw is not None:
                    return Submission(form_text, sentinel_id, raw,
                                      classify_outcome(raw))
                try:
                    self._pump(deadline, FormTimeout)
                except FormTimeout:
                    self.poisoned = True
                    self.proc.kill()
                    return Submission(form_text, sentinel_id,
                                      self.scanner.buffer, "timeout")
                except BackendCrashed:
                    return Submission(form_text, sentinel_id,
                                      self.scanner.buffer, "crashed")

    def undo_through(self, count: int) -> Submission:
        if count < 1:
            raise ValueError("undo count must be positive")
        return self.submit("\n".join([":u"] * count))

    def restart(self):
        self.terminate()
        self.poisoned = False
        self._start_process()

    def terminate(self):
        if self.proc.poll() is None:
            self.proc.kill()


def discover_acl2(flag_value: str | None = None) -> str | None:
    """Executable discovery: flag, then PROOFPAD_ACL2, then the PATH."""
    if flag_value:
        return flag_value
    env = os.environ.get("PROOFPAD_ACL2")
    if env:
        return env
    return shutil.which("acl2")


def start(config: BackendConfig | None = None, fake: bool = False):
    """Start a backend handle per config; fake selects the hermetic double."""
    if fake:
        return fake_backend()
    if config is None:
        config = BackendConfig(executable=discover_acl2())
    return ProcessBackend(config)
