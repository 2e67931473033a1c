"""Static checks over parsed forms.

Fixed diagnostic codes:

  arity-mismatch      wrong argument count for a builtin or user function
  undefined-function  head symbol defined nowhere in the file or table
  forward-reference   head symbol defined later in the file (warning)
  undefined-variable  symbol in value position with no enclosing binding
  malformed-macro     builtin macro used with the wrong shape
  unbalanced-form     incomplete form (unclosed or dangling paren)

Scope tracking is deliberately shallow: only defun parameter lists and
let/let* bindings introduce variables.
"""
from __future__ import annotations

from dataclasses import dataclass

from .lex import BuiltinTable, TokenClass, default_table
from .sexp import QUOTE_PUNCT, SexpAtom, SexpList, TopLevelForm

# Macros whose shape we verify; everything else gets arity checks only.
SHAPE_CHECKED = {"let", "let*", "cond", "case", "defun", "defund", "defthm",
                 "defthmd", "defconst"}

# Event heads whose bodies are not evaluable expressions; skip their contents.
_OPAQUE_HEADS = {"defmacro", "defproperty", "include-book", "in-package",
                 "in-theory", "defpkg", "deftheory", "declare", "defstobj",
                 "defabbrev", "table", "theory-invariant", "defattach",
                 "verify-guards", "verify-termination", "defequiv", "defcong",
                 "b*", "case-match", "er", "defstub", "defchoose", "defun-sk"}

_ANY_ENV = object()  # sentinel: every variable counts as bound (defthm bodies)


@dataclass(frozen=True)
class Diagnostic:
    start: int
    end: int
    severity: str  # "error" | "warning"
    code: str
    message: str

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass
class _FileScope:
    functions: dict[str, tuple[int, int | None, int]]  # name -> (min, max, form index)
    constants: set[str]


def _head_symbol(node: SexpList) -> SexpAtom | None:
    if node.items and isinstance(node.items[0], SexpAtom):
        atom = node.items[0]
        if atom.token.cls in (TokenClass.SYMBOL, TokenClass.EVENT,
                              TokenClass.BUILTIN_FUNCTION,
                              TokenClass.BUILTIN_MACRO):
            if atom.text not in QUOTE_PUNCT:
                return atom
    return None


def _collect_file_scope(forms: list[TopLevelForm]) -> _FileScope:
    functions: dict[str, tuple[int, int | None, int]] = {}
    constants: set[str] = set()
    for idx, form in enumerate(forms):
        tree = form.tree
        if not isinstance(tree, SexpList) or len(tree.items) < 2:
            continue
        head = form.head.lower()
        name_node = tree.items[1]
        if not isinstance(name_node, SexpAtom):
            continue
        name = name_node.text.lower()
        if head in ("defun", "defund", "defun-sk") and len(tree.items) >= 3:
            params = tree.items[2]
            if isinstance(params, SexpList):
                arity = len(params.items)
                functions.setdefault(name, (arity, arity, idx))
        elif head == "defmacro":
            functions.setdefault(name, (0, None, idx))
        elif head == "defconst":
            constants.add(name)
        elif head == "defstub" and len(tree.items) >= 3:
            params = tree.items[2]
            if isinstance(params, SexpList):
                arity = len(params.items)
                functions.setdefault(name, (arity, arity, idx))
    return _FileScope(functions, constants)


class _Linter:
    def __init__(self, table: BuiltinTable, scope: _FileScope):
        self.table = table
        self.scope = scope
        self.diags: list[Diagnostic] = []

    def report(self, node, severity, code, message):
        self.diags.append(Diagnostic(node.start, node.end, severity, code,
                                     message))

    # -- variable positions -------------------------------------------------

    def check_atom(self, atom: SexpAtom, env):
        tok = atom.token
        if tok.cls is not TokenClass.SYMBOL or tok.lexeme in QUOTE_PUNCT:
            return
        name = tok.lexeme.lower()
        if name in ("t", "nil", "state"):
            return
        if env is _ANY_ENV or name in env:
            return
        if name in self.scope.constants:
            return
        self.report(atom, "error", "undefined-variable",
                    f"variable {tok.lexeme} is not bound here")

    # -- expressions --------------------------------------------------------

    def check_expr(self, node, env, form_index: int):
        if isinstance(node, SexpAtom):
            self.check_atom(node, env)
            return
        if not node.items:
            return  # () is nil
        head_atom = _head_symbol(node)
        if head_atom is None:
            first = node.items[0]
            if (isinstance(first, SexpAtom) and first.text in QUOTE_PUNCT):
                return  # quoted or backquoted datum: no evaluation
            if (isinstance(first, SexpList)
                    and (h := _head_symbol(first)) is not None
                    and h.text.lower() == "lambda"):
                self.check_lambda(first, node, env, form_index)
                return
            for item in node.items:
                self.check_expr(item, env, form_index)
            return
        head = head_atom.text.lower()
        if head == "quote":
            return
        if head in ("let", "let*"):
            self.check_let(node, env, form_index, sequential=(head == "let*"))
            return
        if head == "cond":
            self.check_cond(node, env, form_index)
            return
        if head == "case":
            self.check_case(node, env, form_index)
            return
        if head in _OPAQUE_HEADS:
            self.check_call_arity(node, head)
            return
        entry = self.table.lookup(head)
        if entry is not None:
            self.check_call_arity(node, head)
            if entry.kind == "function" or head in ("and", "or", "list",
                                                    "list*", "mv", "if",
                                                    "when", "unless", "cw"):
                for item in node.items[1:]:
                    self.check_expr(item, env, form_index)
            return
        user = self.scope.functions.get(head)
        if user is None:
            self.report(head_atom, "error", "undefined-function",
                        f"function {head_atom.text} is not defined")
        else:
            lo, hi, def_index = user
            if def_index > form_index:
                self.report(head_atom, "warning", "forward-reference",
                            f"function {head_atom.text} is defined later in "
                            "the file")
            nargs = len(node.items) - 1
            if nargs < lo or (hi is not None and nargs > hi):
                self.report(node, "error", "arity-mismatch",
                            f"{head_atom.text} takes {self._arity_text(lo, hi)}"
                            f" argument(s), got {nargs}")
        for item in node.items[1:]:
            self.check_expr(item, env, form_index)

    @staticmethod
    def _arity_text(lo: int, hi: int | None) -> str:
        if hi is None:
            return f"at least {lo}"
        if lo == hi:
            return str(lo)
        return f"{lo} to {hi}"

    def check_call_arity(self, node: SexpList, head: str):
        entry = self.table.lookup(head)
        if entry is None:
            return
        nargs = len(node.items) - 1
        lo, hi = entry.min_arity, entry.max_arity
        if nargs < lo or (hi is not None and nargs > hi):
            self.report(node, "error", "arity-mismatch",
                        f"{head} takes {self._arity_text(lo, hi)} "
                        f"argument(s), got {nargs}")

    # -- binding forms ------------------------------------------------------

    def check_let(self, node: SexpList, env, form_index, sequential: bool):
        if len(node.items) < 3 or not isinstance(node.items[1], SexpList):
            self.report(node, "error", "malformed-macro",
                        "let requires a binding list and a body")
            return
        bindings = node.items[1]
        inner = None if env is _ANY_ENV else set(env)
        for binding in bindings.items:
            if (not isinstance(binding, SexpList)
                    or not 1 <= len(binding.items) <= 2
                    or not isinstance(binding.items[0], SexpAtom)
                    or binding.items[0].token.cls not in
                    (TokenClass.SYMBOL, TokenClass.BUILTIN_FUNCTION,
                     TokenClass.BUILTIN_MACRO, TokenClass.EVENT)):
                self.report(binding, "error", "malformed-macro",
                            "let binding must be (variable value)")
                continue
            var = binding.items[0].text.lower()
            if len(binding.items) == 2:
                value_env = (inner if sequential else env)
                self.check_expr(binding.items[1], value_env, form_index)
            if inner is not None:
                inner.add(var)
        body_env = _ANY_ENV if env is _ANY_ENV else inner
        for item in node.items[2:]:
            self.check_expr(item, body_env, form_index)

    def check_cond(self, node: SexpList, env, form_index):
        for clause in node.items[1:]:
            if not isinstance(clause, SexpList) or not clause.items:
                self.report(clause, "error", "malformed-macro",
                            "cond clause must be (test result...)")
                continue
            for item in clause.items:
                self.check_expr(item, env, form_index)

    def check_case(self, node: SexpList, env, form_index):
        if len(node.items) < 2:
            self.report(node, "error", "malformed-macro",
                        "case requires a discriminator expression")
            return
        self.check_expr(node.items[1], env, form_index)
        for clause in node.items[2:]:
            if not isinstance(clause, SexpList) or len(clause.items) < 2:
                self.report(clause, "error", "malformed-macro",
                            "case clause must be (key result...)")
                continue
            for item in clause.items[1:]:  # keys are not evaluated
                self.check_expr(item, env, form_index)

    def check_lambda(self, lam: SexpList, call: SexpList, env, form_index):
        if (len(lam.items) < 3 or not isinstance(lam.items[1], SexpList)):
            self.report(lam, "error", "malformed-macro",
                        "lambda requires a parameter list and a body")
            return
        params = {p.text.lower() for p in lam.items[1].items
                  if isinstance(p, SexpAtom)}
        body_env = _ANY_ENV if env is _ANY_ENV else set(env) | params
        for item in lam.items[2:]:
            self.check_expr(item, body_env, form_index)
        for arg in call.items[1:]:
            self.check_expr(arg, env, form_index)

    # -- top-level events ---------------------------------------------------

    def check_defun(self, node: SexpList, form_index):
        ok = (len(node.items) >= 4
              and isinstance(node.items[1], SexpAtom)
              and isinstance(node.items[2], SexpList)
              and all(isinstance(p, SexpAtom) for p in node.items[2].items))
        if not ok:
            self.report(node, "error", "malformed-macro",
                        "defun requires a name, a parameter list, and a body")
            return
        env = {p.text.lower() for p in node.items[2].items}
        for item in node.items[3:]:
            # Declarations and doc strings before the body are not evaluated.
            if isinstance(item, SexpAtom) and item.token.cls is TokenClass.STRING:
                continue
            if (isinstance(item, SexpList)
                    and (h := _head_symbol(item)) is not None
                    and h.text.lower() == "declare"):
                continue
            self.check_expr(item, env, form_index)

    def check_defthm(self, node: SexpList, form_index):
        if len(node.items) < 3 or not isinstance(node.items[1], SexpAtom):
            self.report(node, "error", "malformed-macro",
                        "defthm requires a name and a formula")
            return
        # Theorem variables are implicitly universally quantified.
        self.check_expr(node.items[2], _ANY_ENV, form_index)

    def check_defconst(self, node: SexpList, form_index):
        if not (3 <= len(node.items) <= 4
                and isinstance(node.items[1], SexpAtom)):
            self.report(node, "error", "malformed-macro",
                        "defconst requires a name and a value")
            return
        name = node.items[1].text
        if not (len(name) > 2 and name.startswith("*") and name.endswith("*")):
            self.report(node.items[1], "error", "malformed-macro",
                        "defconst names must be written *like-this*")
        self.check_expr(node.items[2], set(), form_index)

    def check_form(self, form: TopLevelForm, form_index: int):
        if not form.complete:
            self.report(form, "error", "unbalanced-form",
                        "form has unbalanced parentheses")
            return
        tree = form.tree
        head = form.head.lower()
        if isinstance(tree, SexpList) and head:
            if head in ("defun", "defund"):
                self.check_call_arity(tree, head)
                self.check_defun(tree, form_index)
                return
            if head in ("defthm", "defthmd"):
                self.check_call_arity(tree, head)
                self.check_defthm(tree, form_index)
                return
            if head == "defconst":
                self.check_defconst(tree, form_index)
                return
        self.check_expr(tree, set(), form_index)


def lint(forms: list[TopLevelForm],
         table: BuiltinTable | None = None) -> list[Diagnostic]:
    """Run every check over the forms; diagnostics ordered by span start."""
    if table is None:
        table = default_table()
    scope = _collect_file_scope(forms)
    linter = _Linter(table, scope)
    for idx, form in enumerate(forms):
        linter.check_form(form, idx)
    return sorted(linter.diags, key=lambda d: (d.start, d.end, d.code))


def lint_source(source: str,
                table: BuiltinTable | None = None) -> list[Diagnostic]:
    from .sexp import parse_source
    return lint(parse_source(source, table), table)
