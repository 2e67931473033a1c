"""Property-based testing: seeded generators, trial runner, theorem output.

The RNG is xorshift64* with splitmix64 seeding, fully specified here so a
report is reproducible from (property, trials, seed) alone.  Properties use
the defproperty surface syntax with (var :value (random-... args)) bindings.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .backend import Char, NIL, Symbol, T, datum_value, format_value
from .errors import MalformedProperty
from .lex import TokenClass
from .sexp import QUOTE_PUNCT, SexpAtom, SexpList, TopLevelForm, parse_source

_MASK = (1 << 64) - 1


def seed_state(seed: int) -> int:
    """Derive a nonzero 64-bit xorshift state from an arbitrary seed."""
    x = (seed & _MASK)
    # splitmix64 scramble
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z if z else 0x9E3779B97F4A7C15


def next_u64(state: int) -> tuple[int, int]:
    """xorshift64*: returns (output, next state)."""
    x = state
    x ^= x >> 12
    x = (x ^ (x << 25)) & _MASK
    x ^= x >> 27
    return (x * 0x2545F4914F6CDD1D) & _MASK, x


def next_below(state: int, n: int) -> tuple[int, int]:
    value, state = next_u64(state)
    return value % n, state


DEFAULT_INTEGER_RANGE = (-1000, 1000)
DEFAULT_NATURAL_MAX = 1000
DEFAULT_LIST_MAX = 10
_SYMBOL_POOL = ("A", "B", "C", "FOO", "BAR", "BAZ", "X", "Y", "Z", "QUX")
_CHAR_POOL = "abcdefghijklmnopqrstuvwxyz0123456789"


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str  # natural | integer | rational | boolean | character |
    #            symbol | string | between | list-of | one-of
    lo: int = 0
    hi: int = 0
    element: "GeneratorSpec | None" = None
    max_len: int = DEFAULT_LIST_MAX
    constants: tuple = ()

    def __post_init__(self):
        if self.kind == "between" and self.lo > self.hi:
            raise MalformedProperty(
                f"random-between range is empty: {self.lo} > {self.hi}")
        if self.kind == "list-of" and self.max_len < 0:
            raise MalformedProperty("random-list-of length must be >= 0")
        if self.kind == "one-of" and not self.constants:
            raise MalformedProperty("random-one-of needs at least one value")


@dataclass(frozen=True)
class PropertySpec:
    name: str
    bindings: tuple[tuple[str, GeneratorSpec], ...]
    body_text: str


@dataclass
class TestReport:
    trials_run: int
    passes: int
    counterexample: dict[str, object] | None
    seed: int
    error: str | None = None  # backend failure aborts with this set


def generate(gen: GeneratorSpec, state: int) -> tuple[object, int]:
    """One value from the generator; pure in (gen, state)."""
    kind = gen.kind
    if kind == "natural":
        return next_below(state, DEFAULT_NATURAL_MAX + 1)
    if kind == "integer":
        lo, hi = DEFAULT_INTEGER_RANGE
        v, state = next_below(state, hi - lo + 1)
        return v + lo, state
    if kind == "rational":
        num, state = next_below(state, 2001)
        den, state = next_below(state, 1000)
        value = Fraction(num - 1000, den + 1)
        return (value.numerator if value.denominator == 1 else value), state
    if kind == "boolean":
        v, state = next_below(state, 2)
        return (T if v else NIL), state
    if kind == "character":
        v, state = next_below(state, len(_CHAR_POOL))
        return Char(_CHAR_POOL[v]), state
    if kind == "symbol":
        v, state = next_below(state, len(_SYMBOL_POOL))
        return Symbol(_SYMBOL_POOL[v]), state
    if kind == "string":
        n, state = next_below(state, 11)
        chars = []
        for _ in range(n):
            v, state = next_below(state, len(_CHAR_POOL))
            chars.append(_CHAR_POOL[v])
        return "".join(chars), state
    if kind == "between":
        v, state = next_below(state, gen.hi - gen.lo + 1)
        return v + gen.lo, state
    if kind == "list-of":
        n, state = next_below(state, gen.max_len + 1)
        items = []
        for _ in range(n):
            value, state = generate(gen.element, state)
            items.append(value)
        return tuple(items), state
    if kind == "one-of":
        v, state = next_below(state, len(gen.constants))
        return gen.constants[v], state
    raise MalformedProperty(f"unknown generator kind {kind}")


# -- surface syntax ---------------------------------------------------------

_SIMPLE_GENERATORS = {
    "random-natural": "natural",
    "random-integer": "integer",
    "random-rational": "rational",
    "random-boolean": "boolean",
    "random-char": "character",
    "random-character": "character",
    "random-symbol": "symbol",
    "random-string": "string",
}


def _constant_value(node):
    """Value of a random-one-of argument: 'a means the symbol A."""
    if isinstance(node, SexpList) and node.items \
            and isinstance(node.items[0], SexpAtom) \
            and node.items[0].text == "'":
        return datum_value(node.items[1])
    return datum_value(node)


def _parse_generator(node) -> GeneratorSpec:
    if not isinstance(node, SexpList) or not node.items \
            or not isinstance(node.items[0], SexpAtom):
        raise MalformedProperty("generator must be a (random-...) form")
    head = node.items[0].text.lower()
    args = node.items[1:]
    if head in _SIMPLE_GENERATORS:
        if args:
            raise MalformedProperty(f"{head} takes no arguments")
        return GeneratorSpec(_SIMPLE_GENERATORS[head])
    if head == "random-between":
        if len(args) != 2 or not all(isinstance(a, SexpAtom) for a in args):
            raise MalformedProperty("random-between takes two integers")
        lo, hi = (datum_value(a) for a in args)
        if not all(isinstance(v, int) and not isinstance(v, bool)
                   for v in (lo, hi)):
            raise MalformedProperty("random-between bounds must be integers")
        return GeneratorSpec("between", lo=lo, hi=hi)
    if head == "random-list-of":
        if not 1 <= len(args) <= 2:
            raise MalformedProperty(
                "random-list-of takes a generator and an optional max length")
        element = _parse_generator(args[0])
        max_len = DEFAULT_LIST_MAX
        if len(args) == 2:
            max_len = datum_value(args[1])
            if not isinstance(max_len, int) or isinstance(max_len, bool):
                raise MalformedProperty("random-list-of length must be an "
                                        "integer")
        return GeneratorSpec("list-of", element=element, max_len=max_len)
    if head == "random-one-of":
        if not args:
            raise MalformedProperty("random-one-of needs at least one value")
        return GeneratorSpec("one-of",
                             constants=tuple(_constant_value(a) for a in args))
    raise MalformedProperty(f"unknown generator {head}")


def _free_variables(node, bound: set[str], acc: set[str], head_pos=False):
    if isinstance(node, SexpAtom):
        tok = node.token
        if head_pos or tok.cls is not TokenClass.SYMBOL \
                or tok.lexeme in QUOTE_PUNCT:
            return
        name = tok.lexeme.lower()
        if name not in ("t", "nil") and name not in bound:
            acc.add(name)
        return
    if isinstance(node, SexpList):
        items = node.items
        if items and isinstance(items[0], SexpAtom):
            first = items[0].text
            if first in QUOTE_PUNCT or first.lower() == "quote":
                return
            if first.lower() in ("let", "let*") and len(items) >= 3 \
                    and isinstance(items[1], SexpList):
                inner = set(bound)
                for b in items[1].items:
                    if isinstance(b, SexpList) and b.items \
                            and isinstance(b.items[0], SexpAtom):
                        if len(b.items) == 2:
                            _free_variables(b.items[1],
                                            bound if first.lower() == "let"
                                            else inner, acc)
                        inner.add(b.items[0].text.lower())
                for item in items[2:]:
                    _free_variables(item, inner, acc)
                return
            _free_variables(items[0], bound, acc, head_pos=True)
            for item in items[1:]:
                _free_variables(item, bound, acc)
            return
        for item in items:
            _free_variables(item, bound, acc)


def parse_property(form: TopLevelForm, source: str) -> PropertySpec:
    """Parse and validate a (defproperty name (bindings) body) form."""
    tree = form.tree
    if not isinstance(tree, SexpList) or form.head.lower() != "defproperty":
        raise MalformedProperty("not a defproperty form")
    if len(tree.items) != 4:
        raise MalformedProperty(
            "defproperty takes a name, a binding list, and a body")
    name_node, binding_node, body = tree.items[1:]
    if not isinstance(name_node, SexpAtom) \
            or name_node.token.cls is not TokenClass.SYMBOL:
        raise MalformedProperty("property name must be a symbol")
    if not isinstance(binding_node, SexpList):
        raise MalformedProperty("bindings must be a list")
    items = binding_node.items
    if len(items) % 3 != 0:
        raise MalformedProperty(
            "bindings must be (var :value (generator ...)) triples")
    bindings: list[tuple[str, GeneratorSpec]] = []
    seen: set[str] = set()
    for i in range(0, len(items), 3):
        var, kw, gen = items[i:i + 3]
        if not isinstance(var, SexpAtom) \
                or var.token.cls is not TokenClass.SYMBOL:
            raise MalformedProperty("binding variable must be a symbol")
        if not (isinstance(kw, SexpAtom) and kw.text.lower() == ":value"):
            raise MalformedProperty("binding must use :value")
        vname = var.text.lower()
        if vname in seen:
            raise MalformedProperty(f"duplicate binding for {var.text}")
        seen.add(vname)
        bindings.append((vname, _parse_generator(gen)))
    free: set[str] = set()
    _free_variables(body, seen, free)
    if free:
        raise MalformedProperty(
            "unbound variable(s) in body: " + ", ".join(sorted(free)))
    return PropertySpec(name_node.text.lower(), tuple(bindings),
                        source[body.start:body.end])


def parse_properties(source: str) -> list[PropertySpec]:
    """All defproperty forms in a file, in order."""
    return [parse_property(f, source) for f in parse_source(source)
            if f.head.lower() == "defproperty"]


# -- running ----------------------------------------------------------------

def instantiate(spec: PropertySpec, values: dict[str, object]) -> str:
    """Body text with each bound variable replaced by its quoted value."""
    forms = parse_source(spec.body_text)
    return _render_subst(forms[0].tree, spec.body_text, values)


def _render_subst(node, source: str, values, head_pos=False) -> str:
    if isinstance(node, SexpAtom):
        name = node.text.lower()
        if not head_pos and node.token.cls is TokenClass.SYMBOL \
                and name in values:
            return "'" + format_value(values[name])
        return node.text
    items = node.items
    if items and isinstance(items[0], SexpAtom) \
            and items[0].text in QUOTE_PUNCT:
        return source[node.start:node.end]
    parts = []
    for i, item in enumerate(items):
        parts.append(_render_subst(item, source, values, head_pos=(i == 0)))
    return "(" + " ".join(parts) + ")"


def _result_is_nil(raw: str) -> bool:
    lines = [ln.strip() for ln in raw.splitlines() if ln.strip()]
    return bool(lines) and lines[-1] == "NIL"


def run_property(spec: PropertySpec, trials: int, seed: int,
                 backend) -> TestReport:
    """Run seeded random trials; stop at the first falsifying assignment."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    state = seed_state(seed)
    passes = 0
    for _ in range(trials):
        values: dict[str, object] = {}
        for var, gen in spec.bindings:
            value, state = generate(gen, state)
            values[var] = value
        submission = backend.submit(instantiate(spec, values))
        if submission.outcome != "success":
            return TestReport(passes + 1, passes, None, seed,
                              error=submission.result.strip() or
                              submission.outcome)
        if _result_is_nil(submission.result):
            return TestReport(passes + 1, passes, values, seed)
        passes += 1
    return TestReport(trials, passes, None, seed)


# -- theorem translation ----------------------------------------------------

_TYPE_HYPOTHESES = {
    "natural": "(natp {v})",
    "integer": "(integerp {v})",
    "rational": "(rationalp {v})",
    "boolean": "(booleanp {v})",
    "character": "(characterp {v})",
    "symbol": "(symbolp {v})",
    "string": "(stringp {v})",
}

_LIST_HYPOTHESES = {
    "natural": "(nat-listp {v})",
    "integer": "(integer-listp {v})",
    "rational": "(rational-listp {v})",
    "boolean": "(boolean-listp {v})",
    "character": "(character-listp {v})",
    "symbol": "(symbol-listp {v})",
    "string": "(string-listp {v})",
}


def _hypothesis(var: str, gen: GeneratorSpec) -> str:
    if gen.kind in _TYPE_HYPOTHESES:
        return _TYPE_HYPOTHESES[gen.kind].format(v=var)
    if gen.kind == "between":
        return (f"(and (integerp {var}) (<= {gen.lo} {var}) "
                f"(<= {var} {gen.hi}))")
    if gen.kind == "list-of":
        inner = gen.element.kind if gen.element else ""
        if inner in _LIST_HYPOTHESES:
            return _LIST_HYPOTHESES[inner].format(v=var)
        return f"(true-listp {var})"
    if gen.kind == "one-of":
        consts = " ".join(format_value(c) for c in gen.constants)
        return f"(member-equal {var} '({consts}))"
    raise MalformedProperty(f"unknown generator kind {gen.kind}")


def to_theorem(spec: PropertySpec) -> str:
    """Render the property as a defthm with type hypotheses."""
    hyps = [_hypothesis(var, gen) for var, gen in spec.bindings]
    if not hyps:
        return f"(defthm {spec.name} {spec.body_text})"
    if len(hyps) == 1:
        condition = hyps[0]
    else:
        condition = "(and " + " ".join(hyps) + ")"
    return f"(defthm {spec.name} (implies {condition} {spec.body_text}))"


def format_report(spec: PropertySpec, report: TestReport) -> str:
    """One stable line per property, plus counterexample bindings."""
    if report.error is not None:
        return (f"{spec.name}: backend error after {report.passes} passes "
                f"(seed {report.seed})")
    if report.counterexample is None:
        return (f"{spec.name}: passed {report.passes}/{report.trials_run} "
                f"trials (seed {report.seed})")
    lines = [f"{spec.name}: FALSIFIED after {report.trials_run} trials "
             f"(seed {report.seed})"]
    for var, value in report.counterexample.items():
        lines.append(f"  {var} = {format_value(value)}")
    return "\n".join(lines)
