from fractions import Fraction

import pytest

from proofpad.backend import Char, NIL, Symbol, T, fake_backend
from proofpad.doublecheck import (GeneratorSpec, format_report, generate,
                                  instantiate, next_below, next_u64,
                                  parse_properties, parse_property,
                                  run_property, seed_state, to_theorem)
from proofpad.errors import MalformedProperty
from proofpad.sexp import parse_source

COMM = ("(defproperty comm-bad\n"
        "  (x :value (random-natural)\n"
        "   y :value (random-natural))\n"
        "  (equal (- x y) (- y x)))")

APPEND_LEN = ("(defproperty append-len\n"
              "  (a :value (random-list-of (random-natural))\n"
              "   b :value (random-list-of (random-natural)))\n"
              "  (equal (len (append a b)) (+ (len a) (len b))))")


def prop(text):
    [form] = parse_source(text)
    return parse_property(form, text)


# -- RNG --------------------------------------------------------------------

def test_rng_deterministic_and_spreads():
    s = seed_state(42)
    a, s1 = next_u64(s)
    b, _ = next_u64(s1)
    assert a != b
    assert next_u64(seed_state(42))[0] == a


def test_next_below_in_range():
    s = seed_state(7)
    for _ in range(200):
        v, s = next_below(s, 10)
        assert 0 <= v < 10


def test_distinct_seeds_give_distinct_streams():
    streams = set()
    for seed in range(20):
        s = seed_state(seed)
        vals = []
        for _ in range(4):
            v, s = next_below(s, 1000)
            vals.append(v)
        streams.add(tuple(vals))
    assert len(streams) == 20


# -- generators -------------------------------------------------------------

def sample(gen, n=1000, seed=99):
    s = seed_state(seed)
    out = []
    for _ in range(n):
        v, s = generate(gen, s)
        out.append(v)
    return out


def test_natural_generator_bounds():
    vals = sample(GeneratorSpec("natural"), 10000)
    assert all(isinstance(v, int) and 0 <= v <= 1000 for v in vals)
    assert min(vals) == 0 and max(vals) == 1000


def test_integer_generator_bounds():
    vals = sample(GeneratorSpec("integer"), 10000)
    assert all(-1000 <= v <= 1000 for v in vals)
    assert any(v < 0 for v in vals) and any(v > 0 for v in vals)


def test_rational_generator_shape():
    vals = sample(GeneratorSpec("rational"), 2000)
    assert all(isinstance(v, (int, Fraction)) for v in vals)
    assert any(isinstance(v, Fraction) for v in vals)


def test_boolean_character_symbol_string():
    assert set(sample(GeneratorSpec("boolean"), 100)) == {T, NIL}
    assert all(isinstance(v, Char) for v in sample(GeneratorSpec("character"), 50))
    assert all(isinstance(v, Symbol) for v in sample(GeneratorSpec("symbol"), 50))
    assert all(isinstance(v, str) for v in sample(GeneratorSpec("string"), 50))


def test_between_generator_inclusive():
    gen = GeneratorSpec("between", lo=3, hi=5)
    vals = sample(gen, 2000)
    assert set(vals) == {3, 4, 5}


def test_list_of_generator_lengths():
    gen = GeneratorSpec("list-of", element=GeneratorSpec("natural"))
    vals = sample(gen, 3000)
    lengths = {len(v) for v in vals}
    assert all(isinstance(v, tuple) for v in vals)
    assert max(lengths) == 10 and 0 in lengths


def test_one_of_generator():
    gen = GeneratorSpec("one-of", constants=(1, 2, 3))
    assert set(sample(gen, 500)) == {1, 2, 3}


def test_generator_spec_validation():
    with pytest.raises(MalformedProperty):
        GeneratorSpec("between", lo=5, hi=3)
    with pytest.raises(MalformedProperty):
        GeneratorSpec("list-of", element=GeneratorSpec("natural"), max_len=-1)
    with pytest.raises(MalformedProperty):
        GeneratorSpec("one-of")


# -- parsing ----------------------------------------------------------------

def test_parse_property_structure():
    spec = prop(COMM)
    assert spec.name == "comm-bad"
    assert [v for v, _ in spec.bindings] == ["x", "y"]
    assert spec.bindings[0][1].kind == "natural"
    assert spec.body_text == "(equal (- x y) (- y x))"


def test_parse_property_rejects_bad_shapes():
    for bad in [
        "(defproperty p (x :value (random-natural)))",  # no body
        "(defproperty p)",
        "(defproperty p (x (random-natural)) (natp x))",  # missing :value
        "(defproperty p (x :value (random-natural) x :value (random-natural))"
        " (natp x))",  # duplicate var
        "(defproperty p (x :value (random-natural)) (natp y))",  # free var
        "(defproperty p (x :value (random-widget)) (natp x))",
    ]:
        [form] = parse_source(bad)
        with pytest.raises(MalformedProperty):
            parse_property(form, bad)


def test_parse_properties_finds_only_defproperty():
    source = "(defun f (x) x)\n" + COMM + "\n(f 1)\n"
    specs = parse_properties(source)
    assert [s.name for s in specs] == ["comm-bad"]


# -- instantiation and running ---------------------------------------------

def test_instantiate_substitutes_quoted_values():
    spec = prop(COMM)
    text = instantiate(spec, {"x": 3, "y": 5})
    assert text == "(equal (- '3 '5) (- '5 '3))"


def test_instantiate_list_value():
    spec = prop(APPEND_LEN)
    text = instantiate(spec, {"a": (1, 2), "b": ()})
    assert "'(1 2)" in text and "'NIL" in text


def test_run_property_finds_counterexample():
    spec = prop(COMM)
    report = run_property(spec, 200, seed=0, backend=fake_backend())
    assert report.counterexample is not None
    x = report.counterexample["x"]
    y = report.counterexample["y"]
    assert x - y != y - x  # the counterexample really falsifies the body


def test_run_property_true_property_passes():
    report = run_property(prop(APPEND_LEN), 100, seed=5,
                          backend=fake_backend())
    assert report.counterexample is None
    assert report.passes == 100 and report.trials_run == 100


def test_run_property_deterministic_per_seed():
    spec = prop(COMM)
    r1 = run_property(spec, 200, seed=77, backend=fake_backend())
    r2 = run_property(spec, 200, seed=77, backend=fake_backend())
    assert r1 == r2
    assert format_report(spec, r1) == format_report(spec, r2)


def test_run_property_backend_error_reported():
    text = ("(defproperty broken (x :value (random-natural)) "
            "(equal (no-such-fn x) x))")
    report = run_property(prop(text), 10, seed=1, backend=fake_backend())
    assert report.error is not None
    assert report.counterexample is None


def test_format_report_lines():
    spec = prop(COMM)
    report = run_property(spec, 200, seed=3, backend=fake_backend())
    out = format_report(spec, report)
    assert out.startswith("comm-bad: FALSIFIED after ")
    assert "  x = " in out and "  y = " in out
    good = run_property(prop(APPEND_LEN), 20, seed=3,
                        backend=fake_backend())
    assert "passed 20/20 trials" in format_report(prop(APPEND_LEN), good)


# -- theorem translation ----------------------------------------------------

def test_to_theorem_two_hypotheses():
    assert to_theorem(prop(COMM)) == (
        "(defthm comm-bad (implies (and (natp x) (natp y)) "
        "(equal (- x y) (- y x))))")


def test_to_theorem_list_and_between_and_one_of():
    text = ("(defproperty p (xs :value (random-list-of (random-natural)) "
            "n :value (random-between 1 9) "
            "c :value (random-one-of 'a 'b)) "
            "(equal xs xs))")
    thm = to_theorem(prop(text))
    assert "(nat-listp xs)" in thm
    assert "(and (integerp n) (<= 1 n) (<= n 9))" in thm
    assert "(member-equal c '(A B))" in thm


def test_to_theorem_single_and_zero_hypotheses():
    one = prop("(defproperty q (x :value (random-natural)) (natp x))")
    assert to_theorem(one) == "(defthm q (implies (natp x) (natp x)))"
