from hypothesis import given, strategies as st

from proofpad.sexp import SexpAtom, SexpList, form_at, parse_source


def test_single_defun_form():
    [form] = parse_source("(defun f (x) x)")
    assert form.kind == "event"
    assert form.head == "defun"
    assert form.complete
    assert isinstance(form.tree, SexpList)
    assert form.tree.items[0].text == "defun"


def test_expression_form_kind():
    [form] = parse_source("(+ 1 2)")
    assert form.kind == "expression"
    assert form.head == "+"


def test_atom_form():
    [form] = parse_source("42")
    assert form.kind == "expression"
    assert form.head == ""
    assert isinstance(form.tree, SexpAtom)


def test_unknown_def_head_treated_as_event():
    [form] = parse_source("(defwidget w 3)")
    assert form.kind == "event"


def test_multiple_forms_with_spans():
    source = "(defun f (x) x)\n(f 3)\n"
    fs = parse_source(source)
    assert len(fs) == 2
    assert source[fs[0].start:fs[0].end] == "(defun f (x) x)"
    assert source[fs[1].start:fs[1].end] == "(f 3)"


def test_incomplete_form_flagged_not_raised():
    [form] = parse_source("(defun f (x)")
    assert not form.complete


def test_dangling_close_paren_is_incomplete_stub():
    fs = parse_source(") (f 1)")
    assert len(fs) == 2
    assert not fs[0].complete
    assert fs[1].complete


def test_quote_sugar_wraps_node():
    [form] = parse_source("'(a b)")
    assert form.complete
    assert isinstance(form.tree, SexpList)
    assert form.tree.items[0].text == "'"


def test_comments_do_not_split_forms():
    source = "(defun f (x) ; body next\n  x)"
    fs = parse_source(source)
    assert len(fs) == 1
    assert fs[0].complete


def test_form_at_lookup():
    source = "(defun f (x) x) (f 3)"
    fs = parse_source(source)
    assert form_at(fs, 2) == 0
    assert form_at(fs, 17) == 1
    # Offset in the gap between forms belongs to no form.
    assert form_at(fs, 15) is None


def test_string_and_char_atoms_survive():
    [form] = parse_source('(list #\\a "hi")')
    items = form.tree.items
    assert items[1].text == "#\\a"
    assert items[2].text == '"hi"'


def test_nested_list_structure():
    [form] = parse_source("(defun f (x y) (+ x y))")
    params = form.tree.items[2]
    assert isinstance(params, SexpList)
    assert [a.text for a in params.items] == ["x", "y"]


@given(st.text(max_size=200))
def test_parser_never_raises_and_spans_ordered(source):
    fs = parse_source(source)
    last_end = 0
    for f in fs:
        assert 0 <= f.start <= f.end <= len(source)
        assert f.start >= last_end
        last_end = f.end


@given(st.recursive(
    st.sampled_from(["x", "1", "nil", "foo"]),
    lambda inner: st.lists(inner, max_size=4).map(
        lambda xs: "(" + " ".join(xs) + ")"),
    max_leaves=20))
def test_balanced_inputs_parse_complete(text):
    for f in parse_source(text):
        assert f.complete
