import pytest
from hypothesis import given, strategies as st

from conftest import fixture_path, read_fixture
from proofpad.docmodel import (HEADER, RO_BEGIN, RO_END, apply_edit,
                               load, parse_proofpad, plain_document, render,
                               save, writable_region)
from proofpad.errors import MalformedProofpad, ReadOnlyViolation

SIMPLE = (f"{HEADER}\n{RO_BEGIN}\n(defun locked (x) x)\n{RO_END}\n"
          "(defun free (x) x)\n")


def test_parse_simple_regions():
    doc = parse_proofpad(SIMPLE)
    assert doc.text == "(defun locked (x) x)\n(defun free (x) x)\n"
    assert [r.access for r in doc.regions] == ["read-only", "read-write"]
    doc.check_invariants()


def test_text_excludes_header_and_markers():
    doc = parse_proofpad(SIMPLE)
    assert "proofpad" not in doc.text


def test_round_trip_simple():
    assert render(parse_proofpad(SIMPLE)) == SIMPLE


def test_round_trip_fixture():
    raw = read_fixture("sum_exercise.proofpad")
    assert render(parse_proofpad(raw)) == raw


def test_empty_file_has_no_regions():
    doc = parse_proofpad(read_fixture("empty.proofpad"))
    assert doc.text == ""
    assert doc.regions == ()


def test_missing_header_rejected():
    with pytest.raises(MalformedProofpad):
        parse_proofpad("(defun f (x) x)\n")


def test_nested_and_unterminated_markers_rejected():
    with pytest.raises(MalformedProofpad):
        parse_proofpad(f"{HEADER}\n{RO_BEGIN}\n{RO_BEGIN}\nx\n{RO_END}\n")
    with pytest.raises(MalformedProofpad):
        parse_proofpad(f"{HEADER}\n{RO_BEGIN}\nx\n")
    with pytest.raises(MalformedProofpad):
        parse_proofpad(f"{HEADER}\nx\n{RO_END}\n")


def test_marker_must_be_whole_line():
    doc = parse_proofpad(f"{HEADER}\n; note {RO_BEGIN}\nx\n")
    assert [r.access for r in doc.regions] == ["read-write"]


def test_plain_document_single_region():
    doc = plain_document("hello")
    assert doc.regions == (writable_region(doc, 0, 5),)
    assert render(doc) == "hello"


def test_apply_edit_in_writable_region():
    doc = parse_proofpad(SIMPLE)
    rw = doc.regions[1]
    out = apply_edit(doc, rw.start, rw.start, ";; note\n")
    assert out.text.endswith(";; note\n(defun free (x) x)\n")
    out.check_invariants()
    assert out.regions[0] == doc.regions[0]


def test_apply_edit_in_readonly_rejected():
    doc = parse_proofpad(SIMPLE)
    with pytest.raises(ReadOnlyViolation):
        apply_edit(doc, 0, 5, "xxxxx")
    # Straddling the boundary is rejected too.
    rw = doc.regions[1]
    with pytest.raises(ReadOnlyViolation):
        apply_edit(doc, rw.start - 1, rw.start + 1, "")


def test_apply_edit_shifts_later_regions():
    raw = (f"{HEADER}\nfree1\n{RO_BEGIN}\nlocked\n{RO_END}\nfree2\n")
    doc = parse_proofpad(raw)
    out = apply_edit(doc, 0, 0, "ADD ")
    assert [r.access for r in out.regions] == [
        "read-only" if r.access == "read-only" else r.access
        for r in doc.regions]
    assert out.text.startswith("ADD free1\n")
    assert out.text[out.regions[1].start:out.regions[1].end] == "locked\n"
    out.check_invariants()


def test_load_and_save_round_trip(tmp_path):
    path = str(tmp_path / "ex.proofpad")
    with open(fixture_path("sum_exercise.proofpad")) as f:
        raw = f.read()
    doc = parse_proofpad(raw)
    save(doc, path)
    again = load(path)
    assert again == doc


def test_load_plain_file(tmp_path):
    path = str(tmp_path / "f.lisp")
    with open(path, "w") as f:
        f.write("(defun f (x) x)\n")
    doc = load(path)
    assert doc.origin == "plain"
    assert doc.regions[0].access == "read-write"


@given(st.lists(st.tuples(st.sampled_from(["read-only", "read-write"]),
                          st.text(alphabet="ab\n", min_size=1, max_size=8)),
                max_size=6))
def test_render_parse_round_trip(segments):
    # Build a well-formed file from arbitrary alternating segments.
    parts = [HEADER + "\n"]
    for access, content in segments:
        if not content.endswith("\n"):
            content += "\n"
        if access == "read-only":
            parts.append(RO_BEGIN + "\n" + content + RO_END + "\n")
        else:
            parts.append(content)
    raw = "".join(parts)
    doc = parse_proofpad(raw)
    doc.check_invariants()
    assert parse_proofpad(render(doc)) == doc
