from hypothesis import given, strategies as st

from proofpad.output import (FAILED_BANNER, parse_output, scan_failure,
                             summarize_raw)


def test_scan_failure_banner_and_error_line():
    assert scan_failure("foo\n" + FAILED_BANNER + "\n")
    assert scan_failure("ACL2 Error in ( DEFTHM X ...):  no.\n")
    assert not scan_failure("Q.E.D.\n\nSummary\nForm:  ( DEFTHM X ...)\n")
    # An error mentioned mid-line is not a failure marker.
    assert not scan_failure("the string ACL2 Error appears here\n")


def test_clean_defun_transcript(clean_defun_transcript):
    summary = summarize_raw(clean_defun_transcript)
    assert summary.overall == "success"
    severities = [m.severity for m in summary.items]
    assert "success" in severities
    assert "error" not in severities
    [acc] = [m for m in summary.items if m.severity == "success"]
    assert acc.headline == "Accepted ( DEFUN APP ...)"


def test_include_book_transcript_messages(include_book_transcript):
    summary = summarize_raw(include_book_transcript)
    assert summary.overall == "failure"
    assert [m.severity for m in summary.items] == [
        "error", "error", "error", "warning", "info"]
    headlines = [m.headline for m in summary.items]
    assert ("The book could not be found at "
            "/Users/calebegg/Code/book.lisp") in headlines
    assert "Proof attempt failed" in headlines
    assert "See :DOC failure." in headlines
    assert headlines[3] == "Unable to load compiled file for this book"


def test_summary_paragraph_demoted_to_info_on_failure(
        include_book_transcript):
    summary = summarize_raw(include_book_transcript)
    infos = [m for m in summary.items if m.severity == "info"]
    assert len(infos) == 1
    assert infos[0].headline.startswith("Accepted ( INCLUDE-BOOK")


def test_raw_ranges_index_original_text(include_book_transcript):
    raw = include_book_transcript
    for msg in parse_output(raw):
        assert raw[msg.raw_start:msg.raw_end] == msg.detail
        assert msg.detail.strip() == msg.detail


def test_severity_sort_is_stable():
    raw = ("ACL2 Warning [One] in ( DEFUN F ...):  first warning.\n"
           "\n"
           "ACL2 Warning [Two] in ( DEFUN F ...):  second warning.\n")
    items = summarize_raw(raw).items
    assert [m.severity for m in items] == ["warning", "warning"]
    assert "first" in items[0].headline
    assert "second" in items[1].headline


def test_headline_flattens_hard_wrapping():
    raw = ("ACL2 Error in ( DEFTHM T2 ...):  The proof of the formula NIL "
           "has\nfailed.\n")
    [msg] = parse_output(raw)
    assert msg.headline == "The proof of the formula NIL has failed."
    assert "\n" not in msg.headline


def test_plain_output_is_info():
    [msg] = parse_output("3\n")
    assert msg.severity == "info"
    assert msg.headline == "3"


def test_raw_retained_verbatim(include_book_transcript):
    assert summarize_raw(include_book_transcript).raw == (
        include_book_transcript)


@given(st.text(max_size=400))
def test_parse_output_total_and_ranges_ordered(raw):
    msgs = parse_output(raw)
    prev_end = 0
    ordered = sorted(msgs, key=lambda m: m.raw_start)
    for m in ordered:
        assert 0 <= m.raw_start <= m.raw_end <= len(raw)
        assert m.raw_start >= prev_end
        prev_end = m.raw_end
        assert m.severity in {"error", "warning", "success", "info"}


@given(st.text(max_size=400))
def test_summarize_sorted_by_severity(raw):
    rank = {"error": 0, "warning": 1, "success": 2, "info": 3}
    items = summarize_raw(raw).items
    assert [rank[m.severity] for m in items] == sorted(
        rank[m.severity] for m in items)
