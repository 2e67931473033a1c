"""Read-eval-print semantics with event routing.

Events typed at the prompt are moved into the document at the proof line
without ever reaching the backend; expressions are evaluated in the
current world and come back as summaries carrying the full raw output.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import IncompleteForm
from .output import Summary, summarize_raw
from .session import SessionState
from .sexp import TopLevelForm


@dataclass(frozen=True)
class Moved:
    span: tuple[int, int]


@dataclass(frozen=True)
class Evaluated:
    summary: Summary


ReplResult = Moved | Evaluated


def classify_input(form: TopLevelForm) -> str:
    """"event" or "expression"; incomplete forms need more input."""
    if not form.complete:
        raise IncompleteForm("form has unbalanced parentheses")
    return form.kind


def route(form: TopLevelForm, session: SessionState, backend,
          source: str | None = None, after: int = 0) -> ReplResult:
    """Dispatch one complete REPL form.

    `source` is the text the form was parsed from; defaults to the
    session source (forms pasted at the prompt carry their own text).
    `after` floors the insertion point for moved events.
    """
    kind = classify_input(form)
    text = (source if source is not None else session.source)
    form_text = text[form.start:form.end]
    if kind == "event":
        span = session.insert_at_proof_line(form_text, after=after)
        return Moved(span)
    submission = backend.submit(form_text)
    return Evaluated(summarize_raw(submission.result))


def submit_input(text: str, session: SessionState, backend) -> list[ReplResult]:
    """Process multi-form REPL input left to right.

    A classification error (an incomplete trailing form) stops processing
    of the remainder; results for earlier forms are kept.
    """
    from .sexp import parse_source
    results: list[ReplResult] = []
    cursor = 0
    for form in parse_source(text, session.table):
        if not form.complete:
            raise IncompleteForm("form has unbalanced parentheses")
        result = route(form, session, backend, source=text, after=cursor)
        if isinstance(result, Moved):
            cursor = result.span[1] + 1  # past the inserted trailing newline
        results.append(result)
    return results
