"""The proof-bar engine: per-form status, admit/undo planning and execution.

The admitted forms are always a prefix of the form list; the proof line is
derived as the index of the first non-admitted form, never stored.  Undo
bookkeeping lives in a per-form ledger of world-changing event counts, so
undoing a form that admitted several events (a progn) rolls the backend
back by the right amount.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import ReadOnlyViolation
from .lex import BuiltinTable, default_table
from .sexp import TopLevelForm, parse_source


class ProofStatus(enum.Enum):
    UNADMITTED = "unadmitted"
    QUEUED = "queued"
    IN_PROGRESS = "in-progress"
    ADMITTED = "admitted"
    FAILED = "failed"


@dataclass
class FormState:
    form: TopLevelForm
    status: ProofStatus = ProofStatus.UNADMITTED
    events: int = 0  # world-changing events this form's admission produced
    raw_output: str = ""


@dataclass(frozen=True)
class AdmitThrough:
    indices: tuple[int, ...]


@dataclass(frozen=True)
class UndoThrough:
    indices: tuple[int, ...]


Plan = AdmitThrough | UndoThrough


@dataclass(frozen=True)
class Transition:
    index: int
    status: ProofStatus


class SessionState:
    def __init__(self, source: str, table: BuiltinTable | None = None):
        self.table = table if table is not None else default_table()
        self.source = source
        self.forms: list[FormState] = [
            FormState(f) for f in parse_source(source, self.table)]

    @property
    def proof_line(self) -> int:
        """Index of the first non-admitted form (derived, never stored)."""
        for i, fs in enumerate(self.forms):
            if fs.status is not ProofStatus.ADMITTED:
                return i
        return len(self.forms)

    @property
    def proof_line_offset(self) -> int:
        """Source offset just after the last admitted form."""
        line = self.proof_line
        return self.forms[line - 1].form.end if line > 0 else 0

    def statuses(self) -> list[ProofStatus]:
        return [fs.status for fs in self.forms]

    def form_text(self, index: int) -> str:
        form = self.forms[index].form
        return self.source[form.start:form.end]

    # -- editing ------------------------------------------------------------

    def _locked_span(self, start: int, end: int) -> bool:
        for fs in self.forms:
            if fs.status in (ProofStatus.ADMITTED, ProofStatus.QUEUED,
                             ProofStatus.IN_PROGRESS):
                if start < fs.form.end and end > fs.form.start:
                    return True
        return False

    def apply_edit(self, start: int, end: int, replacement: str):
        """Replace source[start:end]; rejects edits touching locked text."""
        if self._locked_span(start, end):
            raise ReadOnlyViolation(
                "cannot edit admitted or queued text")
        touched_failed = [i for i, fs in enumerate(self.forms)
                          if fs.status is ProofStatus.FAILED
                          and start < fs.form.end and end > fs.form.start]
        new_source = self.source[:start] + replacement + self.source[end:]
        self._reparse(new_source, reset_failed=touched_failed)
        return self

    def insert_at_proof_line(self, text: str,
                             after: int = 0) -> tuple[int, int]:
        """Insert an event moved from the REPL; returns its span.

        `after` floors the insertion point, so a batch of moved events
        keeps the order it was typed in instead of stacking in reverse.
        """
        offset = max(self.proof_line_offset, min(after, len(self.source)))
        lead = "" if offset == 0 else "\n"
        insertion = lead + text + "\n"
        new_source = (self.source[:offset] + insertion + self.source[offset:])
        self._reparse(new_source)
        start = offset + len(lead)
        return (start, start + len(text))

    def _reparse(self, new_source: str, reset_failed: list[int] | None = None):
        """Re-segment after an edit, carrying statuses over by position.

        The admitted prefix keeps its statuses and ledger counts; a failed
        form keeps its mark unless the edit touched it.
        """
        old = self.forms
        self.source = new_source
        parsed = parse_source(new_source, self.table)
        reset = set(reset_failed or [])
        new_forms: list[FormState] = []
        for i, form in enumerate(parsed):
            if i < len(old) and old[i].status is ProofStatus.ADMITTED:
                new_forms.append(FormState(form, ProofStatus.ADMITTED,
                                           old[i].events, old[i].raw_output))
            elif (i < len(old) and old[i].status is ProofStatus.FAILED
                  and i not in reset):
                new_forms.append(FormState(form, ProofStatus.FAILED,
                                           0, old[i].raw_output))
            else:
                new_forms.append(FormState(form))
        self.forms = new_forms


def on_edit(state: SessionState, start: int, end: int,
            replacement: str = "") -> SessionState:
    """Functional-style wrapper over SessionState.apply_edit."""
    return state.apply_edit(start, end, replacement)


def plan_click(state: SessionState, target: int) -> Plan:
    """Pure: the action a proof-bar click at `target` would take."""
    if not 0 <= target < len(state.forms):
        raise IndexError(f"no form at index {target}")
    if state.forms[target].status is ProofStatus.ADMITTED:
        last_admitted = state.proof_line - 1
        return UndoThrough(tuple(range(last_admitted, target - 1, -1)))
    return AdmitThrough(tuple(range(state.proof_line, target + 1)))


def hover_preview(state: SessionState, target: int) -> Plan:
    """Identical to plan_click; guaranteed side-effect free."""
    return plan_click(state, target)


def _world_counter(backend) -> int | None:
    return getattr(backend, "world_counter", None)


def execute_admit(state: SessionState, plan: AdmitThrough, backend):
    """Run an admit plan; yields Transitions as statuses change.

    Stops at the first failure; forms still queued revert to Unadmitted
    (the backend never saw them, so marking them failed would be false
    feedback).
    """
    if not isinstance(plan, AdmitThrough):
        raise TypeError("execute_admit requires an AdmitThrough plan")
    indices = list(plan.indices)
    if indices and indices[0] != state.proof_line:
        raise ValueError("admit plan must start at the proof line")
    for i in indices:
        state.forms[i].status = ProofStatus.QUEUED
        yield Transition(i, ProofStatus.QUEUED)
    for pos, i in enumerate(indices):
        fs = state.forms[i]
        fs.status = ProofStatus.IN_PROGRESS
        yield Transition(i, ProofStatus.IN_PROGRESS)
        before = _world_counter(backend)
        submission = backend.submit(state.form_text(i))
        fs.raw_output = submission.result
        after = _world_counter(backend)
        if submission.outcome == "success":
            if before is not None and after is not None:
                fs.events = after - before
            else:
                fs.events = 1 if fs.form.kind == "event" else 0
            fs.status = ProofStatus.ADMITTED
            yield Transition(i, ProofStatus.ADMITTED)
        else:
            fs.status = ProofStatus.FAILED
            yield Transition(i, ProofStatus.FAILED)
            for j in indices[pos + 1:]:
                state.forms[j].status = ProofStatus.UNADMITTED
                yield Transition(j, ProofStatus.UNADMITTED)
            return


def execute_undo(state: SessionState, plan: UndoThrough, backend):
    """Run an undo plan; targeted forms become editable again."""
    if not isinstance(plan, UndoThrough):
        raise TypeError("execute_undo requires an UndoThrough plan")
    indices = list(plan.indices)
    if indices and indices[0] != state.proof_line - 1:
        raise ValueError("undo plan must start at the last admitted form")
    total = sum(state.forms[i].events for i in indices)
    if total > 0:
        backend.undo_through(total)
    for i in indices:
        state.forms[i].status = ProofStatus.UNADMITTED
        state.forms[i].events = 0
        yield Transition(i, ProofStatus.UNADMITTED)


def replay(state: SessionState, backend) -> list[Transition]:
    """Restore a restarted backend by re-admitting the admitted prefix.

    Used after a timeout poisoned the handle or the process crashed.
    """
    backend.restart()
    admitted = [i for i, fs in enumerate(state.forms)
                if fs.status is ProofStatus.ADMITTED]
    transitions: list[Transition] = []
    for i in admitted:
        fs = state.forms[i]
        before = _world_counter(backend)
        submission = backend.submit(state.form_text(i))
        fs.raw_output = submission.result
        after = _world_counter(backend)
        if submission.outcome == "success":
            if before is not None and after is not None:
                fs.events = after - before
            transitions.append(Transition(i, ProofStatus.ADMITTED))
        else:
            fs.status = ProofStatus.FAILED
            transitions.append(Transition(i, ProofStatus.FAILED))
            for j in range(i + 1, len(state.forms)):
                if state.forms[j].status is ProofStatus.ADMITTED:
                    state.forms[j].status = ProofStatus.UNADMITTED
                    transitions.append(
                        Transition(j, ProofStatus.UNADMITTED))
            break
    return transitions


def check_invariants(state: SessionState):
    """Assert the structural session invariants; used by tests."""
    line = state.proof_line
    statuses = state.statuses()
    assert all(s is ProofStatus.ADMITTED for s in statuses[:line])
    assert all(s is not ProofStatus.ADMITTED for s in statuses[line:])
    assert sum(s is ProofStatus.IN_PROGRESS for s in statuses) <= 1
    queued = [i for i, s in enumerate(statuses) if s is ProofStatus.QUEUED]
    if queued:
        assert queued == list(range(queued[0], queued[0] + len(queued)))
        assert queued[0] >= line
