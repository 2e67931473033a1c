import json
import socket
import threading

import pytest

from conftest import fixture_path
from proofpad.api import ServiceCore, serve
from proofpad.backend import fake_backend

SOURCE = "(defun f (x) x)\n(defun g (x) (f x))\n(defthm bad nil)\n"


class Client:
    """Drives a ServiceCore directly, collecting broadcast events."""

    def __init__(self, lint_debounce=0.05):
        self.core = ServiceCore(fake_backend, lint_debounce=lint_debounce)
        self.controller = None
        self.events = []
        self._next_id = 1

    def send_event(self, event):
        self.events.append(event)

    def request(self, kind, **fields):
        message = {"id": self._next_id, "kind": kind, **fields}
        self._next_id += 1
        reply, self.controller = self.core.handle_request(
            self.controller, message, self.send_event)
        return reply

    def events_of(self, kind):
        return [e for e in self.events if e["kind"] == kind]


@pytest.fixture
def doc(tmp_path):
    path = str(tmp_path / "doc.lisp")
    with open(path, "w") as f:
        f.write(SOURCE)
    return path


@pytest.fixture
def client(doc):
    c = Client()
    reply = c.request("open", path=doc)
    assert reply["ok"]
    return c


def test_open_sends_snapshot(client, doc):
    [snap] = client.events_of("snapshot")
    assert snap["path"] == doc
    assert snap["text"] == SOURCE
    assert [f["status"] for f in snap["forms"]] == ["unadmitted"] * 3
    assert snap["proofLine"] == 0


def test_open_with_auto_admit(doc):
    c = Client()
    reply = c.request("open", path=doc, autoAdmit=True)
    assert reply["ok"]
    assert [s.value for s in c.controller.session.statuses()] == [
        "admitted", "admitted", "failed"]
    assert any(e["kind"] == "status-changed" for e in c.events)


def test_open_default_does_not_auto_admit(client):
    assert [s.value for s in client.controller.session.statuses()] == [
        "unadmitted"] * 3


def test_requests_before_open_rejected(doc):
    c = Client()
    reply = c.request("lint")
    assert reply["kind"] == "error" and reply["code"] == "no-document"


def test_second_client_rejected(doc, client):
    other = Client()
    other.core = client.core
    reply = other.request("open", path=doc)
    assert reply["kind"] == "error"
    assert reply["code"] == "read-only-violation"


def test_admit_through_streams_statuses(client):
    reply = client.request("admit-through", index=1)
    assert reply["statuses"] == ["admitted", "admitted", "unadmitted"]
    stream = [(e["index"], e["status"])
              for e in client.events_of("status-changed")]
    assert stream == [(0, "queued"), (1, "queued"),
                      (0, "in-progress"), (0, "admitted"),
                      (1, "in-progress"), (1, "admitted")]


def test_admit_failure_reported_in_stream(client):
    client.request("admit-through", index=2)
    stream = [e["status"] for e in client.events_of("status-changed")]
    assert stream[-1] == "failed"


def test_wrong_plan_kind_is_error(client):
    client.request("admit-through", index=0)
    reply = client.request("admit-through", index=0)
    assert reply["code"] == "wrong-plan"
    reply = client.request("undo-through", index=2)
    assert reply["code"] == "wrong-plan"


def test_undo_through(client):
    client.request("admit-through", index=1)
    client.events.clear()
    reply = client.request("undo-through", index=0)
    assert reply["statuses"] == ["unadmitted"] * 3
    stream = [(e["index"], e["status"])
              for e in client.events_of("status-changed")]
    assert stream == [(1, "unadmitted"), (0, "unadmitted")]


def test_hover_preview_returns_plan_without_mutation(client):
    reply = client.request("hover-preview", index=2)
    assert reply["plan"] == {"action": "admit", "indices": [0, 1, 2]}
    client.request("admit-through", index=1)
    reply = client.request("hover-preview", index=0)
    assert reply["plan"] == {"action": "undo", "indices": [1, 0]}
    assert client.controller.session.statuses()[0].value == "admitted"


def test_edit_admitted_region_rejected_and_rolled_back(client):
    client.request("admit-through", index=0)
    before = client.controller.session.source
    reply = client.request("edit", start=1, end=6, text="DEFUN")
    assert reply["code"] == "read-only-violation"
    assert client.controller.session.source == before
    assert client.controller.document.text == before


def test_edit_emits_document_changed_and_debounced_lint(client):
    reply = client.request("edit", start=len(SOURCE), end=len(SOURCE),
                           text="(defun h (y) y)\n")
    assert reply["ok"]
    [changed] = client.events_of("document-changed")
    assert changed["text"].endswith("(defun h (y) y)\n")
    assert client.events_of("diagnostics") == []  # debounce pending
    timer = client.controller._lint_timer
    assert timer is not None
    timer.join(2)
    assert len(client.events_of("diagnostics")) == 1


def test_repl_submit_expression(client):
    reply = client.request("repl-submit", text="(+ 1 2)")
    [result] = reply["results"]
    assert result["type"] == "evaluated"
    [event] = client.events_of("repl-result")
    assert event["summary"]["overall"] == "success"
    sid = result["summaryId"]
    raw = client.request("get-raw-output", summaryId=sid)
    assert "3" in raw["raw"]


def test_repl_submit_event_moves_into_document(client):
    reply = client.request("repl-submit", text="(defun k (x) x)")
    [result] = reply["results"]
    assert result["type"] == "moved"
    start, end = result["span"]
    assert client.controller.session.source[start:end] == "(defun k (x) x)"
    assert any(e["kind"] == "document-changed" for e in client.events)
    assert client.controller.backend.submission_log == []


def test_repl_incomplete_form_error(client):
    reply = client.request("repl-submit", text="(defun k (x)")
    assert reply["code"] == "incomplete-form"


def test_run_property(client, tmp_path):
    path = str(tmp_path / "prop.lisp")
    with open(path, "w") as f:
        f.write("(defproperty comm (x :value (random-natural)"
                " y :value (random-natural))"
                " (equal (- x y) (- y x)))\n")
    c = Client()
    c.request("open", path=path)
    reply = c.request("run-property", trials=200, seed=0)
    [report] = reply["reports"]
    assert report["name"] == "comm"
    assert report["counterexample"] is not None


def test_lint_request_is_eager(client):
    reply = client.request("lint")
    assert reply["items"] == []
    assert len(client.events_of("diagnostics")) == 1


def test_indent_request(client):
    client.request("edit", start=len(SOURCE), end=len(SOURCE),
                   text="(defun m (y)\ny)\n")
    reply = client.request("indent")
    assert "(defun m (y)\n  y)" in reply["text"]


def test_unknown_kind_and_missing_field(client):
    assert client.request("frobnicate")["code"] == "unknown-kind"
    assert client.request("edit", start=0)["code"] == "malformed-request"
    assert client.request("get-raw-output",
                          summaryId=999)["code"] == "unknown-summary"


def test_indent_rejected_for_proofpad_documents():
    c = Client()
    c.request("open", path=fixture_path("sum_exercise.proofpad"))
    reply = c.request("indent")
    assert reply["kind"] == "error" and reply["code"] == "request-failed"


def test_proofpad_readonly_region_edit_rejected():
    c = Client()
    c.request("open", path=fixture_path("sum_exercise.proofpad"))
    reply = c.request("edit", start=0, end=1, text="x")
    assert reply["code"] == "read-only-violation"


# -- end-to-end over a real socket ------------------------------------------

def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def test_websocket_round_trip(doc):
    from websockets.sync.client import connect

    port = free_port()
    server = serve(port=port)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        with connect(f"ws://127.0.0.1:{port}") as ws:
            hello = json.loads(ws.recv())
            assert hello["kind"] == "snapshot" and hello["path"] is None
            ws.send(json.dumps({"id": 1, "kind": "open", "path": doc}))
            snap = json.loads(ws.recv())
            assert snap["kind"] == "snapshot" and snap["text"] == SOURCE
            reply = json.loads(ws.recv())
            assert reply == {"id": 1, "kind": "reply", "ok": True}
            ws.send(json.dumps({"id": 2, "kind": "admit-through", "index": 0}))
            messages = [json.loads(ws.recv()) for _ in range(4)]
            kinds = [m["kind"] for m in messages]
            assert kinds == ["status-changed"] * 3 + ["reply"]
            assert messages[-1]["statuses"][0] == "admitted"
    finally:
        server.shutdown()
        thread.join(5)
