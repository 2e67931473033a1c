"""Local IDE service: JSON messages over a WebSocket, one document per
connection.

Every request carries an ``id`` echoed in its reply; broadcast events
(status-changed, diagnostics, repl-result, summary, document-changed)
carry no id and arrive in the session's internal transition order.  The
full schema is documented in docs/protocol.md.

Non-upgrade HTTP requests serve the bundled UI's static assets, so a
browser can load the frontend from the same port it connects to.
"""
from __future__ import annotations

import http
import json
import mimetypes
import os
import threading

from . import docmodel, doublecheck, repl as repl_mod
from .errors import (IncompleteForm, MalformedProofpad, MalformedProperty,
                     ProofPadError, ReadOnlyViolation)
from .indent import reindent
from .lint import lint_source
from .output import Summary
from .session import (AdmitThrough, SessionState, UndoThrough, execute_admit,
                      execute_undo, hover_preview, plan_click)

DEFAULT_PORT = 9640


def _summary_json(summary: Summary, summary_id: int) -> dict:
    return {
        "summaryId": summary_id,
        "overall": summary.overall,
        "items": [{
            "severity": m.severity,
            "headline": m.headline,
            "detail": m.detail,
            "rawRange": [m.raw_start, m.raw_end],
        } for m in summary.items],
    }


def _diagnostic_json(diag) -> dict:
    return {"start": diag.start, "end": diag.end, "severity": diag.severity,
            "code": diag.code, "message": diag.message}


class DocumentController:
    """All state mutation for one open document, serialized by one lock."""

    def __init__(self, path: str, backend, lint_debounce: float):
        self.path = path
        self.backend = backend
        self.lint_debounce = lint_debounce
        self.document = docmodel.load(path)
        self.session = SessionState(self.document.text)
        self.summaries: dict[int, Summary] = {}
        self._next_summary = 1
        self._lint_timer: threading.Timer | None = None
        self.lock = threading.Lock()

    def close(self):
        if self._lint_timer is not None:
            self._lint_timer.cancel()

    def store_summary(self, summary: Summary) -> int:
        sid = self._next_summary
        self._next_summary += 1
        self.summaries[sid] = summary
        return sid

    def snapshot(self) -> dict:
        return {
            "kind": "snapshot",
            "path": self.path,
            "text": self.session.source,
            "regions": [{"start": r.start, "end": r.end, "access": r.access}
                        for r in self.document.regions],
            "forms": [{
                "start": fs.form.start, "end": fs.form.end,
                "head": fs.form.head, "formKind": fs.form.kind,
                "status": fs.status.value,
            } for fs in self.session.forms],
            "proofLine": self.session.proof_line,
        }

    def schedule_lint(self, send):
        """Debounced lint after an edit; an explicit request is eager."""
        if self._lint_timer is not None:
            self._lint_timer.cancel()

        def fire():
            with self.lock:
                diags = lint_source(self.session.source)
            send({"kind": "diagnostics",
                  "items": [_diagnostic_json(d) for d in diags]})

        self._lint_timer = threading.Timer(self.lint_debounce, fire)
        self._lint_timer.daemon = True
        self._lint_timer.start()


class ServiceCore:
    """Transport-independent request handling; one controller per document."""

    def __init__(self, backend_factory, lint_debounce: float = 2.0):
        self.backend_factory = backend_factory
        self.lint_debounce = lint_debounce
        self._open_docs: dict[str, DocumentController] = {}
        self._registry_lock = threading.Lock()

    # -- connection lifecycle ----------------------------------------------

    def connect(self) -> dict:
        return {"kind": "snapshot", "path": None, "text": "", "regions": [],
                "forms": [], "proofLine": 0}

    def open_document(self, path: str) -> DocumentController:
        with self._registry_lock:
            if path in self._open_docs:
                raise ReadOnlyViolation(
                    f"document {path} is already open in another client")
            controller = DocumentController(
                path, self.backend_factory(), self.lint_debounce)
            self._open_docs[path] = controller
            return controller

    def release(self, controller: DocumentController | None):
        if controller is None:
            return
        controller.close()
        with self._registry_lock:
            self._open_docs.pop(controller.path, None)

    # -- request dispatch ---------------------------------------------------

    def handle_request(self, controller: DocumentController | None,
                       message: dict, send) -> tuple[dict, DocumentController | None]:
        """Process one request; `send` delivers broadcast events.

        Returns (reply, controller) since `open` swaps the controller in.
        """
        request_id = message.get("id")
        kind = message.get("kind")
        try:
            if kind == "open":
                controller = self.open_document(message["path"])
                send(controller.snapshot())
                if message.get("autoAdmit") and controller.session.forms:
                    # Opt-in: admit the whole document on open.
                    with controller.lock:
                        plan = plan_click(controller.session,
                                          len(controller.session.forms) - 1)
                        for transition in execute_admit(
                                controller.session, plan,
                                controller.backend):
                            send({"kind": "status-changed",
                                  "index": transition.index,
                                  "status": transition.status.value})
                return ({"id": request_id, "kind": "reply", "ok": True},
                        controller)
            if controller is None:
                return (self._error(request_id, "no-document",
                                    "open a document first"), controller)
            with controller.lock:
                reply = self._dispatch(controller, kind, message, send)
            return (reply, controller)
        except KeyError as exc:
            return (self._error(request_id, "malformed-request",
                                f"missing field {exc}"), controller)
        except ReadOnlyViolation as exc:
            return (self._error(request_id, "read-only-violation", str(exc)),
                    controller)
        except MalformedProperty as exc:
            return (self._error(request_id, "malformed-property", str(exc)),
                    controller)
        except MalformedProofpad as exc:
            return (self._error(request_id, "malformed-proofpad", str(exc)),
                    controller)
        except IncompleteForm as exc:
            return (self._error(request_id, "incomplete-form", str(exc)),
                    controller)
        except (ProofPadError, OSError, ValueError, IndexError) as exc:
            return (self._error(request_id, "request-failed", str(exc)),
                    controller)

    @staticmethod
    def _error(request_id, code: str, message: str) -> dict:
        return {"id": request_id, "kind": "error", "code": code,
                "message": message}

    def _dispatch(self, ctl: DocumentController, kind: str, message: dict,
                  send) -> dict:
        request_id = message.get("id")
        ok = {"id": request_id, "kind": "reply", "ok": True}

        if kind == "edit":
            start, end = message["start"], message["end"]
            text = message["text"]
            # Region locks first, then admitted-span locks.
            ctl.document = docmodel.apply_edit(ctl.document, start, end, text)
            try:
                ctl.session.apply_edit(start, end, text)
            except ReadOnlyViolation:
                # roll the document back so the two stay in sync
                ctl.document = docmodel.apply_edit(
                    ctl.document, start, start + len(text),
                    ctl.session.source[start:end])
                raise
            send({"kind": "document-changed", "text": ctl.session.source})
            ctl.schedule_lint(send)
            return ok

        if kind in ("admit-through", "undo-through"):
            plan = plan_click(ctl.session, message["index"])
            wanted = AdmitThrough if kind == "admit-through" else UndoThrough
            if not isinstance(plan, wanted):
                return self._error(request_id, "wrong-plan",
                                   f"a click there would not {kind}")
            runner = (execute_admit if kind == "admit-through"
                      else execute_undo)
            for transition in runner(ctl.session, plan, ctl.backend):
                send({"kind": "status-changed", "index": transition.index,
                      "status": transition.status.value})
            ok["statuses"] = [s.value for s in ctl.session.statuses()]
            return ok

        if kind == "hover-preview":
            plan = hover_preview(ctl.session, message["index"])
            ok["plan"] = {
                "action": ("admit" if isinstance(plan, AdmitThrough)
                           else "undo"),
                "indices": list(plan.indices),
            }
            return ok

        if kind == "repl-submit":
            results = []
            text = message["text"]
            for result in repl_mod.submit_input(text, ctl.session,
                                                ctl.backend):
                if isinstance(result, repl_mod.Moved):
                    span = result.span
                    results.append({"type": "moved",
                                    "span": [span[0], span[1]]})
                    send({"kind": "document-changed",
                          "text": ctl.session.source})
                else:
                    sid = ctl.store_summary(result.summary)
                    payload = _summary_json(result.summary, sid)
                    results.append({"type": "evaluated", "summaryId": sid})
                    send({"kind": "repl-result", "summary": payload})
            self._sync_document(ctl)
            ok["results"] = results
            return ok

        if kind == "run-property":
            trials = message.get("trials", 100)
            seed = message.get("seed", 0)
            wanted_name = message.get("name")
            reports = []
            for spec in doublecheck.parse_properties(ctl.session.source):
                if wanted_name and spec.name != wanted_name.lower():
                    continue
                report = doublecheck.run_property(spec, trials, seed,
                                                  ctl.backend)
                reports.append({
                    "name": spec.name,
                    "trialsRun": report.trials_run,
                    "passes": report.passes,
                    "counterexample": None if report.counterexample is None
                    else {k: doublecheck.format_value(v)
                          for k, v in report.counterexample.items()},
                    "error": report.error,
                    "text": doublecheck.format_report(spec, report),
                })
            ok["reports"] = reports
            return ok

        if kind == "lint":
            diags = lint_source(ctl.session.source)
            items = [_diagnostic_json(d) for d in diags]
            send({"kind": "diagnostics", "items": items})
            ok["items"] = items
            return ok

        if kind == "indent":
            if ctl.document.origin != "plain":
                return self._error(request_id, "request-failed",
                                   "indent only supports plain documents")
            region = tuple(message["region"]) if "region" in message else None
            new_text = reindent(ctl.session.source, region)
            if new_text != ctl.session.source:
                ctl.session._reparse(new_text)
                ctl.document = docmodel.plain_document(new_text)
                send({"kind": "document-changed", "text": new_text})
            ok["text"] = new_text
            return ok

        if kind == "get-raw-output":
            summary = ctl.summaries.get(message["summaryId"])
            if summary is None:
                return self._error(request_id, "unknown-summary",
                                   "no such summary id")
            ok["raw"] = summary.raw
            return ok

        return self._error(request_id, "unknown-kind",
                           f"unknown request kind {kind!r}")

    @staticmethod
    def _sync_document(ctl: DocumentController):
        """After REPL moves, regrow the document around the session text."""
        if ctl.document.text != ctl.session.source:
            if ctl.document.origin == "plain":
                ctl.document = docmodel.plain_document(ctl.session.source)


def serve(port: int = DEFAULT_PORT, backend_factory=None,
          host: str = "127.0.0.1", static_dir: str | None = None,
          lint_debounce: float = 2.0):
    """Start the WebSocket service; returns the running server object.

    Call ``serve_forever()`` on the result to block, ``shutdown()`` to
    stop.  Raises OSError when the port is in use.
    """
    from websockets.sync.server import serve as ws_serve

    if backend_factory is None:
        from .backend import fake_backend
        backend_factory = fake_backend
    core = ServiceCore(backend_factory, lint_debounce=lint_debounce)

    def process_request(connection, request):
        if "Upgrade" in request.headers.get("Connection", "") \
                or request.headers.get("Upgrade"):
            return None
        return _serve_static(connection, request, static_dir)

    def handler(connection):
        send_lock = threading.Lock()

        def send(event: dict):
            with send_lock:
                connection.send(json.dumps(event))

        controller = None
        try:
            send(core.connect())
            for raw in connection:
                try:
                    message = json.loads(raw)
                except json.JSONDecodeError:
                    send({"id": None, "kind": "error",
                          "code": "malformed-request",
                          "message": "not valid JSON"})
                    continue
                reply, controller = core.handle_request(controller, message,
                                                        send)
                send(reply)
        finally:
            core.release(controller)

    server = ws_serve(handler, host, port, process_request=process_request)
    return server


def _serve_static(connection, request, static_dir: str | None):
    from websockets.datastructures import Headers
    from websockets.http11 import Response

    if static_dir is None:
        return connection.respond(http.HTTPStatus.NOT_FOUND,
                                  "no static assets configured\n")
    path = request.path.split("?", 1)[0]
    if path == "/":
        path = "/index.html"
    full = os.path.realpath(os.path.join(static_dir, path.lstrip("/")))
    root = os.path.realpath(static_dir)
    if not full.startswith(root + os.sep) or not os.path.isfile(full):
        return connection.respond(http.HTTPStatus.NOT_FOUND, "not found\n")
    ctype = mimetypes.guess_type(full)[0] or "application/octet-stream"
    with open(full, "rb") as f:
        body = f.read()
    headers = Headers([("Content-Type", ctype),
                       ("Content-Length", str(len(body)))])
    return Response(200, "OK", headers, body)
