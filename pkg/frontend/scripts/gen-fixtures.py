"""Regenerate test/fixtures/*.json from the Python service.

The frontend never computes plans or summaries itself, so its tests
check against real server replies captured here. Run from frontend/:

    python3 scripts/gen-fixtures.py
"""
import json
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
FRONTEND = os.path.dirname(HERE)
REPO = os.path.dirname(FRONTEND)
FIXTURES = os.path.join(FRONTEND, "test", "fixtures")

sys.path.insert(0, os.path.join(REPO, "src"))

from proofpad.api import ServiceCore, _summary_json  # noqa: E402
from proofpad.backend import fake_backend  # noqa: E402
from proofpad.output import summarize_raw  # noqa: E402

SCENARIO_SOURCE = (
    "(defun prod (xs)\n"
    "  (if (consp xs) (* (car xs) (prod (cdr xs))) 1))\n"
    "(defun sq (x) (* x x))\n"
    "(defthm sq-nonneg (<= 0 (sq x)))\n"
    "(defthm broken nil)\n"
    "(defun twice (x) (+ x x))\n"
    "(defthm twice-even (equal (twice x) (* 2 x)))\n")


class Driver:
    def __init__(self, path):
        self.core = ServiceCore(fake_backend, lint_debounce=60.0)
        self.controller = None
        self.events = []
        self.next_id = 1
        reply = self.request("open", path=path)
        assert reply.get("ok"), reply

    def request(self, kind, **fields):
        message = {"id": self.next_id, "kind": kind, **fields}
        self.next_id += 1
        reply, self.controller = self.core.handle_request(
            self.controller, message, self.events.append)
        return reply


def write(name, payload):
    path = os.path.join(FIXTURES, name)
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    print(f"wrote {os.path.relpath(path, FRONTEND)}")


def main():
    os.makedirs(FIXTURES, exist_ok=True)

    # Summary of the include-book transcript, as the repl-result event
    # would carry it.
    transcript_path = os.path.join(REPO, "tests", "fixtures",
                                   "include_book.txt")
    with open(transcript_path) as f:
        raw = f.read()
    write("include_book_summary.json",
          _summary_json(summarize_raw(raw), 1))

    # Clean single-defun summary for the success rendering case.
    with open(os.path.join(REPO, "tests", "fixtures",
                           "clean_defun.txt")) as f:
        write("clean_defun_summary.json",
              _summary_json(summarize_raw(f.read()), 2))

    # Proof-bar scenario: statuses plus the server's hover-preview reply
    # at each interesting step.
    import tempfile
    with tempfile.NamedTemporaryFile("w", suffix=".lisp",
                                     delete=False) as f:
        f.write(SCENARIO_SOURCE)
        path = f.name
    try:
        drv = Driver(path)
        steps = []

        def snap(label, hover_index):
            statuses = [s.value for s in drv.controller.session.statuses()]
            reply = drv.request("hover-preview", index=hover_index)
            steps.append({"label": label, "statuses": statuses,
                          "hoverIndex": hover_index,
                          "plan": reply["plan"]})

        snap("initial", 2)
        drv.request("admit-through", index=2)
        snap("three-admitted", 5)
        drv.request("admit-through", index=3)
        snap("fourth-failed", 3)
        bad = drv.controller.session.forms[3].form
        drv.request("edit", start=bad.start, end=bad.end,
                    text="(defthm fixed (equal x x))")
        snap("corrected", 5)
        drv.request("admit-through", index=5)
        snap("all-admitted", 4)
        drv.request("undo-through", index=4)
        snap("two-unadmitted", 1)
        write("proof_bar_scenario.json", {"source": SCENARIO_SOURCE,
                                          "steps": steps})
    finally:
        os.unlink(path)


if __name__ == "__main__":
    main()
