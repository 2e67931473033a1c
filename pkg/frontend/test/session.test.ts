import { describe, expect, it } from "vitest";

import type { ServerEvent, Snapshot } from "../src/protocol.js";
import {
  editable,
  emptySession,
  reduce,
  replay,
  statusesOf,
} from "../src/viewmodel/session.js";

const snapshot: Snapshot = {
  kind: "snapshot",
  path: "doc.lisp",
  text: "(defun f (x) x)\n(f 1)\n",
  regions: [{ start: 0, end: 22, access: "read-write" }],
  forms: [
    { start: 0, end: 15, head: "defun", formKind: "event",
      status: "unadmitted" },
    { start: 16, end: 21, head: "f", formKind: "expression",
      status: "unadmitted" },
  ],
  proofLine: 0,
};

const admissionEvents: ServerEvent[] = [
  snapshot,
  { kind: "status-changed", index: 0, status: "queued" },
  { kind: "status-changed", index: 0, status: "in-progress" },
  { kind: "status-changed", index: 0, status: "admitted" },
];

describe("session reducer", () => {
  it("applies a snapshot wholesale", () => {
    const state = reduce(emptySession(), snapshot);
    expect(state.path).toBe("doc.lisp");
    expect(statusesOf(state.forms)).toEqual(["unadmitted", "unadmitted"]);
  });

  it("tracks status changes and derives the proof line", () => {
    const state = replay(admissionEvents);
    expect(statusesOf(state.forms)).toEqual(["admitted", "unadmitted"]);
    expect(state.proofLine).toBe(1);
  });

  it("replaying snapshot+events reproduces the identical view model", () => {
    const a = replay(admissionEvents);
    const b = replay(admissionEvents);
    expect(b).toEqual(a);
    // And a fresh client that reconnects mid-session sees the same
    // view after replaying the same ordered queue.
    const reconnected = admissionEvents.reduce(reduce, emptySession());
    expect(reconnected).toEqual(a);
  });

  it("applies document and diagnostics events", () => {
    let state = replay(admissionEvents);
    state = reduce(state, { kind: "document-changed", text: "(f 1)\n" });
    expect(state.text).toBe("(f 1)\n");
    state = reduce(state, {
      kind: "diagnostics",
      items: [{ start: 1, end: 2, severity: "error", code: "x",
                message: "m" }],
    });
    expect(state.diagnostics).toHaveLength(1);
  });
});

describe("editable", () => {
  it("blocks edits over admitted spans", () => {
    const state = replay(admissionEvents);
    expect(editable(state, 2, 4)).toBe(false); // inside admitted form
    expect(editable(state, 16, 21)).toBe(true); // unadmitted form
  });

  it("blocks edits in read-only regions", () => {
    const state = reduce(emptySession(), {
      ...snapshot,
      regions: [
        { start: 0, end: 16, access: "read-only" },
        { start: 16, end: 22, access: "read-write" },
      ],
    });
    expect(editable(state, 0, 3)).toBe(false);
    expect(editable(state, 17, 20)).toBe(true);
    expect(editable(state, 15, 17)).toBe(false); // straddles the boundary
  });
});
