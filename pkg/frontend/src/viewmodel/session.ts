/** Reducer from server events to the client's session view.
 *
 * The UI holds no authoritative state: replaying the same snapshot and
 * event sequence always reproduces the identical view model.
 */
import type {
  Diagnostic,
  FormInfo,
  Region,
  ServerEvent,
  Status,
  Summary,
} from "../protocol.js";
import { proofLineOf } from "./proofBar.js";

export interface SessionView {
  path: string | null;
  text: string;
  regions: Region[];
  forms: FormInfo[];
  proofLine: number;
  diagnostics: Diagnostic[];
  replResults: Summary[];
}

export function emptySession(): SessionView {
  return {
    path: null,
    text: "",
    regions: [],
    forms: [],
    proofLine: 0,
    diagnostics: [],
    replResults: [],
  };
}

export function reduce(state: SessionView, event: ServerEvent): SessionView {
  switch (event.kind) {
    case "snapshot":
      return {
        ...emptySession(),
        path: event.path,
        text: event.text,
        regions: event.regions,
        forms: event.forms,
        proofLine: event.proofLine,
      };
    case "status-changed": {
      const forms = state.forms.map((form, i) =>
        i === event.index ? { ...form, status: event.status } : form,
      );
      return { ...state, forms, proofLine: proofLineOf(statusesOf(forms)) };
    }
    case "document-changed":
      return { ...state, text: event.text };
    case "diagnostics":
      return { ...state, diagnostics: event.items };
    case "repl-result":
      return { ...state, replResults: [...state.replResults, event.summary] };
  }
}

export function statusesOf(forms: FormInfo[]): Status[] {
  return forms.map((f) => f.status);
}

export function replay(events: ServerEvent[]): SessionView {
  return events.reduce(reduce, emptySession());
}

/** Whether an edit span is allowed through the UI: it must avoid
 * read-only regions and admitted/queued/in-progress spans. */
export function editable(state: SessionView, start: number,
                         end: number): boolean {
  const inWritable = state.regions.some(
    (r) => r.access === "read-write" && r.start <= start && end <= r.end,
  );
  if (state.regions.length > 0 && !inWritable) return false;
  const locked: Status[] = ["admitted", "queued", "in-progress"];
  return !state.forms.some(
    (f) => locked.includes(f.status) && start < f.end && end > f.start,
  );
}
