/** Pure view-model for the REPL pane.
 *
 * Incomplete input keeps the prompt open for multi-line entry; events
 * show a "moved to definitions" notice instead of a value; a disconnect
 * mid-submit marks the entry failed with a retry affordance.
 */
import type { ErrorReply, ReplSubmitResult, Summary } from "../protocol.js";

export type HistoryEntry =
  | { kind: "moved"; input: string; notice: string }
  | { kind: "evaluated"; input: string; summary: Summary; disclosed: boolean }
  | { kind: "failed"; input: string; message: string; retry: true };

export interface ReplView {
  history: HistoryEntry[];
  /** Accumulated multi-line input still waiting for balance. */
  pending: string;
  prompt: "pp> " | "... ";
}

export function emptyRepl(): ReplView {
  return { history: [], pending: "", prompt: "pp> " };
}

/** Fold one typed line into pending input; returns the text to submit
 * (all pending lines) — the server decides whether it is complete. */
export function enterLine(view: ReplView, line: string): {
  view: ReplView;
  submit: string;
} {
  const pending = view.pending ? `${view.pending}\n${line}` : line;
  return { view: { ...view, pending }, submit: pending };
}

export function applyReply(
  view: ReplView,
  input: string,
  results: ReplSubmitResult[],
  summaries: Map<number, Summary>,
): ReplView {
  const history = view.history.slice();
  for (const result of results) {
    if (result.type === "moved") {
      history.push({ kind: "moved", input, notice: "moved to definitions" });
    } else {
      const summary = summaries.get(result.summaryId);
      if (summary) {
        history.push({ kind: "evaluated", input, summary, disclosed: false });
      }
    }
  }
  return { history, pending: "", prompt: "pp> " };
}

export function applyError(view: ReplView, input: string,
                           error: ErrorReply): ReplView {
  if (error.code === "incomplete-form") {
    // Keep the prompt open and the input buffered.
    return { ...view, pending: input, prompt: "... " };
  }
  return {
    history: [...view.history,
              { kind: "failed", input, message: error.message, retry: true }],
    pending: "",
    prompt: "pp> ",
  };
}

/** A dropped connection mid-submit: the entry fails with a retry. */
export function applyDisconnect(view: ReplView, input: string): ReplView {
  return {
    history: [...view.history,
              { kind: "failed", input, message: "connection lost",
                retry: true }],
    pending: "",
    prompt: "pp> ",
  };
}
