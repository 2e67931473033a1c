/** Pure view-model for the proof-bar gutter.
 *
 * The gutter never computes plans itself: hover previews come from the
 * server's hover-preview reply, so server and UI cannot disagree about
 * what a click would do.
 */
import type { HoverPlan, Status } from "../protocol.js";

/** Color/symbol pair per status; five distinct renderings. */
export const STATUS_GLYPHS: Record<Status, { symbol: string; css: string }> = {
  unadmitted: { symbol: "", css: "cell-unadmitted" },
  queued: { symbol: "○", css: "cell-queued" }, // hollow dot
  "in-progress": { symbol: "⟳", css: "cell-in-progress" }, // spinner
  admitted: { symbol: "✓", css: "cell-admitted" }, // green check
  failed: { symbol: "✗", css: "cell-failed" }, // red cross
};

export interface GutterCell {
  index: number;
  status: Status;
  symbol: string;
  css: string;
  /** Admitted text renders with a grey background. */
  greyBackground: boolean;
  /** Dark line under the last admitted form, above the proof line. */
  separatorBelow: boolean;
  /** Cell is part of the hovered plan's preview. */
  previewed: boolean;
  /** What the previewed plan would do to this cell, if hovered. */
  previewAction: "admit" | "undo" | null;
}

export interface ProofBarView {
  cells: GutterCell[];
  proofLine: number;
  connected: boolean;
  /** Shown instead of the gutter while disconnected. */
  reconnectBanner: boolean;
}

export function proofLineOf(statuses: Status[]): number {
  for (let i = 0; i < statuses.length; i++) {
    if (statuses[i] !== "admitted") return i;
  }
  return statuses.length;
}

export function renderProofBar(
  statuses: Status[],
  hoverPlan: HoverPlan | null = null,
  connected = true,
): ProofBarView {
  const proofLine = proofLineOf(statuses);
  const previewSet = new Set(hoverPlan ? hoverPlan.indices : []);
  const cells = statuses.map((status, index): GutterCell => {
    const glyph = STATUS_GLYPHS[status];
    return {
      index,
      status,
      symbol: glyph.symbol,
      css: glyph.css,
      greyBackground: status === "admitted",
      separatorBelow: proofLine > 0 && index === proofLine - 1,
      previewed: previewSet.has(index),
      previewAction: previewSet.has(index) ? hoverPlan!.action : null,
    };
  });
  return { cells, proofLine, connected, reconnectBanner: !connected };
}

/** The request kind a click on `index` should send, per current state. */
export function clickRequestKind(
  statuses: Status[],
  index: number,
): "admit-through" | "undo-through" {
  return statuses[index] === "admitted" ? "undo-through" : "admit-through";
}
