/** Pure view-model for the results pane.
 *
 * Items arrive already severity-sorted from the server; the view keeps
 * that order, de-emphasizes warnings, starts scrolled to the top so
 * output reads top-down, and collapses raw output behind a disclosure
 * arrow.
 */
import type { Summary, SummaryItem } from "../protocol.js";

export interface ResultItemView {
  severity: SummaryItem["severity"];
  headline: string;
  detail: string;
  rawRange: [number, number];
  css: string;
  /** Warnings render visually secondary. */
  deEmphasized: boolean;
  /** Raw detail hidden until the disclosure arrow is clicked. */
  disclosed: boolean;
}

export interface ResultsView {
  summaryId: number;
  overall: "success" | "failure";
  items: ResultItemView[];
  /** Initial scroll position of the raw output panel. */
  scrollTop: number;
}

export function renderResults(summary: Summary): ResultsView {
  return {
    summaryId: summary.summaryId,
    overall: summary.overall,
    items: summary.items.map((item) => ({
      severity: item.severity,
      headline: item.headline,
      detail: item.detail,
      rawRange: item.rawRange,
      css: `result-${item.severity}`,
      deEmphasized: item.severity === "warning",
      disclosed: false,
    })),
    scrollTop: 0,
  };
}

/** Toggle one item's disclosure; pure, returns a new view. */
export function toggleDisclosure(
  view: ResultsView,
  index: number,
): ResultsView {
  return {
    ...view,
    items: view.items.map((item, i) =>
      i === index ? { ...item, disclosed: !item.disclosed } : item,
    ),
  };
}
