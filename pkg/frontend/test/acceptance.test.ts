/** UI acceptance gate: the headline fixture behaviors in one place. */
import { describe, expect, it } from "vitest";

import type { HoverPlan, Status, Summary } from "../src/protocol.js";
import { renderProofBar } from "../src/viewmodel/proofBar.js";
import { renderResults, toggleDisclosure } from "../src/viewmodel/results.js";
import includeBook from "./fixtures/include_book_summary.json";
import scenario from "./fixtures/proof_bar_scenario.json";

describe("UI acceptance", () => {
  it("renders the five statuses distinctly", () => {
    const statuses: Status[] = [
      "unadmitted",
      "queued",
      "in-progress",
      "admitted",
      "failed",
    ];
    const cells = renderProofBar(statuses).cells;
    expect(new Set(cells.map((c) => `${c.symbol}|${c.css}`)).size).toBe(5);
  });

  it("hover preview matches the server's reply in every scenario step", () => {
    for (const step of scenario.steps) {
      const view = renderProofBar(
        step.statuses as Status[],
        step.plan as HoverPlan,
      );
      const previewed = view.cells
        .filter((c) => c.previewed)
        .map((c) => c.index);
      expect(previewed).toEqual([...step.plan.indices].sort((a, b) => a - b));
    }
  });

  it("orders the include-book fixture error-before-warning, scrolled to top", () => {
    const view = renderResults(includeBook as Summary);
    const severities = view.items.map((i) => i.severity);
    expect(severities.indexOf("warning")).toBeGreaterThan(
      severities.lastIndexOf("error"),
    );
    expect(view.scrollTop).toBe(0);
  });

  it("disclosure toggle round-trips", () => {
    const view = renderResults(includeBook as Summary);
    expect(toggleDisclosure(toggleDisclosure(view, 0), 0)).toEqual(view);
  });
});
