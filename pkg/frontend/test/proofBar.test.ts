import { describe, expect, it } from "vitest";

import type { HoverPlan, Status } from "../src/protocol.js";
import {
  STATUS_GLYPHS,
  clickRequestKind,
  proofLineOf,
  renderProofBar,
} from "../src/viewmodel/proofBar.js";
import scenario from "./fixtures/proof_bar_scenario.json";

const ALL: Status[] = [
  "unadmitted",
  "queued",
  "in-progress",
  "admitted",
  "failed",
];

describe("renderProofBar", () => {
  it("renders the five statuses with five distinct glyph/css pairs", () => {
    const view = renderProofBar(ALL);
    const pairs = view.cells.map((c) => `${c.symbol}|${c.css}`);
    expect(new Set(pairs).size).toBe(5);
    expect(view.cells.map((c) => c.css)).toEqual(
      ALL.map((s) => STATUS_GLYPHS[s].css),
    );
  });

  it("gives admitted text a grey background and a separator line", () => {
    const view = renderProofBar(["admitted", "admitted", "unadmitted"]);
    expect(view.cells.map((c) => c.greyBackground)).toEqual([
      true,
      true,
      false,
    ]);
    expect(view.cells.map((c) => c.separatorBelow)).toEqual([
      false,
      true,
      false,
    ]);
    expect(view.proofLine).toBe(2);
  });

  it("previews the hovered plan's cells", () => {
    const plan: HoverPlan = { action: "admit", indices: [0, 1, 2] };
    const view = renderProofBar(
      ["unadmitted", "unadmitted", "unadmitted"],
      plan,
    );
    expect(view.cells.map((c) => c.previewed)).toEqual([true, true, true]);
    expect(view.cells[0].previewAction).toBe("admit");
  });

  it("renders an empty gutter for an empty document", () => {
    const view = renderProofBar([]);
    expect(view.cells).toEqual([]);
    expect(view.proofLine).toBe(0);
  });

  it("shows a reconnect banner while disconnected", () => {
    const view = renderProofBar(["unadmitted"], null, false);
    expect(view.reconnectBanner).toBe(true);
    expect(renderProofBar(["unadmitted"]).reconnectBanner).toBe(false);
  });
});

describe("server hover-preview fixtures", () => {
  // Captured server replies for the proof-bar scenario; the UI must
  // agree with them at every step.
  for (const step of scenario.steps) {
    it(`step ${step.label}: preview matches the server plan`, () => {
      const statuses = step.statuses as Status[];
      const plan = step.plan as HoverPlan;
      const view = renderProofBar(statuses, plan);
      for (const index of plan.indices) {
        expect(view.cells[index].previewed).toBe(true);
        expect(view.cells[index].previewAction).toBe(plan.action);
      }
      // Cells outside the plan are untouched.
      view.cells.forEach((cell) => {
        if (!plan.indices.includes(cell.index)) {
          expect(cell.previewed).toBe(false);
        }
      });
      // A click where the user hovers sends the same polarity the
      // server planned.
      const expected =
        plan.action === "admit" ? "admit-through" : "undo-through";
      expect(clickRequestKind(statuses, step.hoverIndex)).toBe(expected);
    });
  }

  it("proof line derivation matches the server's statuses", () => {
    for (const step of scenario.steps) {
      const statuses = step.statuses as Status[];
      const first = statuses.findIndex((s) => s !== "admitted");
      expect(proofLineOf(statuses)).toBe(
        first === -1 ? statuses.length : first,
      );
    }
  });
});
