/** DOM wiring: connects the view-models to the live service. */
import { ProofPadClient } from "./client.js";
import type { ErrorReply, HoverPlan, Reply, Summary } from "./protocol.js";
import {
  clickRequestKind,
  renderProofBar,
} from "./viewmodel/proofBar.js";
import { renderResults, toggleDisclosure } from "./viewmodel/results.js";
import type { ResultsView } from "./viewmodel/results.js";
import {
  applyDisconnect,
  applyError,
  applyReply,
  emptyRepl,
  enterLine,
} from "./viewmodel/repl.js";
import type { ReplView } from "./viewmodel/repl.js";
import {
  emptySession,
  reduce,
  statusesOf,
} from "./viewmodel/session.js";
import type { SessionView } from "./viewmodel/session.js";

const $ = (id: string) => document.getElementById(id)!;

let session: SessionView = emptySession();
let repl: ReplView = emptyRepl();
let results: ResultsView | null = null;
let hoverPlan: HoverPlan | null = null;
let connected = false;
const summaries = new Map<number, Summary>();

const url = `ws://${location.host || "127.0.0.1:9640"}`;
const client = new ProofPadClient(url);

client.onEvent = (event) => {
  session = reduce(session, event);
  if (event.kind === "repl-result") {
    summaries.set(event.summary.summaryId, event.summary);
    results = renderResults(event.summary);
  }
  render();
};

client.onClose = () => {
  connected = false;
  render();
};

function render() {
  renderGutter();
  renderEditor();
  renderResultsPane();
  renderReplHistory();
}

function renderGutter() {
  const bar = renderProofBar(statusesOf(session.forms), hoverPlan, connected);
  const gutter = $("proof-bar");
  gutter.replaceChildren();
  $("reconnect-banner").hidden = !bar.reconnectBanner;
  bar.cells.forEach((cell) => {
    const el = document.createElement("div");
    el.className = `cell ${cell.css}` +
      (cell.previewed ? ` preview-${cell.previewAction}` : "") +
      (cell.separatorBelow ? " separator-below" : "");
    el.textContent = cell.symbol;
    el.onmouseenter = async () => {
      const reply = await client.request("hover-preview",
                                         { index: cell.index });
      if (reply.kind === "reply") {
        hoverPlan = (reply as Reply).plan as HoverPlan;
        render();
      }
    };
    el.onmouseleave = () => {
      hoverPlan = null;
      render();
    };
    el.onclick = () => {
      const kind = clickRequestKind(statusesOf(session.forms), cell.index);
      client.request(kind, { index: cell.index });
    };
    gutter.appendChild(el);
  });
}

function renderEditor() {
  const editor = $("editor") as HTMLTextAreaElement;
  if (editor.value !== session.text) editor.value = session.text;
}

function renderResultsPane() {
  const pane = $("results");
  pane.replaceChildren();
  if (!results) return;
  results.items.forEach((item, i) => {
    const el = document.createElement("div");
    el.className = `result ${item.css}` +
      (item.deEmphasized ? " de-emphasized" : "");
    const headline = document.createElement("div");
    headline.className = "headline";
    headline.textContent = `${item.disclosed ? "▾" : "▸"} ${item.headline}`;
    headline.onclick = () => {
      results = toggleDisclosure(results!, i);
      render();
    };
    el.appendChild(headline);
    if (item.disclosed) {
      const detail = document.createElement("pre");
      detail.textContent = item.detail;
      el.appendChild(detail);
    }
    pane.appendChild(el);
  });
  pane.scrollTop = results.scrollTop;
}

function renderReplHistory() {
  const history = $("repl-history");
  history.replaceChildren();
  for (const entry of repl.history) {
    const el = document.createElement("div");
    el.className = `entry entry-${entry.kind}`;
    if (entry.kind === "moved") {
      el.textContent = `${entry.input}\n; ${entry.notice}`;
    } else if (entry.kind === "evaluated") {
      const lines = entry.summary.items.map((m) => m.headline).join("\n");
      el.textContent = `${entry.input}\n${lines}`;
    } else {
      el.textContent = `${entry.input}\n! ${entry.message} (retry)`;
    }
    history.appendChild(el);
  }
  ($("repl-prompt") as HTMLSpanElement).textContent = repl.prompt;
}

$("repl-input").addEventListener("keydown", async (raw) => {
  const event = raw as KeyboardEvent;
  if (event.key !== "Enter") return;
  const input = event.target as HTMLInputElement;
  const { view, submit } = enterLine(repl, input.value);
  repl = view;
  input.value = "";
  if (!connected) {
    repl = applyDisconnect(repl, submit);
    render();
    return;
  }
  const reply = await client.request("repl-submit", { text: submit });
  if (reply.kind === "reply") {
    repl = applyReply(repl, submit,
                      (reply as Reply).results as never, summaries);
  } else {
    repl = applyError(repl, submit, reply as ErrorReply);
  }
  render();
});

async function start() {
  await client.ready();
  connected = true;
  const path = new URLSearchParams(location.search).get("path");
  if (path) await client.request("open", { path });
  render();
}

start();
