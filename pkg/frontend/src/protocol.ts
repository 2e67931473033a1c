/** Message shapes of the proofpad service protocol (docs/protocol.md). */

export type Status =
  | "unadmitted"
  | "queued"
  | "in-progress"
  | "admitted"
  | "failed";

export type Severity = "error" | "warning" | "success" | "info";

export interface Region {
  start: number;
  end: number;
  access: "read-only" | "read-write";
}

export interface FormInfo {
  start: number;
  end: number;
  head: string;
  formKind: "event" | "expression";
  status: Status;
}

export interface Snapshot {
  kind: "snapshot";
  path: string | null;
  text: string;
  regions: Region[];
  forms: FormInfo[];
  proofLine: number;
}

export interface StatusChanged {
  kind: "status-changed";
  index: number;
  status: Status;
}

export interface Diagnostic {
  start: number;
  end: number;
  severity: "error" | "warning";
  code: string;
  message: string;
}

export interface DiagnosticsEvent {
  kind: "diagnostics";
  items: Diagnostic[];
}

export interface SummaryItem {
  severity: Severity;
  headline: string;
  detail: string;
  rawRange: [number, number];
}

export interface Summary {
  summaryId: number;
  overall: "success" | "failure";
  items: SummaryItem[];
}

export interface ReplResultEvent {
  kind: "repl-result";
  summary: Summary;
}

export interface DocumentChanged {
  kind: "document-changed";
  text: string;
}

export type ServerEvent =
  | Snapshot
  | StatusChanged
  | DiagnosticsEvent
  | ReplResultEvent
  | DocumentChanged;

export interface HoverPlan {
  action: "admit" | "undo";
  indices: number[];
}

export interface Reply {
  id: number;
  kind: "reply";
  ok: true;
  [extra: string]: unknown;
}

export interface ErrorReply {
  id: number | null;
  kind: "error";
  code: string;
  message: string;
}

export type ReplSubmitResult =
  | { type: "moved"; span: [number, number] }
  | { type: "evaluated"; summaryId: number };
