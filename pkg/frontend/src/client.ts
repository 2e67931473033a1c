/** Thin WebSocket client: request/reply correlation plus an ordered
 * event queue feeding the session reducer. */
import type { ErrorReply, Reply, ServerEvent } from "./protocol.js";

type Resolver = (reply: Reply | ErrorReply) => void;

export class ProofPadClient {
  private socket: WebSocket;
  private nextId = 1;
  private pending = new Map<number, Resolver>();
  onEvent: (event: ServerEvent) => void = () => {};
  onClose: () => void = () => {};

  constructor(url: string) {
    this.socket = new WebSocket(url);
    this.socket.onmessage = (frame) => this.receive(String(frame.data));
    this.socket.onclose = () => {
      for (const resolve of this.pending.values()) {
        resolve({ id: null, kind: "error", code: "disconnected",
                  message: "connection lost" });
      }
      this.pending.clear();
      this.onClose();
    };
  }

  ready(): Promise<void> {
    if (this.socket.readyState === WebSocket.OPEN) return Promise.resolve();
    return new Promise((resolve, reject) => {
      this.socket.addEventListener("open", () => resolve());
      this.socket.addEventListener("error", () => reject(new Error("ws error")));
    });
  }

  request(kind: string, fields: Record<string, unknown> = {}):
      Promise<Reply | ErrorReply> {
    const id = this.nextId++;
    return new Promise((resolve) => {
      this.pending.set(id, resolve);
      this.socket.send(JSON.stringify({ id, kind, ...fields }));
    });
  }

  private receive(raw: string) {
    const message = JSON.parse(raw);
    if (message.kind === "reply" || message.kind === "error") {
      const resolve = message.id != null
        ? this.pending.get(message.id) : undefined;
      if (resolve) {
        this.pending.delete(message.id);
        resolve(message);
        return;
      }
    }
    this.onEvent(message as ServerEvent);
  }

  close() {
    this.socket.close();
  }
}
