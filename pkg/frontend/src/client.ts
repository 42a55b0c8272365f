// Websocket wrapper: assigns sequence numbers, queues commands while
// disconnected and replays them after a reconnect.

import type { Command, ServerEvent } from "./protocol.js";

export class SocketClient {
  private ws: WebSocket | null = null;
  private seq = 0;
  private queue: Command[] = [];
  private url = "";
  onEvent: (event: ServerEvent) => void = () => undefined;
  onStatus: (status: "connected" | "disconnected" | "queued") => void =
    () => undefined;

  connect(url: string): void {
    this.url = url;
    const ws = new WebSocket(url);
    this.ws = ws;
    ws.onopen = () => {
      this.onStatus("connected");
      const backlog = this.queue.splice(0);
      for (const cmd of backlog) {
        ws.send(JSON.stringify(cmd));
      }
    };
    ws.onmessage = (msg) => {
      this.onEvent(JSON.parse(String(msg.data)) as ServerEvent);
    };
    ws.onclose = () => {
      this.onStatus("disconnected");
      this.ws = null;
      setTimeout(() => this.connect(this.url), 1000);
    };
    ws.onerror = () => ws.close();
  }

  /** Send (or queue) a command; returns it for optimistic display. */
  send(kind: string, payload: Record<string, unknown> = {}): Command {
    this.seq += 1;
    const cmd: Command = { kind, seq: this.seq, payload };
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(JSON.stringify(cmd));
    } else {
      this.queue.push(cmd);
      this.onStatus("queued");
    }
    return cmd;
  }
}
