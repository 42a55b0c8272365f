// View state: a store fed exclusively by server events.  Every number
// shown anywhere in the UI is copied verbatim from an event payload;
// the store never derives or recomputes simulation values, so replaying
// a recorded event stream reproduces the exact display.

import type { Command, ServerEvent, TickStatePayload } from "./protocol.js";

export interface FlowSample {
  tick: number;
  rootFlow: number;
  avgFlow: number;
  benefit: number;
}

export interface AckRecord {
  command: string;
  commandSeq: number | null;
  effectiveTick: number;
}

const HISTORY_LIMIT = 400;

export class Store {
  latest: TickStatePayload | null = null;
  history: FlowSample[] = [];
  pending = new Map<number, Command>();
  acks: AckRecord[] = [];
  errors: string[] = [];
  notice = "";
  lastSeq = -1;
  outOfOrder = 0;

  /** Register a command we sent, shown as pending until its ack. */
  sent(command: Command): void {
    this.pending.set(command.seq, command);
  }

  apply(event: ServerEvent): void {
    if (event.seq <= this.lastSeq) {
      this.outOfOrder += 1;
      return;
    }
    this.lastSeq = event.seq;
    switch (event.kind) {
      case "tick_state": {
        const p = event.payload as TickStatePayload;
        this.latest = p;
        this.history.push({
          tick: p.tick,
          rootFlow: p.rootFlow,
          avgFlow: p.avgFlow,
          benefit: p.benefit,
        });
        if (this.history.length > HISTORY_LIMIT) {
          this.history.shift();
        }
        break;
      }
      case "ack": {
        const { command, commandSeq, effectiveTick } = event.payload;
        if (commandSeq !== null) {
          this.pending.delete(commandSeq);
        }
        this.acks.push({ command, commandSeq, effectiveTick });
        break;
      }
      case "err": {
        const { code, message, commandSeq } = event.payload;
        if (commandSeq !== null && commandSeq !== undefined) {
          this.pending.delete(commandSeq);
        }
        this.errors.push(`${code}: ${message}`);
        break;
      }
      case "reconfig_applied":
        this.notice = `reconfigured (${String(event.payload["move"] ?? "")})`;
        break;
      case "reconfig_skipped":
        this.notice = "reconfiguration skipped: no improving move";
        break;
    }
  }
}
