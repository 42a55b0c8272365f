// Wire protocol types, mirroring the service's JSON frames exactly.

export interface CellView {
  row: number;
  col: number;
  tag: string;
  throughput: number;
  blocked: boolean;
  rented: boolean;
}

export interface SourceView {
  id: number;
  row: number;
  col: number;
  power: number;
}

export interface TickStatePayload {
  tick: number;
  cells: CellView[];
  sources: SourceView[];
  rootFlow: number;
  avgFlow: number;
  benefit: number;
  lastEvent: string;
}

export interface AckPayload {
  command: string;
  commandSeq: number | null;
  effectiveTick: number;
}

export interface ErrPayload {
  code: string;
  message: string;
  commandSeq: number | null;
}

export interface ServerEvent {
  kind: "tick_state" | "ack" | "err" | "reconfig_applied" | "reconfig_skipped";
  seq: number;
  tick: number;
  payload: TickStatePayload & AckPayload & ErrPayload & Record<string, unknown>;
}

export interface Command {
  kind: string;
  seq: number;
  payload: Record<string, unknown>;
}
