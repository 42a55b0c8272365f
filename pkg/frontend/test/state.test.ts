import { describe, expect, it } from "vitest";
import type { ServerEvent, TickStatePayload } from "../src/protocol.js";
import { Store } from "../src/state.js";

function tickState(seq: number, tick: number,
                   extra: Partial<TickStatePayload> = {}): ServerEvent {
  const payload: TickStatePayload = {
    tick,
    cells: [{ row: 0, col: 0, tag: "6", throughput: 5.5, blocked: false,
              rented: false }],
    sources: [],
    rootFlow: 5.5,
    avgFlow: 5.5,
    benefit: 11.0,
    lastEvent: "",
    ...extra,
  };
  return { kind: "tick_state", seq, tick, payload } as ServerEvent;
}

describe("Store", () => {
  it("copies tick_state payloads verbatim", () => {
    const store = new Store();
    const event = tickState(0, 0, { rootFlow: 123.25, avgFlow: 61.5,
                                    benefit: -3.75 });
    store.apply(event);
    expect(store.latest).toBe(event.payload);
    expect(store.history).toEqual([
      { tick: 0, rootFlow: 123.25, avgFlow: 61.5, benefit: -3.75 },
    ]);
  });

  it("reconciles pending commands on ack", () => {
    const store = new Store();
    store.sent({ kind: "add_source", seq: 7, payload: {} });
    expect(store.pending.size).toBe(1);
    store.apply({ kind: "ack", seq: 0, tick: 3,
                  payload: { command: "add_source", commandSeq: 7,
                             effectiveTick: 3 } } as ServerEvent);
    expect(store.pending.size).toBe(0);
    expect(store.acks[0]).toEqual({ command: "add_source", commandSeq: 7,
                                    effectiveTick: 3 });
  });

  it("drops pending on err and records the message", () => {
    const store = new Store();
    store.sent({ kind: "remove_source", seq: 9, payload: { id: 4 } });
    store.apply({ kind: "err", seq: 0, tick: 1,
                  payload: { code: "not-found", message: "no source #4",
                             commandSeq: 9 } } as ServerEvent);
    expect(store.pending.size).toBe(0);
    expect(store.errors).toEqual(["not-found: no source #4"]);
  });

  it("ignores stale or duplicate sequence numbers", () => {
    const store = new Store();
    store.apply(tickState(5, 0));
    store.apply(tickState(5, 1));
    store.apply(tickState(4, 2));
    expect(store.history.length).toBe(1);
    expect(store.outOfOrder).toBe(2);
  });

  it("notes reconfiguration events", () => {
    const store = new Store();
    store.apply({ kind: "reconfig_applied", seq: 0, tick: 2,
                  payload: { move: "move:1:1->2:0" } } as ServerEvent);
    expect(store.notice).toContain("move:1:1->2:0");
    store.apply({ kind: "reconfig_skipped", seq: 1, tick: 3,
                  payload: {} } as ServerEvent);
    expect(store.notice).toContain("skipped");
  });

  it("bounds the history buffer", () => {
    const store = new Store();
    for (let i = 0; i < 500; i++) {
      store.apply(tickState(i, i));
    }
    expect(store.history.length).toBe(400);
    expect(store.history[0].tick).toBe(100);
  });
});
