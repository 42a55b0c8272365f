// Replays a session recorded by the engine service into the store and
// checks that the UI would show nothing it computed itself: every
// number on display is a verbatim copy from some event payload.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { adjacencyDegrees } from "../src/grid.js";
import type { ServerEvent } from "../src/protocol.js";
import { Store } from "../src/state.js";

const here = dirname(fileURLToPath(import.meta.url));

function loadEvents(): ServerEvent[] {
  const text = readFileSync(join(here, "fixtures", "session.ndjson"), "utf8");
  return text
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line))
    .filter((rec) => rec.dir === "evt")
    .map(({ dir, ...event }) => event as ServerEvent);
}

describe("recorded session replay", () => {
  it("renders only numbers taken from events", () => {
    const events = loadEvents();
    const store = new Store();
    const states = events.filter((e) => e.kind === "tick_state");
    for (const event of events) {
      store.apply(event);
    }
    // the store's display data is exactly the event payloads
    expect(store.latest).toBe(states[states.length - 1].payload);
    expect(store.history).toEqual(states.map((e) => ({
      tick: e.payload.tick,
      rootFlow: e.payload.rootFlow,
      avgFlow: e.payload.avgFlow,
      benefit: e.payload.benefit,
    })));
    // acks and errors come straight from payloads as well
    const acks = events.filter((e) => e.kind === "ack");
    expect(store.acks.length).toBe(acks.length);
    for (let i = 0; i < acks.length; i++) {
      expect(store.acks[i].effectiveTick)
        .toBe(acks[i].payload.effectiveTick);
    }
    const errs = events.filter((e) => e.kind === "err");
    expect(store.errors.length).toBe(errs.length);
  });

  it("sees ticks in strictly increasing order", () => {
    const events = loadEvents();
    const ticks = events
      .filter((e) => e.kind === "tick_state")
      .map((e) => e.payload.tick);
    // get_state snapshots repeat the previous tick; engine ticks advance
    for (let i = 1; i < ticks.length; i++) {
      expect(ticks[i]).toBeGreaterThanOrEqual(ticks[i - 1]);
    }
    const seqs = events.map((e) => e.seq);
    expect(seqs).toEqual([...seqs].sort((a, b) => a - b));
  });

  it("keeps per-cell flags usable for rendering", () => {
    const events = loadEvents();
    const store = new Store();
    for (const event of events) {
      store.apply(event);
    }
    for (const cell of store.latest!.cells) {
      expect(typeof cell.throughput).toBe("number");
      expect(typeof cell.blocked).toBe("boolean");
      expect(typeof cell.rented).toBe("boolean");
    }
  });
});

describe("pattern explorer geometry", () => {
  it("lays a ring sample out as a closed cycle", () => {
    // the 2x2 ring sample as served by /api/patterns/rat-membranes
    const ring = [
      { row: 0, col: 0, tag: "4" },
      { row: 0, col: 1, tag: "7" },
      { row: 1, col: 0, tag: "2" },
      { row: 1, col: 1, tag: "e" },
    ];
    expect(adjacencyDegrees(ring)).toEqual([2, 2, 2, 2]);
  });

  it("distinguishes non-cycles", () => {
    const chain = [
      { row: 0, col: 0, tag: "4" },
      { row: 0, col: 1, tag: "4" },
      { row: 0, col: 2, tag: "6" },
    ];
    expect(adjacencyDegrees(chain)).toEqual([1, 2, 1]);
  });
});
