"""Interactive simulation service.

One session, one engine, commands applied at tick boundaries over a
websocket carrying one JSON document per frame.  Every emitted event
gets a monotonically increasing sequence number, commands are answered
with an ack carrying the tick at which they take effect, and the whole
exchange can be logged as ndjson and replayed deterministically.
"""

from __future__ import annotations

import asyncio
import json
import os
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .engine import (ScenarioConfig, SimState, initial_state,
                     scenario_from_dict, scenario_to_dict, tick)
from .errors import VorgError
from .generate import enumerate_members
from .grid import format_word
from .membranes import generate_rat_membranes, generate_rat_words
from .organism import Source
from .patterns import PATTERNS

_TAG_OF = {2: "2", 4: "4", 5: "5", 6: "6", 7: "7", 14: "e"}


class CommandError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class Session:
    """Single simulation session; all mutation goes through handle()."""

    def __init__(self, cfg: ScenarioConfig | None = None,
                 log_path: str | None = None):
        self.cfg: ScenarioConfig | None = None
        self.state: SimState | None = None
        self.paused = True
        self.speed = 2.0
        self.seq_out = 0
        self.records: list[dict] = []
        self._log_file = open(log_path, "a") if log_path else None
        self.observers: set[asyncio.Queue] = set()
        if cfg is not None:
            # Route through the command path so the log replays from a
            # clean session.
            self.handle({"kind": "start", "seq": None,
                         "payload": {"config": scenario_to_dict(cfg)}})

    # -- emission ---------------------------------------------------------

    def _record(self, rec: dict) -> None:
        self.records.append(rec)
        if self._log_file:
            self._log_file.write(json.dumps(rec, sort_keys=True) + "\n")
            self._log_file.flush()

    def _emit(self, kind: str, tick_no: int, payload: dict) -> dict:
        event = {"kind": kind, "seq": self.seq_out, "tick": tick_no,
                 "payload": payload}
        self.seq_out += 1
        self._record({"dir": "evt", **event})
        for queue in list(self.observers):
            queue.put_nowait(event)
        return event

    # -- state snapshots ---------------------------------------------------

    def _tick_state_payload(self) -> dict:
        state = self.state
        report = state.last_report
        blocked = state.blocked_now()
        rented = state.rented.coords()
        cells = []
        for (r, c), tag in sorted(state.word.cells.items()):
            cells.append({
                "row": r, "col": c, "tag": tag,
                "throughput": report.per_node_throughput.get((r, c), 0.0)
                if report else 0.0,
                "blocked": (r, c) in blocked,
                "rented": (r, c) in rented,
            })
        sources = [{"id": sid, "row": s.pos[0], "col": s.pos[1],
                    "power": s.power}
                   for s, sid in zip(self.state.sources,
                                     self.state.sources.ids)]
        last = state.rows[-1] if state.rows else None
        return {
            "tick": last.tick if last else -1,
            "cells": cells,
            "sources": sources,
            "rootFlow": last.root_flow if last else 0.0,
            "avgFlow": last.avg_flow if last else 0.0,
            "benefit": last.benefit if last else 0.0,
            "lastEvent": last.event if last else "",
        }

    def _emit_tick_state(self) -> None:
        payload = self._tick_state_payload()
        self._emit("tick_state", payload["tick"], payload)

    def tick_once(self) -> None:
        if self.state is None:
            return
        before = self.state.reconfig_count
        tick(self.state, self.cfg)
        row = self.state.rows[-1]
        if self.state.reconfig_count > before:
            move_evt = next(p for p in row.event.split(";")
                            if p.startswith("move:"))
            self._emit("reconfig_applied", row.tick, {"move": move_evt})
        elif "reconfig-skipped" in row.event:
            self._emit("reconfig_skipped", row.tick, {})
        self._emit_tick_state()

    # -- commands ----------------------------------------------------------

    def _start(self, cfg: ScenarioConfig) -> None:
        self.cfg = cfg
        self.state = initial_state(cfg)
        self.paused = True

    def _require_state(self) -> SimState:
        if self.state is None:
            raise CommandError("bad-request", "no scenario started")
        return self.state

    def handle(self, msg: dict) -> None:
        """Apply one command and emit its ack (or err)."""
        self._record({"dir": "cmd", **msg})
        kind = msg.get("kind")
        seq = msg.get("seq")
        payload = msg.get("payload") or {}
        try:
            if not isinstance(kind, str):
                raise CommandError("bad-request", "missing command kind")
            effective = self._apply(kind, payload)
        except CommandError as exc:
            self._emit("err", self.state.tick if self.state else -1,
                       {"code": exc.code, "message": str(exc),
                        "commandSeq": seq})
            return
        self._emit("ack", self.state.tick if self.state else -1,
                   {"command": kind, "commandSeq": seq,
                    "effectiveTick": effective})
        if kind == "get_state":
            self._emit_tick_state()
        elif kind == "step":
            for _ in range(int(payload.get("n", 1))):
                self.tick_once()

    def _apply(self, kind: str, payload: dict) -> int:
        if kind == "start":
            try:
                cfg = scenario_from_dict(payload.get("config") or {})
                self._start(cfg)
            except (ValueError, TypeError, KeyError, VorgError) as exc:
                raise CommandError("bad-request", f"bad config: {exc}")
            return 0
        state = self._require_state()
        nxt = state.tick
        if kind == "pause":
            self.paused = True
        elif kind == "resume":
            self.paused = False
        elif kind == "step":
            n = payload.get("n", 1)
            if not isinstance(n, int) or n < 1:
                raise CommandError("bad-request", "step needs n >= 1")
        elif kind == "set_speed":
            speed = payload.get("ticksPerSecond")
            if not isinstance(speed, (int, float)) or speed <= 0:
                raise CommandError("bad-request", "bad ticksPerSecond")
            self.speed = float(speed)
        elif kind == "add_source":
            try:
                row, col = int(payload["row"]), int(payload["col"])
                power = float(payload["power"])
            except (KeyError, TypeError, ValueError):
                raise CommandError("bad-request", "add_source needs "
                                                  "row, col, power")
            if not (0 <= row < self.cfg.grid_height
                    and 0 <= col < self.cfg.grid_width):
                raise CommandError("out-of-bounds",
                                   f"position ({row},{col}) outside grid")
            if power < 0:
                raise CommandError("bad-request", "power must be >= 0")
            state.sources = state.sources.add(Source((row, col), power))
            state.sources_changed = True
        elif kind == "remove_source":
            sid = self._source_id(payload)
            state.sources = state.sources.remove(sid)
            state.sources_changed = True
        elif kind == "modify_source":
            sid = self._source_id(payload)
            try:
                power = float(payload["power"])
            except (KeyError, TypeError, ValueError):
                raise CommandError("bad-request", "modify_source needs power")
            state.sources = state.sources.modify(sid, power)
            state.sources_changed = True
        elif kind == "trigger_reconfig":
            state.force_reconfig = True
        elif kind == "set_policy":
            policy = payload.get("policy")
            if policy not in ("off", "auto"):
                raise CommandError("bad-request", "policy must be off or auto")
            state.policy = policy
        elif kind == "set_elastic":
            enabled = payload.get("enabled")
            if not isinstance(enabled, bool):
                raise CommandError("bad-request", "enabled must be boolean")
            if enabled and self.cfg.elastic is None:
                raise CommandError("bad-request",
                                   "scenario has no elastic config")
            state.elastic_enabled = enabled
        elif kind == "get_state":
            pass
        else:
            raise CommandError("bad-request", f"unknown command {kind!r}")
        return nxt

    def _source_id(self, payload: dict) -> int:
        state = self._require_state()
        try:
            sid = int(payload["id"])
        except (KeyError, TypeError, ValueError):
            raise CommandError("bad-request", "missing source id")
        if sid not in state.sources.ids:
            raise CommandError("not-found", f"no source #{sid}")
        return sid


def replay_session(lines) -> tuple[bool, str]:
    """Re-run a recorded session; True when the regenerated event stream
    is identical to the recorded one."""
    records = [json.loads(line) for line in lines if line.strip()]
    session = Session()
    regen_upto = 0
    for rec in records:
        if rec["dir"] == "cmd":
            session.handle({k: v for k, v in rec.items() if k != "dir"})
        else:
            seq = rec["seq"]
            if seq >= session.seq_out:
                session.tick_once()
        regen = [r for r in session.records if r["dir"] == "evt"]
        recorded = [r for r in records[:records.index(rec) + 1]
                    if r["dir"] == "evt"]
        regen_upto = len(recorded)
        if regen[:regen_upto] != recorded:
            return False, (f"divergence at event {regen_upto}: "
                           f"{regen[len(recorded) - 1:regen_upto]} != "
                           f"{recorded[-1:]}")
    return True, "ok"


_FALLBACK_PAGE = """<!doctype html>
<html><head><title>vorg</title></head>
<body><h1>vorg simulation service</h1>
<p>The web UI bundle was not found. Build it with
<code>cd frontend && npm install && npm run build</code>, then restart.</p>
<p>The websocket endpoint is at <code>/ws</code>.</p></body></html>
"""


def _ui_dir() -> Path | None:
    env = os.environ.get("VORG_UI_DIR")
    candidates = [Path(env)] if env else []
    here = Path(__file__).resolve()
    candidates += [here.parents[2] / "frontend" / "dist",
                   Path.cwd() / "frontend" / "dist"]
    for cand in candidates:
        if cand and (cand / "index.html").is_file():
            return cand
    return None


def create_app(cfg: ScenarioConfig | None = None,
               log_path: str | None = None) -> FastAPI:
    app = FastAPI(title="vorg")
    session = Session(cfg, log_path)
    app.state.session = session
    lock = asyncio.Lock()

    async def runner():
        while True:
            if session.state is not None and not session.paused:
                async with lock:
                    session.tick_once()
                await asyncio.sleep(1.0 / session.speed)
            else:
                await asyncio.sleep(0.05)

    @app.on_event("startup")
    async def _startup():
        app.state.runner = asyncio.create_task(runner())

    @app.on_event("shutdown")
    async def _shutdown():
        app.state.runner.cancel()

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        queue: asyncio.Queue = asyncio.Queue()
        session.observers.add(queue)

        async def sender():
            while True:
                event = await queue.get()
                await ws.send_text(json.dumps(event, sort_keys=True))

        send_task = asyncio.create_task(sender())
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = json.loads(raw)
                    if not isinstance(msg, dict):
                        raise ValueError("not an object")
                except ValueError as exc:
                    async with lock:
                        session._emit("err",
                                      session.state.tick if session.state
                                      else -1,
                                      {"code": "bad-request",
                                       "message": f"bad frame: {exc}",
                                       "commandSeq": None})
                    continue
                async with lock:
                    session.handle(msg)
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            session.observers.discard(queue)

    @app.get("/api/config")
    async def get_config():
        if session.cfg is None:
            return JSONResponse({"config": None})
        return JSONResponse({"config": scenario_to_dict(session.cfg)})

    @app.get("/api/patterns/{name}/samples")
    async def pattern_samples(name: str, cells: int = 6):
        name = name.lower()
        cells = max(1, min(cells, 9))
        if name not in PATTERNS and name != "rat-membranes":
            return JSONResponse({"error": "unknown pattern"}, status_code=404)
        if name == "rat-membranes":
            words = sorted(generate_rat_membranes(max(cells, 4)),
                           key=lambda w: (len(w), format_word(w)))
        elif name == "rat":
            words = sorted(generate_rat_words(max(cells, 4)),
                           key=lambda w: (len(w), format_word(w)))
        else:
            words = enumerate_members(PATTERNS[name], cells)
        words = words[:50]
        return JSONResponse({"pattern": name, "words": [
            [{"row": r, "col": c, "tag": t}
             for (r, c), t in sorted(w.cells.items())] for w in words]})

    ui = _ui_dir()
    if ui is not None:
        app.mount("/", StaticFiles(directory=str(ui), html=True), name="ui")
    else:
        @app.get("/")
        async def index():
            return HTMLResponse(_FALLBACK_PAGE)

    return app
