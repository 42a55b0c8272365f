import json

import pytest
from starlette.testclient import TestClient

from vorg.engine import ScenarioConfig
from vorg.grid import GridWord
from vorg.organism import Source
from vorg.service import Session, create_app, replay_session


def _cfg(**overrides):
    base = dict(grid_width=6, grid_height=6, ticks=100,
                source_event_prob=0.0,
                initial_word=GridWord({(0, 2): "4", (0, 3): "6", (1, 3): "2"}),
                initial_sources=(Source((3, 1), 200.0),), seed=3)
    base.update(overrides)
    return ScenarioConfig(**base)


class Driver:
    """Scripted client: sends commands, drains all resulting events."""

    def __init__(self, app, ws):
        self.session = app.state.session
        self.ws = ws
        self.seq = 0
        self.events = []

    def send(self, kind, payload=None):
        self.seq += 1
        before = sum(1 for r in self.session.records if r["dir"] == "evt")
        self.ws.send_text(json.dumps({"kind": kind, "seq": self.seq,
                                      "payload": payload or {}}))
        got = [json.loads(self.ws.receive_text())]
        after = sum(1 for r in self.session.records if r["dir"] == "evt")
        while len(got) < after - before:
            got.append(json.loads(self.ws.receive_text()))
            after = sum(1 for r in self.session.records if r["dir"] == "evt")
        self.events.extend(got)
        return got


def test_protocol_conformance():
    app = create_app(_cfg())
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            drv = Driver(app, ws)

            got = drv.send("add_source", {"row": 1, "col": 2, "power": 500})
            ack = got[0]
            assert ack["kind"] == "ack"
            assert ack["payload"]["command"] == "add_source"
            assert ack["payload"]["commandSeq"] == 1
            assert ack["payload"]["effectiveTick"] == 0

            got = drv.send("step", {"n": 3})
            states = [e for e in got if e["kind"] == "tick_state"]
            assert [e["payload"]["tick"] for e in states] == [0, 1, 2]
            sources = states[-1]["payload"]["sources"]
            assert {"id": 1, "row": 1, "col": 2, "power": 500.0} in sources

            got = drv.send("modify_source", {"id": 1, "power": 50})
            assert got[0]["kind"] == "ack"
            assert got[0]["payload"]["effectiveTick"] == 3

            got = drv.send("step", {"n": 1})
            state = [e for e in got if e["kind"] == "tick_state"][-1]
            assert any(s["id"] == 1 and s["power"] == 50.0
                       for s in state["payload"]["sources"])

            got = drv.send("remove_source", {"id": 1})
            assert got[0]["kind"] == "ack"

            got = drv.send("trigger_reconfig")
            assert got[0]["kind"] == "ack"
            got = drv.send("step", {"n": 1})
            kinds = [e["kind"] for e in got]
            assert "reconfig_applied" in kinds or "reconfig_skipped" in kinds

            got = drv.send("get_state")
            assert [e["kind"] for e in got] == ["ack", "tick_state"]

            # events arrive in strict seq and tick order
            seqs = [e["seq"] for e in drv.events]
            assert seqs == sorted(seqs)
            ticks = [e["payload"]["tick"] for e in drv.events
                     if e["kind"] == "tick_state"]
            assert ticks == sorted(ticks)


def test_error_codes():
    app = create_app(_cfg())
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            drv = Driver(app, ws)
            got = drv.send("remove_source", {"id": 77})
            assert got[0]["kind"] == "err"
            assert got[0]["payload"]["code"] == "not-found"
            got = drv.send("add_source", {"row": 99, "col": 0, "power": 5})
            assert got[0]["kind"] == "err"
            assert got[0]["payload"]["code"] == "out-of-bounds"
            got = drv.send("mystery")
            assert got[0]["payload"]["code"] == "bad-request"
            got = drv.send("step", {"n": 0})
            assert got[0]["payload"]["code"] == "bad-request"


def test_cells_in_tick_state_form_the_word():
    from vorg.patterns import TR, accepts_product, accepts_tiling
    app = create_app(_cfg())
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            drv = Driver(app, ws)
            got = drv.send("step", {"n": 5})
            for event in got:
                if event["kind"] != "tick_state":
                    continue
                word = GridWord({(c["row"], c["col"]): c["tag"]
                                 for c in event["payload"]["cells"]})
                assert accepts_tiling(word, TR.automaton)
                assert accepts_product(word, TR)


def test_pause_step_resume_flags():
    app = create_app(_cfg())
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            drv = Driver(app, ws)
            drv.send("pause")
            assert app.state.session.paused
            drv.send("set_speed", {"ticksPerSecond": 40})
            assert app.state.session.speed == 40.0
            drv.send("set_policy", {"policy": "off"})
            assert app.state.session.state.policy == "off"


def test_start_command_resets():
    app = create_app()
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            drv = Driver(app, ws)
            got = drv.send("step")
            assert got[0]["kind"] == "err"  # nothing started yet
            got = drv.send("start", {"config": {
                "gridWidth": 5, "gridHeight": 5, "ticks": 10, "seed": 2,
                "sourceEventProb": 0.0,
                "initialWord": {"pattern": "tr", "cells": 4}}})
            assert got[0]["kind"] == "ack"
            got = drv.send("step", {"n": 2})
            assert [e["payload"]["tick"] for e in got
                    if e["kind"] == "tick_state"] == [0, 1]


def test_session_replay_identical():
    session = Session(_cfg(source_event_prob=0.2, seed=11))
    commands = [
        {"kind": "step", "seq": 1, "payload": {"n": 4}},
        {"kind": "add_source", "seq": 2,
         "payload": {"row": 4, "col": 4, "power": 333.0}},
        {"kind": "step", "seq": 3, "payload": {"n": 3}},
        {"kind": "trigger_reconfig", "seq": 4, "payload": {}},
        {"kind": "step", "seq": 5, "payload": {"n": 2}},
        {"kind": "get_state", "seq": 6, "payload": {}},
        {"kind": "step", "seq": 7, "payload": {"n": 2}},
    ]
    for cmd in commands:
        session.handle(cmd)
    lines = [json.dumps(r, sort_keys=True) for r in session.records]
    ok, message = replay_session(lines)
    assert ok, message


def test_pattern_samples_endpoint():
    app = create_app(_cfg())
    with TestClient(app) as client:
        resp = client.get("/api/patterns/rat-membranes/samples?cells=4")
        data = resp.json()
        assert resp.status_code == 200
        assert len(data["words"]) == 2
        resp = client.get("/api/patterns/nonesuch/samples")
        assert resp.status_code == 404


def test_config_endpoint():
    app = create_app(_cfg())
    with TestClient(app) as client:
        data = client.get("/api/config").json()
        assert data["config"]["gridWidth"] == 6
