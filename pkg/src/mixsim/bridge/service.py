"""Live session service: one simulation, one operator, over a WebSocket.

The tick loop runs on its own thread at ``dt / realtime_factor`` wall
seconds per tick; network reception only appends to the command queue and
the queue is drained at each tick boundary in arrival order, so a live
session is governed by exactly the same code path as headless trials and
its recorded command log replays to an identical decision log.
"""

import asyncio
import json
import threading
import time
from collections import deque
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from ..commands import Command
from ..harness.report import command_log_rows, decision_log_rows, write_jsonl
from ..harness.scenario import Scenario
from ..harness.trial import RUNNING, STOPPED, TrialRunner
from .protocol import (
    CONTROL_PAUSE,
    CONTROL_RESET,
    CONTROL_RESUME,
    ProtocolError,
    ack_message,
    decode_message,
    error_message,
    hello_message,
    telemetry_message,
)

PAUSED = "paused"
TELEMETRY_QUEUE_LIMIT = 512


class LiveSession:
    """Owns the runner thread; the WebSocket side talks to it through
    the command queue and a telemetry callback."""

    def __init__(self, scenario: Scenario, realtime_factor: float = 1.0, out_dir=None):
        if realtime_factor <= 0:
            raise ValueError("realtime_factor must be positive")
        self.scenario = scenario
        self.runner = TrialRunner(scenario)
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.interval = scenario.dt / realtime_factor
        self.paused = False
        self._queue: deque[Command] = deque()
        self._lock = threading.Lock()
        self._stop = threading.Event()
        self._reset_requested = False
        self._telemetry_sink = None
        self._prev_occ = None
        self._thread = threading.Thread(target=self._loop, name="mixsim-session", daemon=True)
        self.logs_written = threading.Event()

    # -- called from the network side --------------------------------
    def start(self, telemetry_sink) -> None:
        self._telemetry_sink = telemetry_sink
        self._thread.start()

    def enqueue(self, cmd: Command) -> None:
        with self._lock:
            self._queue.append(cmd)

    def control(self, name: str) -> None:
        if name == CONTROL_PAUSE:
            self.paused = True
            self._emit(self.runner.snapshot(), status=PAUSED)
        elif name == CONTROL_RESUME:
            self.paused = False
        elif name == CONTROL_RESET:
            self._reset_requested = True

    def stop(self) -> None:
        self._stop.set()
        self._thread.join(timeout=10.0)

    # -- tick thread --------------------------------------------------
    def _drain(self) -> list[Command]:
        with self._lock:
            cmds = list(self._queue)
            self._queue.clear()
        return cmds

    def _emit(self, snap, status=None) -> None:
        msg, self._prev_occ = telemetry_message(snap, self._prev_occ, status=status)
        if self._telemetry_sink is not None:
            self._telemetry_sink(json.dumps(msg, allow_nan=False))

    def _write_logs(self) -> None:
        if self.out_dir is not None and self.runner.k > 0:
            write_jsonl(self.out_dir / "decision_log.jsonl", decision_log_rows(self.runner))
            write_jsonl(self.out_dir / "command_log.jsonl", command_log_rows(self.runner))
        self.logs_written.set()

    def _loop(self) -> None:
        next_deadline = time.perf_counter()
        while not self._stop.is_set():
            if self._reset_requested:
                self._reset_requested = False
                self._write_logs()
                self.logs_written.clear()
                self.runner = TrialRunner(self.scenario)
                self._prev_occ = None
                self.paused = False
                next_deadline = time.perf_counter()
            if self.paused:
                time.sleep(min(self.interval, 0.02))
                next_deadline = time.perf_counter()
                continue
            if self.runner.finished:
                time.sleep(min(self.interval, 0.02))
                continue
            snap = self.runner.step_tick(self._drain())
            self._emit(snap)
            next_deadline += self.interval
            delay = next_deadline - time.perf_counter()
            if delay > 0:
                time.sleep(delay)
            else:
                next_deadline = time.perf_counter()
        if self.runner.status == RUNNING:
            self.runner.status = STOPPED
        self._write_logs()


def create_app(scenario: Scenario, realtime_factor: float = 1.0, out_dir=None) -> FastAPI:
    app = FastAPI(title="mixsim bridge")
    app.state.session = None

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        if app.state.session is not None:
            await ws.send_text(json.dumps(error_message("session already in use")))
            await ws.close()
            return
        session = LiveSession(scenario, realtime_factor=realtime_factor, out_dir=out_dir)
        app.state.session = session
        loop = asyncio.get_running_loop()
        outbox: asyncio.Queue[str] = asyncio.Queue()

        def sink(text: str) -> None:
            def put():
                while outbox.qsize() >= TELEMETRY_QUEUE_LIMIT:
                    try:
                        outbox.get_nowait()
                    except asyncio.QueueEmpty:
                        break
                outbox.put_nowait(text)

            loop.call_soon_threadsafe(put)

        async def pump():
            while True:
                await ws.send_text(await outbox.get())

        session.start(sink)
        await ws.send_text(json.dumps(hello_message(session.runner)))
        pump_task = asyncio.create_task(pump())
        try:
            while True:
                text = await ws.receive_text()
                try:
                    decoded = decode_message(
                        text,
                        scenario.limits,
                        session.runner.robot.active_loa,
                        session.runner.belief.occupancy(),
                    )
                except ProtocolError as e:
                    await ws.send_text(json.dumps(error_message(str(e))))
                    continue
                if decoded.kind == "control":
                    session.control(decoded.control)
                    await ws.send_text(json.dumps(ack_message(decoded.control, decoded.seq)))
                    continue
                if decoded.ignored_reason is not None:
                    await ws.send_text(
                        json.dumps(
                            ack_message(
                                json.loads(text).get("type", "?"),
                                decoded.seq,
                                ok=decoded.command is not None,
                                ignored=True,
                                clamped=decoded.clamped,
                                reason=decoded.ignored_reason,
                            )
                        )
                    )
                    continue
                session.enqueue(decoded.command)
                await ws.send_text(
                    json.dumps(
                        ack_message(
                            json.loads(text)["type"],
                            decoded.seq,
                            clamped=decoded.clamped,
                        )
                    )
                )
        except WebSocketDisconnect:
            pass
        finally:
            pump_task.cancel()
            session.stop()
            app.state.session = None

    return app


def serve(
    scenario: Scenario,
    host: str = "127.0.0.1",
    port: int = 8765,
    realtime_factor: float = 1.0,
    out_dir=None,
) -> None:
    import uvicorn

    app = create_app(scenario, realtime_factor=realtime_factor, out_dir=out_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
