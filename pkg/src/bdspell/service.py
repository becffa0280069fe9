"""Session layer: confirmer + composer behind a message protocol.

A Session owns one ConfirmState and one ComposerState and turns inbound
wire messages (frame / set_config / reset) into outbound ones
(confirmed / compose_event / accumulators / error). Frames are
processed strictly in arrival order; distinct sessions are independent.

Config changes are staged: they take effect at the next accumulator
reset (a confirmation or an explicit reset), never mid-accumulation, so
every confirmation is judged against a single threshold regime.
"""

from __future__ import annotations

import itertools
import time
import uuid
from dataclasses import dataclass, field

from .alphabet import RuleSet
from .composer import ComposerState
from .confirmer import STRATEGIES, ConfirmConfig, ConfirmState, DetectionFrame
from .errors import BdspellError, FrameError, UnknownLabelError, WireError
from .wire import (
    MSG_ACCUMULATORS,
    MSG_COMPOSE_EVENT,
    MSG_CONFIRMED,
    MSG_ERROR,
    MSG_FRAME,
    MSG_RESET,
    MSG_SET_CONFIG,
    frame_from_dict,
)

#: Emit an accumulators snapshot at most every K unconfirmed frames.
SNAPSHOT_EVERY = 5

#: Sessions idle longer than this are reaped (seconds).
IDLE_TIMEOUT_S = 600.0


@dataclass
class Session:
    """One live spelling session; single-writer, frame-arrival order."""

    id: str
    rules: RuleSet
    confirm_state: ConfirmState
    composer_state: ComposerState
    created_at: float = field(default_factory=time.monotonic)
    last_seen: float = field(default_factory=time.monotonic)
    snapshot_every: int = SNAPSHOT_EVERY
    pending_config: ConfirmConfig | None = None
    frames_since_snapshot: int = 0

    # -- operations ----------------------------------------------------

    def feed(self, frame: DetectionFrame) -> list[dict]:
        """Process one frame; returns outbound messages in order."""
        self.last_seen = time.monotonic()
        confirmed = self.confirm_state.ingest_frame(frame)
        if confirmed is None:
            self.frames_since_snapshot += 1
            if self.frames_since_snapshot >= self.snapshot_every:
                self.frames_since_snapshot = 0
                return [self._accumulators_msg()]
            return []

        self.frames_since_snapshot = 0
        self._apply_pending_config()
        out = [
            {
                "type": MSG_CONFIRMED,
                "label": confirmed.label,
                "score": confirmed.score,
                "frames": confirmed.frames_to_confirm,
                "t": confirmed.t,
            }
        ]
        try:
            events = self.composer_state.apply_label(confirmed.label)
        except UnknownLabelError as exc:
            out.append({"type": MSG_ERROR, "reason": str(exc)})
            return out
        for ev in events:
            out.append(
                {
                    "type": MSG_COMPOSE_EVENT,
                    "kind": ev.kind,
                    "detail": ev.detail,
                    "buffer_text": ev.buffer_text,
                    "mode": ev.mode,
                }
            )
        out.append(self._accumulators_msg())
        return out

    def set_config(self, config: ConfirmConfig):
        """Stage a new confirmation config; applied at the next reset."""
        config.validate()
        self.pending_config = config
        if not self.confirm_state.acc:
            self._apply_pending_config()

    def reset(self):
        self.confirm_state.reset()
        self._apply_pending_config()
        self.composer_state.reset()
        self.frames_since_snapshot = 0

    def handle_message(self, doc: dict) -> list[dict]:
        """Dispatch one inbound wire message. Errors never mutate state."""
        self.last_seen = time.monotonic()
        if not isinstance(doc, dict):
            return [{"type": MSG_ERROR, "reason": "message must be an object"}]
        kind = doc.get("type")
        try:
            if kind == MSG_FRAME:
                return self.feed(frame_from_dict(doc))
            if kind == MSG_SET_CONFIG:
                self.set_config(self._config_from(doc))
                return [{"type": "ack", "staged": bool(self.pending_config)}]
            if kind == MSG_RESET:
                self.reset()
                return [{"type": "ack", "staged": False}]
        except (WireError, FrameError, ValueError, BdspellError) as exc:
            return [{"type": MSG_ERROR, "reason": str(exc)}]
        return [{"type": MSG_ERROR, "reason": f"unknown message type {kind!r}"}]

    def buffer_text(self) -> str:
        return self.composer_state.render()

    # -- internals -----------------------------------------------------

    def _config_from(self, doc: dict) -> ConfirmConfig:
        current = self.pending_config or self.confirm_state.config
        strategy = doc.get("strategy", current.strategy)
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        delta = doc.get("delta", current.delta)
        if not isinstance(delta, (int, float)):
            raise ValueError("delta must be a number")
        decay = doc.get("decay", current.decay)
        return ConfirmConfig(strategy=strategy, delta=float(delta), decay=float(decay))

    def _apply_pending_config(self):
        if self.pending_config is not None:
            self.confirm_state.config = self.pending_config
            self.pending_config = None

    def _accumulators_msg(self) -> dict:
        return {
            "type": MSG_ACCUMULATORS,
            "scores": {
                k: round(v, 6) for k, v in self.confirm_state.snapshot().items()
            },
        }


class SessionManager:
    """Open/lookup/expire sessions. In-memory only; traces are the
    persistence story, not session state."""

    def __init__(self, rules: RuleSet, idle_timeout_s: float = IDLE_TIMEOUT_S):
        self.rules = rules
        self.idle_timeout_s = idle_timeout_s
        self._sessions: dict[str, Session] = {}
        self._counter = itertools.count(1)

    def open_session(self, config: ConfirmConfig | None = None,
                     snapshot_every: int = SNAPSHOT_EVERY) -> Session:
        config = config or ConfirmConfig()
        config.validate()
        session = Session(
            id=f"s{next(self._counter):04d}-{uuid.uuid4().hex[:8]}",
            rules=self.rules,
            confirm_state=ConfirmState(config=config),
            composer_state=ComposerState(rules=self.rules),
            snapshot_every=snapshot_every,
        )
        self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        self.expire_idle()
        try:
            return self._sessions[session_id]
        except KeyError:
            raise KeyError(f"unknown session {session_id!r}") from None

    def close(self, session_id: str):
        self._sessions.pop(session_id, None)

    def expire_idle(self):
        now = time.monotonic()
        dead = [
            sid
            for sid, s in self._sessions.items()
            if now - s.last_seen > self.idle_timeout_s
        ]
        for sid in dead:
            del self._sessions[sid]

    def count(self) -> int:
        return len(self._sessions)
