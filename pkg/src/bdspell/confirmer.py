"""Temporal confirmation of sign detections.

Per-frame detections are noisy; a sign only counts as spelled once its
running accumulator strictly exceeds the threshold delta. Two
accumulation strategies are supported: ``cumulative_confidence`` adds
the per-frame mean confidence of each detected label, and
``detection_count`` adds the number of detections of that label. After
a confirmation every accumulator is reset to zero so stale evidence
cannot carry a runner-up over the line.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FrameError

STRATEGY_CONFIDENCE = "cumulative_confidence"
STRATEGY_COUNT = "detection_count"
STRATEGIES = (STRATEGY_CONFIDENCE, STRATEGY_COUNT)


@dataclass(frozen=True)
class Detection:
    """Single detection: label, confidence in [0,1], normalized bbox
    [x_min, y_min, width, height]."""

    label: str
    conf: float
    bbox: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    def validate(self):
        if not isinstance(self.label, str) or not self.label:
            raise FrameError("detection label must be a non-empty string")
        if not 0.0 <= self.conf <= 1.0:
            raise FrameError(f"confidence {self.conf} outside [0, 1]")
        x, y, w, h = self.bbox
        for name, v in (("x_min", x), ("y_min", y), ("width", w), ("height", h)):
            if not 0.0 <= v <= 1.0:
                raise FrameError(f"bbox {name}={v} outside [0, 1]")
        if x + w > 1.0 + 1e-9:
            raise FrameError(f"bbox x_min+width={x + w} exceeds 1")
        if y + h > 1.0 + 1e-9:
            raise FrameError(f"bbox y_min+height={y + h} exceeds 1")


@dataclass(frozen=True)
class DetectionFrame:
    """All detections observed at one instant, ``t`` seconds into the session."""

    t: float
    detections: tuple[Detection, ...] = ()

    def validate(self):
        if self.t < 0:
            raise FrameError(f"frame timestamp {self.t} is negative")
        for d in self.detections:
            d.validate()


@dataclass(frozen=True)
class ConfirmConfig:
    """Accumulation strategy, threshold delta, optional per-frame decay."""

    strategy: str = STRATEGY_CONFIDENCE
    delta: float = 50.0
    decay: float = 1.0

    def validate(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if not self.delta > 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        if not 0.0 < self.decay <= 1.0:
            raise ValueError(f"decay must be in (0, 1], got {self.decay}")


@dataclass(frozen=True)
class ConfirmedSymbol:
    """A sign that crossed the threshold: label, accumulator score at the
    crossing, frames consumed since the previous confirmation, and the
    timestamp of the confirming frame."""

    label: str
    score: float
    frames_to_confirm: int
    t: float


@dataclass
class ConfirmState:
    """Mutable per-session accumulator state. Single writer, frame order."""

    config: ConfirmConfig
    acc: dict[str, float] = field(default_factory=dict)
    frames_seen: int = 0
    last_t: float = -1.0

    def __post_init__(self):
        self.config.validate()

    def reset(self):
        self.acc.clear()
        self.frames_seen = 0

    def snapshot(self) -> dict[str, float]:
        """Copy of the non-zero accumulators, for display."""
        return {k: v for k, v in self.acc.items() if v > 0.0}

    def ingest_frame(self, frame: DetectionFrame) -> ConfirmedSymbol | None:
        """Fold one frame into the accumulators.

        Returns the confirmed symbol when exactly after this frame some
        accumulator strictly exceeds delta (ties between labels break
        lexicographically), else None. Malformed frames raise FrameError
        without touching any state.
        """
        frame.validate()
        if frame.t < self.last_t:
            raise FrameError(
                f"frame timestamp {frame.t} is earlier than previous {self.last_t}"
            )

        cfg = self.config
        self.last_t = frame.t
        self.frames_seen += 1

        if cfg.decay != 1.0:
            for label in self.acc:
                self.acc[label] *= cfg.decay

        if frame.detections:
            sums: dict[str, float] = {}
            counts: dict[str, int] = {}
            for d in frame.detections:
                sums[d.label] = sums.get(d.label, 0.0) + d.conf
                counts[d.label] = counts.get(d.label, 0) + 1
            for label, n in counts.items():
                if cfg.strategy == STRATEGY_COUNT:
                    gain = float(n)
                else:
                    gain = sums[label] / n
                self.acc[label] = self.acc.get(label, 0.0) + gain

        winner: str | None = None
        best = -1.0
        for label, score in self.acc.items():
            if score > cfg.delta and (score > best or (score == best and label < winner)):
                winner = label
                best = score
        if winner is None:
            return None

        confirmed = ConfirmedSymbol(
            label=winner,
            score=best,
            frames_to_confirm=self.frames_seen,
            t=frame.t,
        )
        self.reset()
        return confirmed
