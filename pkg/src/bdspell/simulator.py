"""Synthetic detector front end.

Stands in for the camera + object-detection model: turns a spelling
plan into a timed, optionally noisy stream of detection frames, replays
recorded traces, and runs the threshold-grid benchmark (accuracy and
frames-to-confirm per threshold and strategy).

Default profile numbers are reverse-derived from the reference
measurements: about 60 frames per character at 1.32 s gives roughly 45
fps with a mean confidence near 50/60 = 0.83.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace

import numpy as np

from ._kernel import run_stream
from .alphabet import RuleSet
from .confirmer import (
    STRATEGIES,
    STRATEGY_COUNT,
    ConfirmConfig,
    Detection,
    DetectionFrame,
)
from .planner import SpellingPlan
from .wire import iter_trace_lines

#: Blank frames inserted between characters, modelling hand transition.
GAP_FRAMES = 10


@dataclass(frozen=True)
class SensorProfile:
    """Noise and timing model of the simulated signer + detector."""

    fps: float = 45.0
    hold_frames: int = 70
    conf_mean: float = 0.83
    conf_std: float = 0.05
    false_rate: float = 0.0
    miss_rate: float = 0.0
    seed: int = 0

    def validate(self):
        if not self.fps > 0:
            raise ValueError(f"fps must be > 0, got {self.fps}")
        if self.hold_frames < 1:
            raise ValueError(f"hold_frames must be >= 1, got {self.hold_frames}")
        if not 0.0 <= self.conf_mean <= 1.0:
            raise ValueError(f"conf_mean {self.conf_mean} outside [0, 1]")
        if self.conf_std < 0:
            raise ValueError(f"conf_std must be >= 0, got {self.conf_std}")
        for name, rate in (("false_rate", self.false_rate), ("miss_rate", self.miss_rate)):
            if not 0.0 <= rate < 1.0:
                raise ValueError(f"{name} {rate} outside [0, 1)")

    def noiseless(self) -> "SensorProfile":
        """Copy with every noise source switched off (confidence pinned)."""
        return replace(self, conf_std=0.0, false_rate=0.0, miss_rate=0.0)

    def to_dict(self) -> dict:
        return {
            "fps": self.fps,
            "hold_frames": self.hold_frames,
            "conf_mean": self.conf_mean,
            "conf_std": self.conf_std,
            "false_rate": self.false_rate,
            "miss_rate": self.miss_rate,
            "seed": self.seed,
        }


#: Profile used by the benchmark when none is given: the plain defaults
#: plus mild detector noise.
DEFAULT_NOISY = SensorProfile(false_rate=0.25, miss_rate=0.05, seed=7)


@dataclass
class Trace:
    """Simulated detection stream plus its provenance."""

    profile: SensorProfile
    frames: list[DetectionFrame]
    plan: SpellingPlan | None = None

    def header(self) -> dict:
        doc = {"profile": self.profile.to_dict()}
        if self.plan is not None:
            doc["plan"] = self.plan.to_dict()
        return doc


def simulate(plan: SpellingPlan, profile: SensorProfile, rules: RuleSet) -> Trace:
    """Emit ``hold_frames`` frames per planned label, with gap frames between.

    The true detection carries a truncated-normal confidence and a
    jittered bbox; with probability ``false_rate`` a frame gains an
    extra detection of a uniformly random class at a confidence below
    ``conf_mean``. Deterministic for a given seed.
    """
    profile.validate()
    rng = random.Random(profile.seed)
    labels = rules.labels()
    dt = 1.0 / profile.fps
    frames: list[DetectionFrame] = []

    def true_conf() -> float:
        if profile.conf_std == 0.0:
            return profile.conf_mean
        return min(1.0, max(0.0, rng.gauss(profile.conf_mean, profile.conf_std)))

    def jitter_bbox() -> tuple[float, float, float, float]:
        x = 0.35 + rng.uniform(-0.02, 0.02)
        y = 0.30 + rng.uniform(-0.02, 0.02)
        return (x, y, 0.30, 0.35)

    t = 0.0
    for i, label in enumerate(plan.labels):
        if i > 0:
            for _ in range(GAP_FRAMES):
                frames.append(DetectionFrame(t=t))
                t += dt
        for _ in range(profile.hold_frames):
            dets: list[Detection] = []
            if profile.miss_rate == 0.0 or rng.random() >= profile.miss_rate:
                dets.append(Detection(label, true_conf(), jitter_bbox()))
            if profile.false_rate > 0.0 and rng.random() < profile.false_rate:
                dets.append(
                    Detection(
                        rng.choice(labels),
                        rng.uniform(0.0, profile.conf_mean),
                        jitter_bbox(),
                    )
                )
            frames.append(DetectionFrame(t=t, detections=tuple(dets)))
            t += dt
    return Trace(profile=profile, frames=frames, plan=plan)


def replay(path, pace: bool = False):
    """Yield frames from a JSONL trace file.

    With ``pace`` the generator sleeps out the recorded inter-frame
    deltas; otherwise frames come as fast as they are consumed.
    """
    with open(path, "r", encoding="utf-8") as fh:
        prev_t = None
        for frame in iter_trace_lines(fh):
            if pace and prev_t is not None and frame.t > prev_t:
                time.sleep(frame.t - prev_t)
            prev_t = frame.t
            yield frame


def replay_all(path) -> list[DetectionFrame]:
    return list(replay(path, pace=False))


# -- threshold-grid benchmark ----------------------------------------


@dataclass(frozen=True)
class BenchCell:
    delta: float
    strategy: str
    characters: int
    correct: int
    wrong: int
    unconfirmed: int
    mean_frames: float
    mean_latency_s: float

    @property
    def accuracy(self) -> float:
        return self.correct / self.characters if self.characters else 0.0

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "strategy": self.strategy,
            "characters": self.characters,
            "correct": self.correct,
            "wrong": self.wrong,
            "unconfirmed": self.unconfirmed,
            "accuracy": self.accuracy,
            "mean_frames": self.mean_frames,
            "mean_latency_s": self.mean_latency_s,
        }


@dataclass
class BenchReport:
    profile: SensorProfile
    seed: int
    characters: int
    cells: list[BenchCell] = field(default_factory=list)

    def cell(self, delta: float, strategy: str) -> BenchCell:
        for c in self.cells:
            if c.delta == delta and c.strategy == strategy:
                return c
        raise KeyError((delta, strategy))

    def to_dict(self) -> dict:
        return {
            "profile": self.profile.to_dict(),
            "seed": self.seed,
            "characters": self.characters,
            "cells": [c.to_dict() for c in self.cells],
        }

    def format_table(self) -> str:
        head = f"{'delta':>7} {'strategy':<22} {'accuracy':>9} {'frames':>8} {'latency':>9}"
        lines = [head, "-" * len(head)]
        for c in self.cells:
            lines.append(
                f"{c.delta:>7g} {c.strategy:<22} {c.accuracy:>8.2%} "
                f"{c.mean_frames:>8.2f} {c.mean_latency_s:>8.3f}s"
            )
        return "\n".join(lines)


def _simulate_character_batch(rng, true_idx: int, n_frames: int, n_labels: int,
                              profile: SensorProfile):
    """Vectorized frame batch for one held character, packed for the kernel."""
    keep = rng.random(n_frames) >= profile.miss_rate
    if profile.conf_std == 0.0:
        true_confs = np.full(n_frames, profile.conf_mean)
    else:
        true_confs = np.clip(
            rng.normal(profile.conf_mean, profile.conf_std, n_frames), 0.0, 1.0
        )
    has_false = rng.random(n_frames) < profile.false_rate
    false_labels = rng.integers(0, n_labels, n_frames)
    false_confs = rng.uniform(0.0, max(profile.conf_mean, 1e-9), n_frames)

    frame_idx = np.concatenate([np.nonzero(keep)[0], np.nonzero(has_false)[0]])
    labels = np.concatenate(
        [
            np.full(int(keep.sum()), true_idx, dtype=np.int32),
            false_labels[has_false].astype(np.int32),
        ]
    )
    confs = np.concatenate([true_confs[keep], false_confs[has_false]])

    order = np.argsort(frame_idx, kind="stable")
    frame_idx = frame_idx[order]
    labels = labels[order]
    confs = confs[order]
    starts = np.searchsorted(frame_idx, np.arange(n_frames + 1)).astype(np.int64)
    return labels, confs, starts


def bench(plans: list[SpellingPlan], deltas: list[float],
          strategies: list[str] | None, profile: SensorProfile,
          rules: RuleSet, min_characters: int = 0) -> BenchReport:
    """Accuracy / frames-to-confirm grid over (delta, strategy) cells.

    Each planned label is held (closed loop, as a live signer would)
    until its first confirmation or a frame cap; the confirmed label is
    scored against the planned one. Fixed seed, per-cell PRNG
    substreams, reproducible.
    """
    profile.validate()
    if strategies is None:
        strategies = list(STRATEGIES)
    labels_sorted = sorted(rules.labels())
    label_idx = {lbl: i for i, lbl in enumerate(labels_sorted)}
    n_labels = len(labels_sorted)

    characters: list[int] = []
    for p in plans:
        characters.extend(label_idx[lbl] for lbl in p.labels)
    while min_characters and len(characters) < min_characters:
        characters.extend(characters[: min_characters - len(characters)])

    report = BenchReport(profile=profile, seed=profile.seed, characters=len(characters))
    cap = max(profile.hold_frames * 4, 240)

    for d_i, delta in enumerate(deltas):
        for s_i, strategy in enumerate(strategies):
            config = ConfirmConfig(strategy=strategy, delta=delta)
            config.validate()
            use_count = strategy == STRATEGY_COUNT
            rng = np.random.default_rng([profile.seed, d_i, s_i])
            correct = wrong = unconfirmed = 0
            frames_sum = 0
            for true_idx in characters:
                det_labels, det_confs, starts = _simulate_character_batch(
                    rng, true_idx, cap, n_labels, profile
                )
                acc = np.zeros(n_labels)
                confirmations, _ = run_stream(
                    det_labels, det_confs, starts, acc, float(delta), 1.0,
                    use_count, 0,
                )
                if not confirmations:
                    unconfirmed += 1
                    continue
                _, winner, _, frames = confirmations[0]
                if winner == true_idx:
                    correct += 1
                    frames_sum += frames
                else:
                    wrong += 1
            mean_frames = frames_sum / correct if correct else float("nan")
            report.cells.append(
                BenchCell(
                    delta=delta,
                    strategy=strategy,
                    characters=len(characters),
                    correct=correct,
                    wrong=wrong,
                    unconfirmed=unconfirmed,
                    mean_frames=mean_frames,
                    mean_latency_s=mean_frames / profile.fps,
                )
            )
    return report
