"""Cross-checks between the three confirmation paths: the per-frame
reference (ConfirmState), the pure-Python packed kernel, and the
compiled packed kernel when built. All must agree bit for bit."""

import random

import numpy as np
import pytest

from bdspell._kernel import HAVE_FAST, pyloop
from bdspell.confirmer import (
    STRATEGY_COUNT,
    ConfirmConfig,
    ConfirmState,
    Detection,
    DetectionFrame,
)

if HAVE_FAST:
    from bdspell._kernel import _fastloop

LABELS = sorted(["ka", "kha", "ma", "na", "ta", "ra"])
IDX = {lbl: i for i, lbl in enumerate(LABELS)}


def random_stream(seed: int, n_frames: int):
    rng = random.Random(seed)
    frames = []
    for _ in range(n_frames):
        dets = [
            (rng.choice(LABELS), rng.uniform(0.0, 1.0))
            for _ in range(rng.randint(0, 3))
        ]
        frames.append(dets)
    return frames


def pack(frames):
    labels, confs, starts = [], [], [0]
    for dets in frames:
        for lbl, conf in dets:
            labels.append(IDX[lbl])
            confs.append(conf)
        starts.append(len(labels))
    return (
        np.asarray(labels, dtype=np.int32),
        np.asarray(confs, dtype=np.float64),
        np.asarray(starts, dtype=np.int64),
    )


def reference_confirmations(frames, delta, decay, strategy):
    state = ConfirmState(config=ConfirmConfig(strategy=strategy, delta=delta, decay=decay))
    out = []
    t = 0.0
    for f_idx, dets in enumerate(frames):
        t += 0.01
        frame = DetectionFrame(
            t=t, detections=tuple(Detection(lbl, conf) for lbl, conf in dets)
        )
        sym = state.ingest_frame(frame)
        if sym is not None:
            out.append((f_idx, IDX[sym.label], sym.score, sym.frames_to_confirm))
    return out


@pytest.mark.parametrize("seed", [1, 2, 3, 7, 11])
@pytest.mark.parametrize("delta,decay,strategy", [
    (3.0, 1.0, "cumulative_confidence"),
    (5.0, 0.9, "cumulative_confidence"),
    (4.0, 1.0, STRATEGY_COUNT),
])
def test_pyloop_matches_reference(seed, delta, decay, strategy):
    frames = random_stream(seed, 400)
    det_labels, det_confs, starts = pack(frames)
    acc = np.zeros(len(LABELS))
    got, _ = pyloop.run_stream(
        det_labels, det_confs, starts, acc, delta, decay,
        strategy == STRATEGY_COUNT, 0,
    )
    expected = reference_confirmations(frames, delta, decay, strategy)
    assert got == expected  # includes exact float equality on scores


@pytest.mark.skipif(not HAVE_FAST, reason="compiled kernel not built")
@pytest.mark.parametrize("seed", [1, 5, 9])
@pytest.mark.parametrize("delta,decay,use_count", [
    (3.0, 1.0, False),
    (5.0, 0.9, False),
    (4.0, 1.0, True),
])
def test_fastloop_matches_pyloop(seed, delta, decay, use_count):
    frames = random_stream(seed, 600)
    det_labels, det_confs, starts = pack(frames)
    acc_a = np.zeros(len(LABELS))
    acc_b = np.zeros(len(LABELS))
    got_fast, seen_fast = _fastloop.run_stream(
        det_labels, det_confs, starts, acc_a, delta, decay, use_count, 0
    )
    got_pure, seen_pure = pyloop.run_stream(
        det_labels, det_confs, starts, acc_b, delta, decay, use_count, 0
    )
    assert got_fast == got_pure
    assert seen_fast == seen_pure
    assert acc_a.tolist() == acc_b.tolist()


def test_carried_state_across_batches():
    frames = random_stream(21, 200)
    det_labels, det_confs, starts = pack(frames)

    acc_full = np.zeros(len(LABELS))
    full, seen_full = pyloop.run_stream(
        det_labels, det_confs, starts, acc_full, 6.0, 1.0, False, 0
    )

    # same stream split at an arbitrary frame boundary
    split = 77
    det_split = starts[split]
    acc_parts = np.zeros(len(LABELS))
    first, seen = pyloop.run_stream(
        det_labels[:det_split], det_confs[:det_split], starts[: split + 1],
        acc_parts, 6.0, 1.0, False, 0,
    )
    second, seen = pyloop.run_stream(
        det_labels[det_split:], det_confs[det_split:],
        (starts[split:] - det_split), acc_parts, 6.0, 1.0, False, seen,
    )
    merged = first + [(f + split, lbl, score, frames) for f, lbl, score, frames in second]
    assert merged == full
    assert seen == seen_full
    assert acc_parts.tolist() == acc_full.tolist()
