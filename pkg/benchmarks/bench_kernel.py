"""Throughput comparison: compiled accumulator kernel vs pure Python.

Generates one large packed detection stream and times both kernels on
identical input, verifying they produce identical confirmations.

Usage::

    python benchmarks/bench_kernel.py [--frames 2000000] [--seed 1]
"""

import argparse
import time

import numpy as np

from bdspell._kernel import HAVE_FAST, pyloop

if HAVE_FAST:
    from bdspell._kernel import _fastloop

N_LABELS = 36


def make_stream(n_frames: int, seed: int):
    rng = np.random.default_rng(seed)
    true_label = rng.integers(0, N_LABELS, n_frames).astype(np.int32)
    has_false = rng.random(n_frames) < 0.25
    n_false = int(has_false.sum())

    frame_idx = np.concatenate([np.arange(n_frames), np.nonzero(has_false)[0]])
    labels = np.concatenate(
        [true_label, rng.integers(0, N_LABELS, n_false).astype(np.int32)]
    )
    confs = np.concatenate(
        [
            np.clip(rng.normal(0.83, 0.05, n_frames), 0, 1),
            rng.uniform(0.0, 0.83, n_false),
        ]
    )
    order = np.argsort(frame_idx, kind="stable")
    frame_idx = frame_idx[order]
    labels = labels[order]
    confs = confs[order]
    starts = np.searchsorted(frame_idx, np.arange(n_frames + 1)).astype(np.int64)
    return labels, confs, starts


def time_kernel(fn, labels, confs, starts, repeats: int = 3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        acc = np.zeros(N_LABELS)
        t0 = time.perf_counter()
        result = fn(labels, confs, starts, acc, 50.0, 1.0, False, 0)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--frames", type=int, default=2_000_000)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    labels, confs, starts = make_stream(args.frames, args.seed)
    n_dets = len(labels)
    print(f"stream: {args.frames:,} frames, {n_dets:,} detections, seed {args.seed}")

    t_pure, out_pure = time_kernel(pyloop.run_stream, labels, confs, starts)
    print(
        f"pure-python : {t_pure:8.3f}s  "
        f"({args.frames / t_pure / 1e6:6.2f} Mframes/s), "
        f"{len(out_pure[0]):,} confirmations"
    )

    if not HAVE_FAST:
        print("compiled    : not built (pip install -e . with a C compiler)")
        return

    t_fast, out_fast = time_kernel(_fastloop.run_stream, labels, confs, starts)
    print(
        f"compiled    : {t_fast:8.3f}s  "
        f"({args.frames / t_fast / 1e6:6.2f} Mframes/s), "
        f"{len(out_fast[0]):,} confirmations"
    )
    assert out_fast == out_pure, "kernels disagree"
    print(f"speedup     : {t_pure / t_fast:8.1f}x (identical results)")


if __name__ == "__main__":
    main()
