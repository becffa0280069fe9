"""Pure-Python accumulator kernel.

Same packed-stream contract as the compiled kernel in ``_fastloop.pyx``;
results are bit-identical (both run the IEEE double operations in the
same order). Selected at import time when the extension is unavailable
or BDSPELL_PURE=1.

Packed stream layout: detections of frame ``f`` occupy
``det_labels[frame_starts[f]:frame_starts[f+1]]`` (label indices into a
lexicographically sorted label list, so smallest index == smallest
label) and the parallel ``det_confs`` slice.
"""

from __future__ import annotations


def run_stream(det_labels, det_confs, frame_starts, acc, delta, decay,
               use_count, frames_seen):
    """Fold packed frames into ``acc`` (mutated in place).

    Returns ``(confirmations, frames_seen)`` where each confirmation is
    ``(frame_index, label_index, score, frames_to_confirm)``. All
    accumulators are zeroed after each confirmation.
    """
    labels = det_labels.tolist() if hasattr(det_labels, "tolist") else list(det_labels)
    confs = det_confs.tolist() if hasattr(det_confs, "tolist") else list(det_confs)
    starts = frame_starts.tolist() if hasattr(frame_starts, "tolist") else list(frame_starts)
    n_labels = len(acc)
    n_frames = len(starts) - 1

    sums = [0.0] * n_labels
    counts = [0] * n_labels
    local_acc = [float(a) for a in acc]
    confirmations = []

    for f in range(n_frames):
        frames_seen += 1
        if decay != 1.0:
            for i in range(n_labels):
                local_acc[i] *= decay

        touched = []
        for d in range(starts[f], starts[f + 1]):
            lbl = labels[d]
            if counts[lbl] == 0:
                touched.append(lbl)
            sums[lbl] += confs[d]
            counts[lbl] += 1
        for lbl in touched:
            if use_count:
                local_acc[lbl] += float(counts[lbl])
            else:
                local_acc[lbl] += sums[lbl] / counts[lbl]
            sums[lbl] = 0.0
            counts[lbl] = 0

        winner = -1
        best = -1.0
        for i in range(n_labels):
            v = local_acc[i]
            if v > delta and v > best:
                winner = i
                best = v
        if winner >= 0:
            confirmations.append((f, winner, best, frames_seen))
            for i in range(n_labels):
                local_acc[i] = 0.0
            frames_seen = 0

    for i in range(n_labels):
        acc[i] = local_acc[i]
    return confirmations, frames_seen
