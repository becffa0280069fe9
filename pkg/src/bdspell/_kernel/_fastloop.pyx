# cython: language_level=3
"""Compiled accumulator kernel. Contract documented in pyloop.py."""

import numpy as np


def run_stream(det_labels, det_confs, frame_starts, acc, double delta,
               double decay, bint use_count, long frames_seen):
    cdef int[::1] labels = np.ascontiguousarray(det_labels, dtype=np.int32)
    cdef double[::1] confs = np.ascontiguousarray(det_confs, dtype=np.float64)
    cdef long long[::1] starts = np.ascontiguousarray(frame_starts, dtype=np.int64)
    cdef double[::1] acc_v = acc

    cdef Py_ssize_t n_labels = acc_v.shape[0]
    cdef Py_ssize_t n_frames = starts.shape[0] - 1

    cdef double[::1] sums = np.zeros(n_labels, dtype=np.float64)
    cdef int[::1] counts = np.zeros(n_labels, dtype=np.int32)
    cdef int[::1] touched = np.zeros(n_labels, dtype=np.int32)

    cdef Py_ssize_t f, i, ti
    cdef long long d
    cdef int lbl, n_touched, winner
    cdef double v, best

    confirmations = []

    for f in range(n_frames):
        frames_seen += 1
        if decay != 1.0:
            for i in range(n_labels):
                acc_v[i] *= decay

        n_touched = 0
        for d in range(starts[f], starts[f + 1]):
            lbl = labels[d]
            if counts[lbl] == 0:
                touched[n_touched] = lbl
                n_touched += 1
            sums[lbl] += confs[d]
            counts[lbl] += 1
        for ti in range(n_touched):
            lbl = touched[ti]
            if use_count:
                acc_v[lbl] += <double>counts[lbl]
            else:
                acc_v[lbl] += sums[lbl] / counts[lbl]
            sums[lbl] = 0.0
            counts[lbl] = 0

        winner = -1
        best = -1.0
        for i in range(n_labels):
            v = acc_v[i]
            if v > delta and v > best:
                winner = <int>i
                best = v
        if winner >= 0:
            confirmations.append((f, winner, best, frames_seen))
            for i in range(n_labels):
                acc_v[i] = 0.0
            frames_seen = 0

    return confirmations, frames_seen
