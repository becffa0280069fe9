"""Wire schemas: frame messages, JSONL traces, session messages.

One frame message per line; a trace file may carry a single header line
``{"profile": ...}`` for provenance before the frames. The same frame
schema travels over the streaming session endpoint.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator

from .confirmer import Detection, DetectionFrame
from .errors import WireError

MSG_FRAME = "frame"
MSG_SET_CONFIG = "set_config"
MSG_RESET = "reset"
MSG_CONFIRMED = "confirmed"
MSG_COMPOSE_EVENT = "compose_event"
MSG_ACCUMULATORS = "accumulators"
MSG_ERROR = "error"


def frame_to_dict(frame: DetectionFrame) -> dict:
    return {
        "type": MSG_FRAME,
        "t": frame.t,
        "detections": [
            {"label": d.label, "conf": d.conf, "bbox": list(d.bbox)}
            for d in frame.detections
        ],
    }


def frame_from_dict(doc: dict, line_no: int | None = None) -> DetectionFrame:
    """Parse and structurally validate one frame message."""
    if not isinstance(doc, dict) or doc.get("type") != MSG_FRAME:
        raise WireError("message is not a frame", line_no)
    t = doc.get("t")
    if not isinstance(t, (int, float)):
        raise WireError(f"frame timestamp must be a number, got {t!r}", line_no)
    raw = doc.get("detections", [])
    if not isinstance(raw, list):
        raise WireError("detections must be a list", line_no)
    detections = []
    for i, d in enumerate(raw):
        if not isinstance(d, dict):
            raise WireError(f"detections[{i}] must be an object", line_no)
        label = d.get("label")
        conf = d.get("conf")
        bbox = d.get("bbox", [0.0, 0.0, 0.0, 0.0])
        if not isinstance(label, str):
            raise WireError(f"detections[{i}].label must be a string", line_no)
        if not isinstance(conf, (int, float)):
            raise WireError(f"detections[{i}].conf must be a number", line_no)
        if not (isinstance(bbox, list) and len(bbox) == 4
                and all(isinstance(v, (int, float)) for v in bbox)):
            raise WireError(f"detections[{i}].bbox must be four numbers", line_no)
        detections.append(Detection(label, float(conf), tuple(float(v) for v in bbox)))
    return DetectionFrame(t=float(t), detections=tuple(detections))


def write_trace(path: str | Path, frames: Iterable[DetectionFrame],
                header: dict | None = None):
    """Write a JSONL trace, optionally prefixed with a provenance header."""
    with open(path, "w", encoding="utf-8") as fh:
        if header is not None:
            fh.write(json.dumps(header, ensure_ascii=False) + "\n")
        for frame in frames:
            fh.write(json.dumps(frame_to_dict(frame), ensure_ascii=False) + "\n")


def iter_trace_lines(lines: Iterable[str]) -> Iterator[DetectionFrame]:
    """Yield frames from JSONL lines, skipping a header and blank lines.

    Malformed lines raise WireError naming the 1-based line number.
    """
    for line_no, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise WireError(f"line {line_no}: invalid JSON: {exc}", line_no) from exc
        if not isinstance(doc, dict):
            raise WireError(f"line {line_no}: expected an object", line_no)
        if "type" not in doc and line_no == 1:
            continue  # provenance header
        if doc.get("type") != MSG_FRAME:
            raise WireError(
                f"line {line_no}: unexpected message type {doc.get('type')!r}", line_no
            )
        yield frame_from_dict(doc, line_no)


def read_trace_header(path: str | Path) -> dict | None:
    """Return the provenance header of a trace file, if present."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().strip()
    if not first:
        return None
    try:
        doc = json.loads(first)
    except json.JSONDecodeError:
        return None
    if isinstance(doc, dict) and "type" not in doc:
        return doc
    return None
