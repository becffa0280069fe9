"""Object-detection evaluation toolkit.

IoU, score thresholding, greedy score-ordered matching with single-use
ground truths, precision/recall curves, all-point interpolated average
precision, mAP over an IoU-threshold grid, and F1-confidence curves.

Matching protocol: predictions are visited in descending score order;
each one claims the highest-IoU still-unclaimed ground truth of the
same class in the same image, provided the IoU reaches the threshold.
Claimed by none, a ground truth counts as a false negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

DEFAULT_IOU_GRID = tuple(round(0.5 + 0.05 * i, 2) for i in range(10))


@dataclass(frozen=True)
class Box:
    """Axis-aligned box, [x_min, y_min, width, height]; any consistent unit."""

    x_min: float
    y_min: float
    width: float
    height: float

    def validate(self):
        if self.width < 0 or self.height < 0:
            raise ValueError(f"negative box extent: {self}")

    @property
    def area(self) -> float:
        return self.width * self.height

    @classmethod
    def from_list(cls, values) -> "Box":
        if len(values) != 4:
            raise ValueError(f"box needs 4 numbers, got {len(values)}")
        box = cls(*(float(v) for v in values))
        box.validate()
        return box


@dataclass(frozen=True)
class GroundTruth:
    image_id: str
    class_label: str
    box: Box


@dataclass(frozen=True)
class Prediction:
    image_id: str
    class_label: str
    box: Box
    score: float


@dataclass(frozen=True)
class PRPoint:
    """One point of a precision-recall curve with its raw counts."""

    threshold: float
    precision: float
    recall: float
    tp: int
    fp: int
    fn: int


@dataclass(frozen=True)
class MatchResult:
    tp: int
    fp: int
    fn: int
    #: (prediction, is_true_positive) in descending-score visit order.
    flags: tuple[tuple[Prediction, bool], ...]


def iou(a: Box, b: Box) -> float:
    """Intersection over union; degenerate (zero-area) boxes give 0."""
    ix = min(a.x_min + a.width, b.x_min + b.width) - max(a.x_min, b.x_min)
    iy = min(a.y_min + a.height, b.y_min + b.height) - max(a.y_min, b.y_min)
    if ix <= 0.0 or iy <= 0.0:
        return 0.0
    inter = ix * iy
    union = a.area + b.area - inter
    if union <= 0.0:
        return 0.0
    # rounding in near-identical boxes can push the ratio a hair past 1
    return min(1.0, inter / union)


def classify_at(pred: Prediction, threshold: float) -> int:
    """1 when the score strictly exceeds the threshold, else 0."""
    return 1 if pred.score > threshold else 0


def match_and_count(gts: list[GroundTruth], preds: list[Prediction],
                    class_label: str, iou_threshold: float) -> MatchResult:
    """Greedy single-use matching for one class across all images."""
    class_gts = [g for g in gts if g.class_label == class_label]
    class_preds = [p for p in preds if p.class_label == class_label]
    order = sorted(range(len(class_preds)), key=lambda i: (-class_preds[i].score, i))

    gt_by_image: dict[str, list[GroundTruth]] = {}
    for g in class_gts:
        gt_by_image.setdefault(g.image_id, []).append(g)
    claimed: set[tuple[str, int]] = set()

    flags: list[tuple[Prediction, bool]] = []
    tp = fp = 0
    for i in order:
        pred = class_preds[i]
        candidates = gt_by_image.get(pred.image_id, [])
        best_iou, best_j = 0.0, -1
        for j, g in enumerate(candidates):
            if (pred.image_id, j) in claimed:
                continue
            v = iou(pred.box, g.box)
            if v > best_iou:
                best_iou, best_j = v, j
        if best_j >= 0 and best_iou >= iou_threshold:
            claimed.add((pred.image_id, best_j))
            tp += 1
            flags.append((pred, True))
        else:
            fp += 1
            flags.append((pred, False))
    fn = len(class_gts) - tp
    return MatchResult(tp=tp, fp=fp, fn=fn, flags=tuple(flags))


def pr_curve(gts: list[GroundTruth], preds: list[Prediction],
             class_label: str, iou_threshold: float) -> list[PRPoint]:
    """Cumulative PR points in descending-score order (recall ascending)."""
    result = match_and_count(gts, preds, class_label, iou_threshold)
    n_gt = sum(1 for g in gts if g.class_label == class_label)
    points: list[PRPoint] = []
    tp = fp = 0
    for pred, is_tp in result.flags:
        if is_tp:
            tp += 1
        else:
            fp += 1
        recall = tp / n_gt if n_gt else 0.0
        points.append(
            PRPoint(
                threshold=pred.score,
                precision=tp / (tp + fp),
                recall=recall,
                tp=tp,
                fp=fp,
                fn=n_gt - tp,
            )
        )
    return points


def average_precision(points: list[PRPoint]) -> float:
    """Area under the PR curve, all-point interpolation.

    The precision envelope is made monotonically non-increasing from
    high recall to low, then integrated as sum((r_k - r_{k-1}) * p_k).
    Empty input (no predictions) gives 0.
    """
    if not points:
        return 0.0
    recalls = [p.recall for p in points]
    precisions = [p.precision for p in points]
    # Envelope, right to left.
    env = precisions[:]
    for i in range(len(env) - 2, -1, -1):
        env[i] = max(env[i], env[i + 1])
    ap = 0.0
    prev_r = 0.0
    for r, p in zip(recalls, env):
        if r > prev_r:
            ap += (r - prev_r) * p
            prev_r = r
    return ap


@dataclass(frozen=True)
class F1Point:
    conf: float
    precision: float
    recall: float
    f1: float


@dataclass
class EvalReport:
    """Per-class APs across the IoU grid plus the headline aggregates.

    Carries a slot for every score the reference reports: mAP at IoU
    0.5, mAP averaged over 0.5:0.95, precision/recall and F1 at the
    best-F1 confidence.
    """

    iou_thresholds: tuple[float, ...]
    classes: tuple[str, ...]
    per_class_ap: dict[str, dict[float, float]]
    map_by_iou: dict[float, float]
    map50: float
    map50_95: float
    f1_curve: list[F1Point]
    best_f1: F1Point
    precision: float
    recall: float
    excluded_classes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "iou_thresholds": list(self.iou_thresholds),
            "classes": list(self.classes),
            "per_class_ap": {
                label: {f"{thr:.2f}": ap for thr, ap in by_thr.items()}
                for label, by_thr in self.per_class_ap.items()
            },
            "map_by_iou": {f"{thr:.2f}": v for thr, v in self.map_by_iou.items()},
            "map50": self.map50,
            "map50_95": self.map50_95,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.best_f1.f1,
            "f1_best_conf": self.best_f1.conf,
            "f1_curve": [
                {"conf": p.conf, "precision": p.precision, "recall": p.recall, "f1": p.f1}
                for p in self.f1_curve
            ],
            "excluded_classes": list(self.excluded_classes),
        }

    def format_summary(self) -> str:
        lines = [
            f"{'class':<16} {'AP@0.50':>8} {'AP@0.50:0.95':>13}",
            "-" * 39,
        ]
        for label in self.classes:
            by_thr = self.per_class_ap[label]
            mean_ap = sum(by_thr.values()) / len(by_thr)
            lines.append(f"{label:<16} {by_thr[0.5]:>8.4f} {mean_ap:>13.4f}")
        lines.append("-" * 39)
        lines.append(f"{'mAP@0.50':<16} {self.map50:>8.4f}")
        lines.append(f"{'mAP@0.50:0.95':<16} {self.map50_95:>8.4f}")
        lines.append(
            f"best F1 {self.best_f1.f1:.4f} at conf {self.best_f1.conf:.3f} "
            f"(P {self.precision:.4f}, R {self.recall:.4f})"
        )
        if self.excluded_classes:
            lines.append(f"excluded (no ground truth): {', '.join(self.excluded_classes)}")
        return "\n".join(lines)


def _check_box_convention(gts: list[GroundTruth], preds: list[Prediction]):
    def max_coord(boxes) -> float:
        m = 0.0
        for b in boxes:
            m = max(m, b.x_min + b.width, b.y_min + b.height)
        return m

    if not preds:
        return
    gt_max = max_coord([g.box for g in gts])
    pred_max = max_coord([p.box for p in preds])
    if (gt_max <= 1.5) != (pred_max <= 1.5):
        raise ValueError(
            "box convention mismatch: one input looks normalized "
            f"(max coord {min(gt_max, pred_max):.3g}) and the other absolute "
            f"(max coord {max(gt_max, pred_max):.3g})"
        )


def evaluate(gts: list[GroundTruth], preds: list[Prediction],
             iou_thresholds: tuple[float, ...] = DEFAULT_IOU_GRID,
             conf_grid: tuple[float, ...] | None = None) -> EvalReport:
    """Full report: per-class AP per IoU threshold, mAPs, F1-confidence curve."""
    if not gts:
        raise ValueError("empty ground truth: nothing to evaluate against")
    if 0.5 not in iou_thresholds:
        raise ValueError("iou_thresholds must include 0.5")
    _check_box_convention(gts, preds)
    if conf_grid is None:
        conf_grid = tuple(round(0.025 * i, 3) for i in range(40))

    classes = tuple(sorted({g.class_label for g in gts}))
    excluded = tuple(
        sorted({p.class_label for p in preds} - set(classes))
    )

    per_class_ap: dict[str, dict[float, float]] = {}
    for label in classes:
        per_class_ap[label] = {}
        for thr in iou_thresholds:
            points = pr_curve(gts, preds, label, thr)
            per_class_ap[label][thr] = average_precision(points)

    map_by_iou = {
        thr: sum(per_class_ap[c][thr] for c in classes) / len(classes)
        for thr in iou_thresholds
    }
    map50 = map_by_iou[0.5]
    map50_95 = sum(map_by_iou.values()) / len(map_by_iou)

    f1_curve: list[F1Point] = []
    for conf in conf_grid:
        kept = [p for p in preds if classify_at(p, conf)]
        tp = fp = fn = 0
        for label in classes:
            m = match_and_count(gts, kept, label, 0.5)
            tp += m.tp
            fp += m.fp
            fn += m.fn
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        f1_curve.append(F1Point(conf=conf, precision=precision, recall=recall, f1=f1))
    best = max(f1_curve, key=lambda p: p.f1)

    return EvalReport(
        iou_thresholds=tuple(iou_thresholds),
        classes=classes,
        per_class_ap=per_class_ap,
        map_by_iou=map_by_iou,
        map50=map50,
        map50_95=map50_95,
        f1_curve=f1_curve,
        best_f1=best,
        precision=best.precision,
        recall=best.recall,
        excluded_classes=excluded,
    )
