"""Event matching: intersection tolerance criteria and the collar baseline.

The intersection path decides true positives in two stages. First every
detection is kept or discarded by how much of *its own* duration is covered
by same-class ground truth (detection tolerance). Then every ground truth
counts as detected if enough of *its* duration is covered by the kept
detections (ground-truth tolerance). Discarded detections are the false
positives; each of them is additionally checked against every other class
and counted as a cross-trigger wherever its overlap fraction reaches the
cross-trigger tolerance.

All thresholds compare with inclusive ``>=``, and coverage sums are literal
sums of pairwise overlaps (overlapping labels of one class are counted once
per label). True positives count ground truths while false positives count
detections, so one detection spanning k ground truths can yield k true
positives, and k split detections covering one ground truth yield at most
one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import UnknownClassLabel
from .events import CollarParams, Dataset, Event, EvalParams, EventSet, total_intersection

__all__ = [
    "CountsMatrix",
    "dtc_filter",
    "gtc_select",
    "cttc_count",
    "count_matrix",
    "collar_match",
    "collar_counts",
]


@dataclass(frozen=True)
class CountsMatrix:
    """Per-class counts of one system output at one operating point.

    ``cross_triggers[c][other]`` counts false positives of class ``c`` that
    sufficiently overlap ground truth of ``other``; the mapping is dense
    over all ordered off-diagonal class pairs. For counts produced by the
    collar matcher the cross-trigger entries are all zero, since that
    matcher has no cross-trigger notion.
    """

    classes: tuple[str, ...]
    n_gt: Mapping[str, int]
    n_sys: Mapping[str, int]
    n_tp: Mapping[str, int]
    n_fp: Mapping[str, int]
    cross_triggers: Mapping[str, Mapping[str, int]]

    def __post_init__(self) -> None:
        for c in self.classes:
            if not 0 <= self.n_tp[c] <= self.n_gt[c]:
                raise ValueError(f"class '{c}': n_tp must lie in [0, n_gt]")
            if not 0 <= self.n_fp[c] <= self.n_sys[c]:
                raise ValueError(f"class '{c}': n_fp must lie in [0, n_sys]")
            if c in self.cross_triggers.get(c, {}):
                raise ValueError(f"class '{c}': cross-trigger matrix has a diagonal entry")

    @property
    def total_tp(self) -> int:
        return sum(self.n_tp[c] for c in self.classes)

    @property
    def total_fp(self) -> int:
        return sum(self.n_fp[c] for c in self.classes)

    @property
    def total_gt(self) -> int:
        return sum(self.n_gt[c] for c in self.classes)


def _by_file(events: Sequence[Event]) -> dict[str, list[Event]]:
    groups: dict[str, list[Event]] = {}
    for ev in events:
        groups.setdefault(ev.file_id, []).append(ev)
    return groups


def dtc_filter(
    dets_c: Sequence[Event],
    gt_c: Sequence[Event],
    dtc_threshold: float,
) -> tuple[list[Event], list[Event]]:
    """Split same-class detections into relevant ones and false positives.

    A detection is relevant when the summed overlap with the class's ground
    truth covers at least ``dtc_threshold`` of the detection's duration.
    Returns ``(relevant, false_positives)``, a partition of ``dets_c``.
    """
    gt_groups = _by_file(gt_c)
    relevant: list[Event] = []
    fps: list[Event] = []
    for det in dets_c:
        covered = total_intersection(det, gt_groups.get(det.file_id, ()))
        if covered / det.duration >= dtc_threshold:
            relevant.append(det)
        else:
            fps.append(det)
    return relevant, fps


def gtc_select(
    gt_c: Sequence[Event],
    relevant_c: Sequence[Event],
    gtc_threshold: float,
) -> list[Event]:
    """Ground truths whose duration is sufficiently covered by relevant detections.

    The returned events are the class's true positives. Several split
    detections may jointly cover one ground truth.
    """
    det_groups = _by_file(relevant_c)
    hits: list[Event] = []
    for gt in gt_c:
        covered = total_intersection(gt, det_groups.get(gt.file_id, ()))
        if covered / gt.duration >= gtc_threshold:
            hits.append(gt)
    return hits


def cttc_count(
    fps_c: Sequence[Event],
    class_label: str,
    ground_truth: EventSet,
    cttc_threshold: float,
) -> dict[str, int]:
    """Count cross-triggers of the given false positives against other classes.

    Each false positive is tested against every class other than its own;
    it counts once per class whose ground truth covers at least
    ``cttc_threshold`` of the detection's duration, so a single event may
    cross-trigger several classes. Only classes with a non-zero count
    appear in the result.
    """
    counts: dict[str, int] = {}
    for other in ground_truth.class_labels:
        if other == class_label:
            continue
        gt_groups = _by_file(ground_truth.for_class(other))
        hits = 0
        for fp in fps_c:
            covered = total_intersection(fp, gt_groups.get(fp.file_id, ()))
            if covered / fp.duration >= cttc_threshold:
                hits += 1
        if hits:
            counts[other] = hits
    return counts


def count_matrix(detections: EventSet, dataset: Dataset, params: EvalParams) -> CountsMatrix:
    """Run the three tolerance criteria for every class and collect counts.

    Classes come from the ground truth; classes with no detections get zero
    system counts. Detections labelled outside the ground-truth class set
    are rejected.
    """
    classes = dataset.classes
    universe = set(classes)
    for det in detections:
        if det.class_label not in universe:
            raise UnknownClassLabel(
                f"detection label '{det.class_label}' is not a ground-truth class"
            )
    n_gt: dict[str, int] = {}
    n_sys: dict[str, int] = {}
    n_tp: dict[str, int] = {}
    n_fp: dict[str, int] = {}
    ct: dict[str, dict[str, int]] = {}
    for c in classes:
        gt_c = dataset.ground_truth.for_class(c)
        dets_c = detections.for_class(c)
        relevant, fps = dtc_filter(dets_c, gt_c, params.dtc_threshold)
        hits = gtc_select(gt_c, relevant, params.gtc_threshold)
        sparse_ct = cttc_count(fps, c, dataset.ground_truth, params.cttc_threshold)
        n_gt[c] = len(gt_c)
        n_sys[c] = len(dets_c)
        n_tp[c] = len(hits)
        n_fp[c] = len(fps)
        ct[c] = {other: sparse_ct.get(other, 0) for other in classes if other != c}
    return CountsMatrix(
        classes=classes, n_gt=n_gt, n_sys=n_sys, n_tp=n_tp, n_fp=n_fp, cross_triggers=ct
    )


def _collar_hit(det: Event, gt: Event, collar: CollarParams) -> bool:
    if det.file_id != gt.file_id:
        return False
    if abs(det.onset - gt.onset) > collar.collar:
        return False
    if collar.check_offset:
        offset_tolerance = max(collar.collar, collar.offset_ratio * gt.duration)
        if abs(det.offset - gt.offset) > offset_tolerance:
            return False
    return True


def collar_match(
    dets_c: Sequence[Event],
    gt_c: Sequence[Event],
    collar: CollarParams,
) -> tuple[int, int]:
    """Collar-based baseline counts for one class: ``(n_tp, n_fp)``.

    Matching is existence-based, not one-to-one: a ground truth is a true
    positive if any detection lands within its collars, and a detection is
    a false positive if it lands within no ground truth's collars. One
    detection may validate several ground truths and vice versa.
    """
    det_groups = _by_file(dets_c)
    gt_groups = _by_file(gt_c)
    n_tp = sum(
        1
        for gt in gt_c
        if any(_collar_hit(det, gt, collar) for det in det_groups.get(gt.file_id, ()))
    )
    n_fp = sum(
        1
        for det in dets_c
        if not any(_collar_hit(det, gt, collar) for gt in gt_groups.get(det.file_id, ()))
    )
    return n_tp, n_fp


def collar_counts(detections: EventSet, dataset: Dataset, collar: CollarParams) -> CountsMatrix:
    """Collar-baseline counts for every class, in CountsMatrix form."""
    classes = dataset.classes
    universe = set(classes)
    for det in detections:
        if det.class_label not in universe:
            raise UnknownClassLabel(
                f"detection label '{det.class_label}' is not a ground-truth class"
            )
    n_gt: dict[str, int] = {}
    n_sys: dict[str, int] = {}
    n_tp: dict[str, int] = {}
    n_fp: dict[str, int] = {}
    ct: dict[str, dict[str, int]] = {}
    for c in classes:
        gt_c = dataset.ground_truth.for_class(c)
        dets_c = detections.for_class(c)
        tp, fp = collar_match(dets_c, gt_c, collar)
        n_gt[c] = len(gt_c)
        n_sys[c] = len(dets_c)
        n_tp[c] = tp
        n_fp[c] = fp
        ct[c] = {other: 0 for other in classes if other != c}
    return CountsMatrix(
        classes=classes, n_gt=n_gt, n_sys=n_sys, n_tp=n_tp, n_fp=n_fp, cross_triggers=ct
    )
