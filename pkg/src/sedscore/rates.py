"""Counts to rates: per-class TP ratios, FP/CT rates, effective rates, F1.

TP performance is a proportion of ground-truth events, while FP and CT
performance are rates per unit of time, as in keyword-spotting evaluation.
The FP rate is normalized by the whole corpus duration; each CT rate is
normalized by the total labelled duration of the class being triggered.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean, pstdev
from typing import Iterable, Mapping

from .errors import DegenerateClassCount, EmptyClassGroundTruth, ZeroLabelDuration
from .events import Dataset, EvalParams
from .matching import CountsMatrix

__all__ = [
    "ClassRates",
    "F1Report",
    "compute_rates",
    "effective_fpr",
    "effective_tpr",
    "f1_scores",
]


@dataclass(frozen=True)
class ClassRates:
    """One class's operating-point coordinates.

    ``fp_rate``, the ``ct_rates`` values and ``efpr`` are events per
    reporting time unit; ``tp_ratio`` is unitless in [0, 1].
    """

    tp_ratio: float
    fp_rate: float
    ct_rates: Mapping[str, float]
    efpr: float


def effective_fpr(
    fp_rate: float,
    ct_rates: Mapping[str, float],
    alpha_ct: float,
    n_classes: int,
) -> float:
    """FP rate plus the weighted mean cross-trigger rate.

    Cross-triggers against identifiable classes can hurt the user
    experience more than plain false positives; ``alpha_ct`` prices that
    in. The mean divides by the number of *other* classes, so classes
    missing from ``ct_rates`` contribute zero.
    """
    if alpha_ct == 0:
        return fp_rate
    if n_classes < 2:
        raise DegenerateClassCount(
            "cross-trigger weighting needs at least two classes"
        )
    return fp_rate + alpha_ct * sum(ct_rates.values()) / (n_classes - 1)


def effective_tpr(tp_ratios: Iterable[float], alpha_st: float, *, clamp: bool = True) -> float:
    """Cross-class mean TP ratio, penalized by cross-class instability.

    Returns ``mean - alpha_st * std`` where ``std`` is the population
    standard deviation over classes (the class set is the whole population
    of interest). A negative result has no operational meaning, so it is
    clamped to zero unless ``clamp=False`` asks for the literal value.
    """
    values = list(tp_ratios)
    if not values:
        raise ValueError("effective_tpr needs at least one class")
    result = fmean(values) - alpha_st * pstdev(values)
    if clamp:
        return max(0.0, result)
    return result


def compute_rates(
    counts: CountsMatrix,
    dataset: Dataset,
    params: EvalParams,
) -> dict[str, ClassRates]:
    """Convert one operating point's counts into per-class rates.

    All rates come out in ``params.time_unit``. The cross-trigger rate map
    of each class is dense over the other classes (zero counts included).
    """
    unit = params.time_unit.seconds
    total_units = dataset.total_duration / unit
    label_units = {c: dur / unit for c, dur in dataset.class_durations.items()}
    n_classes = len(counts.classes)
    rates: dict[str, ClassRates] = {}
    for c in counts.classes:
        if counts.n_gt[c] == 0:
            raise EmptyClassGroundTruth(f"class '{c}' has no ground-truth events")
        ct_rates: dict[str, float] = {}
        for other, n_ct in counts.cross_triggers[c].items():
            dur = label_units.get(other, 0.0)
            if not dur > 0:
                raise ZeroLabelDuration(f"class '{other}' has zero labelled duration")
            ct_rates[other] = n_ct / dur
        fp_rate = counts.n_fp[c] / total_units
        rates[c] = ClassRates(
            tp_ratio=counts.n_tp[c] / counts.n_gt[c],
            fp_rate=fp_rate,
            ct_rates=ct_rates,
            efpr=effective_fpr(fp_rate, ct_rates, params.alpha_ct, n_classes),
        )
    return rates


@dataclass(frozen=True)
class F1Report:
    """Per-class and pooled F1 at a single operating point."""

    per_class: Mapping[str, float]
    macro_f1: float
    micro_f1: float


def _f1(n_tp: int, n_fp: int, n_fn: int) -> float:
    denom = 2 * n_tp + n_fp + n_fn
    if denom == 0:
        return 0.0
    return 2 * n_tp / denom


def f1_scores(counts: CountsMatrix) -> F1Report:
    """F1 per class plus macro and micro averages.

    Uses the asymmetric counts as they stand: true positives count ground
    truths, false positives count detections, and false negatives are the
    undetected ground truths. An all-zero class scores 0 by convention.
    The macro score is the unweighted class mean; the micro score pools
    the counts across classes first.
    """
    per_class = {
        c: _f1(counts.n_tp[c], counts.n_fp[c], counts.n_gt[c] - counts.n_tp[c])
        for c in counts.classes
    }
    total_fn = counts.total_gt - counts.total_tp
    return F1Report(
        per_class=per_class,
        macro_f1=fmean(per_class.values()) if per_class else 0.0,
        micro_f1=_f1(counts.total_tp, counts.total_fp, total_fn),
    )
