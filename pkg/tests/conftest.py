"""Shared fixtures and random instance generators."""

from __future__ import annotations

import random

import pytest

from sedscore import Dataset, EvalParams, EventSet, validate_events


def random_corpus(rng: random.Random, *, max_files: int = 3) -> dict[str, float]:
    """Random file-id -> duration map."""
    n_files = rng.randint(1, max_files)
    return {f"f{i}": rng.uniform(30.0, 120.0) for i in range(n_files)}


def random_event_rows(
    rng: random.Random,
    durations: dict[str, float],
    classes: list[str],
    *,
    max_per_class: int = 20,
    min_per_class: int = 1,
) -> list[tuple[str, float, float, str]]:
    """Random valid event rows, at least ``min_per_class`` per class."""
    rows = []
    for label in classes:
        for _ in range(rng.randint(min_per_class, max_per_class)):
            rows.append(random_event_row(rng, durations, label))
    return rows


def random_event_row(
    rng: random.Random, durations: dict[str, float], label: str
) -> tuple[str, float, float, str]:
    file_id = rng.choice(sorted(durations))
    dur = durations[file_id]
    onset = rng.uniform(0.0, dur - 1.0)
    length = rng.uniform(0.05, min(10.0, dur - onset))
    return (file_id, onset, onset + length, label)


def perturbed_detections(
    rng: random.Random,
    gt_rows: list[tuple[str, float, float, str]],
    durations: dict[str, float],
    classes: list[str],
    *,
    max_extra: int = 10,
) -> list[tuple[str, float, float, str]]:
    """Detections correlated with the ground truth plus random clutter.

    Jittered copies, split copies, label swaps and pure noise, so coverage
    ratios land on both sides of typical tolerances.
    """
    rows = []
    for file_id, onset, offset, label in gt_rows:
        roll = rng.random()
        if roll < 0.3:
            continue  # miss
        dur = durations[file_id]
        if roll < 0.8:
            jitter = (offset - onset) * 0.6
            a = max(0.0, onset + rng.uniform(-jitter, jitter))
            b = min(dur, offset + rng.uniform(-jitter, jitter))
            if b - a < 0.01:
                b = min(dur, a + 0.05)
            if b > a:
                rows.append((file_id, a, b, label))
        else:
            mid = (onset + offset) / 2
            if mid - onset > 0.01 and offset - mid > 0.02:
                rows.append((file_id, onset, mid, label))
                rows.append((file_id, mid + 0.01, offset, label))
            else:
                rows.append((file_id, onset, offset, rng.choice(classes)))
    for _ in range(rng.randint(0, max_extra)):
        rows.append(random_event_row(rng, durations, rng.choice(classes)))
    return rows


def random_instance(rng: random.Random, *, max_classes: int = 3, max_files: int = 3):
    """One random scoring problem: (gt_rows, det_rows, durations)."""
    durations = random_corpus(rng, max_files=max_files)
    classes = [f"c{i}" for i in range(rng.randint(1, max_classes))]
    gt_rows = random_event_rows(rng, durations, classes)
    det_rows = perturbed_detections(rng, gt_rows, durations, classes)
    return gt_rows, det_rows, durations


def make_dataset(gt_rows, durations) -> Dataset:
    return Dataset(validate_events(gt_rows, durations), durations)


def make_events(rows, durations, dataset: Dataset | None = None) -> EventSet:
    allowed = dataset.classes if dataset is not None else None
    return validate_events(rows, durations, allowed_classes=allowed)


@pytest.fixture
def split_detection_case():
    """One long ground truth covered by two abutting detections."""
    durations = {"f1": 60.0}
    gt_rows = [("f1", 0.0, 10.0, "dog")]
    det_rows = [("f1", 0.0, 4.0, "dog"), ("f1", 5.0, 10.0, "dog")]
    dataset = make_dataset(gt_rows, durations)
    detections = make_events(det_rows, durations, dataset)
    return dataset, detections


@pytest.fixture
def three_class_dataset():
    """Hand-built three-class corpus used by matching and report tests.

    Single file f1 of 60 s. Ground truth: cat [2,6] and [40,44],
    dog [10,14], speech [20,30].
    """
    durations = {"f1": 60.0}
    gt_rows = [
        ("f1", 2.0, 6.0, "cat"),
        ("f1", 10.0, 14.0, "dog"),
        ("f1", 20.0, 30.0, "speech"),
        ("f1", 40.0, 44.0, "cat"),
    ]
    return make_dataset(gt_rows, durations)


def default_params(**overrides) -> EvalParams:
    return EvalParams(**overrides)
