"""Command-line interface.

Exit codes: 0 on success, 1 on a data error (bad table, unknown file,
label outside the class set, ...), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import SedScoreError
from .events import CollarParams, EvalParams, TimeUnit, validate_events
from .io import (
    build_counts_report,
    build_f1_report,
    build_psds_report,
    emit_report,
    load_dataset,
    load_event_table,
    sweep_operating_points,
)
from .matching import collar_counts, count_matrix
from .psdroc import psd_roc_from_rates
from .rates import compute_rates, f1_scores


def _ratio(raw: str) -> float:
    value = float(raw)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {raw}")
    return value


def _nonneg(raw: str) -> float:
    value = float(raw)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {raw}")
    return value


def _positive(raw: str) -> float:
    value = float(raw)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {raw}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gt", required=True, type=Path, help="ground-truth event table (TSV)")
    common.add_argument(
        "--durations", required=True, type=Path, help="per-file durations table (TSV)"
    )
    common.add_argument("--dtc", type=_ratio, default=0.5, help="detection tolerance (default 0.5)")
    common.add_argument(
        "--gtc", type=_ratio, default=0.5, help="ground-truth tolerance (default 0.5)"
    )
    common.add_argument(
        "--cttc", type=_ratio, default=0.3, help="cross-trigger tolerance (default 0.3)"
    )
    common.add_argument(
        "--alpha-ct", type=_nonneg, default=0.0, help="cross-trigger cost weight (default 0)"
    )
    common.add_argument(
        "--alpha-st", type=_nonneg, default=0.0, help="instability cost weight (default 0)"
    )
    common.add_argument(
        "--emax", type=_positive, default=100.0, help="eFPR budget in rate units (default 100)"
    )
    common.add_argument(
        "--unit",
        choices=[u.value for u in TimeUnit],
        default=TimeUnit.HOUR.value,
        help="time unit for rates (default hour)",
    )
    common.add_argument("--out", type=Path, default=None, help="write report here (default stdout)")
    common.add_argument("--format", choices=["json", "tsv"], default="json")
    common.add_argument(
        "--no-clamp",
        action="store_true",
        help="report the literal effective TP ratio even when negative",
    )

    parser = argparse.ArgumentParser(
        prog="sedscore",
        description="Evaluate polyphonic sound event detection outputs against "
        "ground truth using intersection tolerance criteria, with a collar "
        "baseline and multi-operating-point PSDS summaries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_counts = sub.add_parser(
        "counts", parents=[common], help="counts and rates for one detection table"
    )
    p_counts.add_argument("--det", required=True, type=Path, help="detection table (TSV)")

    p_f1 = sub.add_parser("f1", parents=[common], help="F1 scores for one detection table")
    p_f1.add_argument("--det", required=True, type=Path, help="detection table (TSV)")
    p_f1.add_argument(
        "--collar",
        type=_nonneg,
        default=None,
        help="switch to collar matching with this onset collar in seconds",
    )
    p_f1.add_argument(
        "--collar-ratio",
        type=_nonneg,
        default=None,
        help="offset collar as a fraction of each ground truth's duration (default 0.2)",
    )
    p_f1.add_argument(
        "--no-offset-check", action="store_true", help="match on onsets only in collar mode"
    )

    p_psds = sub.add_parser(
        "psds", parents=[common], help="PSDS over a directory of operating points"
    )
    p_psds.add_argument(
        "--det-dir", required=True, type=Path, help="directory of detection tables, one per OP"
    )

    p_roc = sub.add_parser(
        "roc", parents=[common], help="ROC curve tables over a directory of operating points"
    )
    p_roc.add_argument(
        "--det-dir", required=True, type=Path, help="directory of detection tables, one per OP"
    )
    return parser


def _eval_params(args: argparse.Namespace) -> EvalParams:
    return EvalParams(
        dtc_threshold=args.dtc,
        gtc_threshold=args.gtc,
        cttc_threshold=args.cttc,
        alpha_ct=args.alpha_ct,
        alpha_st=args.alpha_st,
        max_efpr=args.emax,
        time_unit=TimeUnit(args.unit),
    )


def _load_detections(args: argparse.Namespace, dataset):
    rows = load_event_table(args.det)
    return validate_events(
        rows, dataset.file_durations, allowed_classes=dataset.classes, source=str(args.det)
    )


def _run(args: argparse.Namespace) -> dict:
    params = _eval_params(args)
    dataset = load_dataset(args.gt, args.durations)
    clamp = not args.no_clamp

    if args.command == "counts":
        detections = _load_detections(args, dataset)
        counts = count_matrix(detections, dataset, params)
        rates = compute_rates(counts, dataset, params)
        return build_counts_report(counts, rates, dataset, params)

    if args.command == "f1":
        detections = _load_detections(args, dataset)
        collar = None
        if args.collar is not None:
            collar = CollarParams(
                collar=args.collar,
                offset_ratio=0.2 if args.collar_ratio is None else args.collar_ratio,
                check_offset=not args.no_offset_check,
            )
            counts = collar_counts(detections, dataset, collar)
        else:
            counts = count_matrix(detections, dataset, params)
        return build_f1_report(counts, f1_scores(counts), dataset, params, collar=collar)

    counts_by_op = sweep_operating_points(args.det_dir, dataset, params)
    rates_by_op = {op: compute_rates(cm, dataset, params) for op, cm in counts_by_op.items()}
    roc = psd_roc_from_rates(rates_by_op, params, clamp=clamp)
    return build_psds_report(roc, dataset, params, include_psds=args.command == "psds")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "f1" and args.collar is None:
        if args.collar_ratio is not None or args.no_offset_check:
            parser.error("--collar-ratio and --no-offset-check require --collar")
    try:
        report = _run(args)
    except (SedScoreError, OSError) as exc:
        print(f"sedscore: error: {exc}", file=sys.stderr)
        return 1
    text = emit_report(report, args.format)
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
