"""Command-line interface: ``mldconcur <subcommand> ...``.

Exit codes: 0 success, 1 input or parse error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from pathlib import Path

from . import __version__
from .concurrence import concurrence_profile
from .dataset import MultiLabelDataset, distinct_labelsets
from .evaluation import (
    PredictionFormatError,
    evaluate_all,
    k_fold_partition,
    read_predictions_csv,
)
from .formats import FormatError, companion_xml, read_dataset, write_dataset
from .imbalance import NoActiveLabelsError, imbalance_profile
from .reporting import chord_svg, default_selection, report_json, report_text
from .resampling import DEFAULT_SEED, lp_ros, lp_rus, remedial


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _seed_default() -> int:
    raw = os.environ.get("MLD_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"MLD_SEED must be an integer, got {raw!r}") from None


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return seed


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return n


def _load(arff: str, xml: str | None = None) -> MultiLabelDataset:
    xml_path = xml if xml is not None else companion_xml(arff)
    try:
        return read_dataset(arff, xml_path)
    except FormatError as exc:
        raise InputError(f"{arff}: {exc}") from None
    except OSError as exc:
        raise InputError(str(exc)) from None


def _output_paths(out: str, inputs: list[str | None]) -> tuple[Path, Path]:
    arff = Path(out)
    if arff.suffix.lower() != ".arff":
        arff = arff.with_name(arff.name + ".arff")
    xml = arff.with_suffix(".xml")
    for src in inputs:
        if src is None:
            continue
        src_path = Path(src).resolve()
        if src_path in (arff.resolve(), xml.resolve()):
            raise UsageError(f"refusing to overwrite input file {src}")
    return arff, xml


def _summary(dataset: MultiLabelDataset) -> dict:
    imbalance = imbalance_profile(dataset)
    concurrence = concurrence_profile(dataset, imbalance)
    n_labelsets, _ = distinct_labelsets(dataset)
    return {
        "relation": dataset.relation_name,
        "instances": len(dataset),
        "attributes": len(dataset.schema),
        "labels": dataset.num_labels,
        "labelsets": n_labelsets,
        "card": imbalance.card,
        "dens": imbalance.dens,
        "mean_ir": imbalance.mean_ir,
        "max_ir": imbalance.max_ir,
        "scumble": concurrence.scumble,
        "scumble_cv": None if math.isnan(concurrence.scumble_cv) else concurrence.scumble_cv,
    }


def _fmt(v) -> str:
    if v is None:
        return "NA"
    if isinstance(v, float):
        return f"{v:.3f}"
    return str(v)


_SUMMARY_KEYS = [
    ("instances", "Instances"), ("attributes", "Attributes"), ("labels", "Labels"),
    ("labelsets", "Labelsets"), ("card", "Card"), ("dens", "Dens"), ("mean_ir", "MeanIR"),
    ("max_ir", "MaxIR"), ("scumble", "SCUMBLE"), ("scumble_cv", "SCUMBLE.CV"),
]


def _dump(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=False))


# ---------------------------------------------------------------- commands

def cmd_info(args) -> None:
    datasets = [(path, _load(path, args.xml)) for path in args.datasets]
    summaries = [_summary(d) for _, d in datasets]
    if args.json:
        _dump(summaries if len(summaries) > 1 else summaries[0])
        return
    for (path, _), s in zip(datasets, summaries):
        print(f"{s['relation']} ({path})")
        for key, title in _SUMMARY_KEYS:
            print(f"  {title}: {_fmt(s[key])}")


def cmd_concurrence(args) -> None:
    dataset = _load(args.dataset, args.xml)
    if args.json:
        _dump(report_json(dataset, args.top_k))
    else:
        sys.stdout.write(report_text(dataset, args.top_k))
    if args.svg:
        labels = default_selection(dataset, args.top_k)
        if len(labels) < 2:
            print("no label interactions to plot; SVG not written", file=sys.stderr)
            return
        chord_svg(dataset, labels, args.svg)


def cmd_remedial(args) -> None:
    arff_out, xml_out = _output_paths(args.output, [args.input, args.xml])
    dataset = _load(args.input, args.xml)
    history = [{"iteration": 0, **_brief(dataset)}]
    for it in range(1, args.iterations + 1):
        outcome = remedial(dataset)
        dataset = outcome.dataset
        history.append({"iteration": it, "decoupled": outcome.decoupled_count,
                        "added": outcome.added_count, **_brief(dataset)})
    write_dataset(dataset, arff_out, xml_out)
    if args.json:
        _dump({"output": str(arff_out), "iterations": history})
        return
    before = history[0]
    print(f"before: {before['instances']} instances, SCUMBLE {before['scumble']:.3f}, "
          f"Card {before['card']:.3f}, Dens {before['dens']:.3f}")
    for h in history[1:]:
        print(f"iteration {h['iteration']}: {h['decoupled']} instances decoupled, "
              f"{h['instances']} instances, SCUMBLE {h['scumble']:.3f}, "
              f"Card {h['card']:.3f}, Dens {h['dens']:.3f}")
    print(f"written {arff_out} and {xml_out}")


def _brief(dataset: MultiLabelDataset) -> dict:
    imbalance = imbalance_profile(dataset)
    return {
        "instances": len(dataset),
        "card": imbalance.card,
        "dens": imbalance.dens,
        "mean_ir": imbalance.mean_ir,
        "max_ir": imbalance.max_ir,
        "scumble": concurrence_profile(dataset, imbalance).scumble,
    }


def cmd_resample(args) -> None:
    if args.method == "lp-ros" and not 0 < args.percentage <= 100:
        raise UsageError("--percentage must be in (0, 100] for lp-ros")
    if args.method == "lp-rus" and not 0 < args.percentage < 100:
        raise UsageError("--percentage must be in (0, 100) for lp-rus")
    arff_out, xml_out = _output_paths(args.output, [args.input, args.xml])
    dataset = _load(args.input, args.xml)
    method = lp_ros if args.method == "lp-ros" else lp_rus
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        outcome = method(dataset, args.percentage, args.seed)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    write_dataset(outcome.dataset, arff_out, xml_out)
    before, after = _brief(dataset), _brief(outcome.dataset)
    if args.json:
        _dump({"method": args.method, "percentage": args.percentage, "seed": args.seed,
               "added": outcome.added_count, "removed": outcome.removed_count,
               "before": before, "after": after, "output": str(arff_out)})
        return
    print(f"{args.method} P={args.percentage:g} seed={args.seed}: "
          f"{before['instances']} -> {after['instances']} instances")
    print(f"{'':8}{'Before':>12}{'After':>12}")
    print(f"{'MaxIR':8}{before['max_ir']:>12.3f}{after['max_ir']:>12.3f}")
    print(f"{'MeanIR':8}{before['mean_ir']:>12.3f}{after['mean_ir']:>12.3f}")
    print(f"written {arff_out} and {xml_out}")


def cmd_partition(args) -> None:
    outdir = Path(args.outdir)
    dataset = _load(args.input, args.xml)
    if args.folds > len(dataset):
        raise UsageError(f"--folds {args.folds} exceeds the {len(dataset)} instances")
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        probe = outdir / ".mldconcur-write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise InputError(f"output directory not writable: {exc}") from None
    stem = Path(args.input).stem
    xml = outdir / f"{stem}.xml"
    written = []
    parts = k_fold_partition(len(dataset), args.folds, args.reps, args.seed)
    for r, rep in enumerate(parts, start=1):
        for k, (train, test) in enumerate(rep, start=1):
            for kind, idx in (("train", train), ("test", test)):
                path = outdir / f"{stem}-rep{r}-fold{k}-{kind}.arff"
                write_dataset(dataset.subset(idx.tolist()), path, xml)
                written.append(str(path))
    if args.json:
        _dump({"files": written, "xml": str(xml), "seed": args.seed})
    else:
        print(f"{len(written)} files written to {outdir} (labels in {xml.name})")


def cmd_evaluate(args) -> None:
    truth = _load(args.truth, args.xml)
    try:
        pred = read_predictions_csv(args.pred, truth.num_labels, args.threshold)
    except PredictionFormatError as exc:
        raise InputError(f"{args.pred}: {exc}") from None
    except OSError as exc:
        raise InputError(str(exc)) from None
    if pred.scores.shape[0] != len(truth):
        raise InputError(f"{args.pred}: {pred.scores.shape[0]} prediction rows for {len(truth)} instances")
    metrics = evaluate_all(truth, pred)
    if args.json:
        _dump({k: (None if math.isnan(v) else v) for k, v in metrics.items()})
        return
    for name, value in metrics.items():
        print(f"{name:12} {'NA' if math.isnan(value) else f'{value:.4f}'}")


def cmd_convert(args) -> None:
    out = Path(args.output)
    if args.format == "mulan":
        arff_out, xml_out = _output_paths(args.output, [args.input, args.xml])
    else:
        arff_out = out if out.suffix.lower() == ".arff" else out.with_name(out.name + ".arff")
        xml_out = None
        for src in (args.input, args.xml):
            if src is not None and Path(src).resolve() == arff_out.resolve():
                raise UsageError(f"refusing to overwrite input file {src}")
    dataset = _load(args.input, args.xml)
    write_dataset(dataset, arff_out, xml_out, style=args.style, meka=args.format == "meka")
    if args.json:
        _dump({"output": str(arff_out), "xml": None if xml_out is None else str(xml_out)})
    else:
        print(f"written {arff_out}" + (f" and {xml_out}" if xml_out else ""))


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mldconcur",
        description="Concurrence analysis and resampling for imbalanced multilabel datasets.",
    )
    parser.add_argument("--json", action="store_true", help="emit JSON instead of text")
    # accepted after the subcommand too; SUPPRESS keeps a flag given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON instead of text")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def dataset_args(p, name="input"):
        p.add_argument(name, help="ARFF file (MULAN with --xml or a sibling .xml file, else MEKA)")
        p.add_argument("--xml", help="MULAN label XML file")

    p = sub.add_parser("info", parents=[common], help="dataset characterization metrics")
    p.add_argument("datasets", nargs="+", help="ARFF files")
    p.add_argument("--xml", help="MULAN label XML file (single dataset only)")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("concurrence", parents=[common], help="concurrence report and chord diagram")
    dataset_args(p, "dataset")
    p.add_argument("--top-k", type=_positive_int, default=10)
    p.add_argument("--svg", help="write a label interaction diagram to this file")
    p.set_defaults(func=cmd_concurrence)

    p = sub.add_parser("remedial", parents=[common], help="apply REMEDIAL decoupling")
    dataset_args(p)
    p.add_argument("output", help="output ARFF path (XML written alongside)")
    p.add_argument("--iterations", type=_positive_int, default=1)
    p.set_defaults(func=cmd_remedial)

    p = sub.add_parser("resample", parents=[common], help="LP-ROS / LP-RUS resampling")
    dataset_args(p)
    p.add_argument("output")
    p.add_argument("--method", choices=["lp-ros", "lp-rus"], required=True)
    p.add_argument("--percentage", type=float, default=10.0)
    p.add_argument("--seed", type=_seed, default=None)
    p.set_defaults(func=cmd_resample)

    p = sub.add_parser("partition", parents=[common], help="repeated k-fold train/test files")
    dataset_args(p)
    p.add_argument("--folds", type=_positive_int, default=5)
    p.add_argument("--reps", type=_positive_int, default=2)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("evaluate", parents=[common], help="score predictions against ground truth")
    p.add_argument("--truth", required=True, help="ground-truth ARFF file")
    p.add_argument("--xml", help="MULAN label XML for the truth file")
    p.add_argument("--pred", required=True, help="CSV of per-label confidence scores")
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("convert", parents=[common], help="convert between MULAN/MEKA and dense/sparse")
    dataset_args(p)
    p.add_argument("output")
    p.add_argument("--style", choices=["dense", "sparse"], default="dense")
    p.add_argument("--format", choices=["mulan", "meka"], default="mulan")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", "absent") is None:
            args.seed = _seed_default()
        if args.command == "info" and args.xml and len(args.datasets) > 1:
            raise UsageError("--xml can only be used with a single dataset")
        if args.command == "partition" and args.folds < 2:
            raise UsageError("--folds must be at least 2")
        if args.command == "evaluate" and not 0 <= args.threshold <= 1:
            raise UsageError("--threshold must be in [0, 1]")
        args.func(args)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except (InputError, NoActiveLabelsError) as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
