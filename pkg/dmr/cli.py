"""Command-line interface: ``dmr <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 model error.
"""
import argparse
import csv
import json
import logging
import sys
from typing import List, Optional

from rich.console import Console
from rich.logging import RichHandler

from .config import DEFAULT_BALANCE_CAP, DEFAULT_THRESHOLD, EvalConfig, TrainConfig, resolve_seed
from .core import augment, rerank, train, update
from .density import class_typicality
from .errors import DataError, DmrError, ModelError
from .evaluation import evaluate
from .inference import predict_batch
from .io import load_csv
from .model_validator import ConfigValidationError
from .persistence import load_model, save_model
from .reporting import (display_eval_report, display_megaclouds, display_ranking, display_report,
                        display_rules)
from .rules import export_rules, format_rule, rule_for_cloud
from .vectors import standardize_apply

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_MODEL = 0, 1, 2, 3


class UsageError(Exception):
    """Raised instead of argparse's own exit so usage problems map to exit code 1."""

    def __init__(self, message: str, usage: str):
        self.usage = usage
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self.format_usage())


def _threshold(value: str) -> float:
    thr = float(value)
    if not 0.0 <= thr <= 1.0:
        raise argparse.ArgumentTypeError(f"threshold must lie in [0, 1], got {value}")
    return thr


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dmr", description="Prototype-based classifier with a pairwise decision cascade.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress at INFO level")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = commands.add_parser("train", help="learn a model from a labelled CSV")
    p.add_argument("--data", required=True, help="CSV: n numeric fields then a label, no header")
    p.add_argument("--model", required=True, help="output model file (JSON)")
    p.add_argument("--balance", action="store_true", help="balance prototype counts with synthetic samples")
    p.add_argument("--balance-cap", type=int, default=DEFAULT_BALANCE_CAP,
                   help="synthetic samples per unit of deficit before the cap fires")
    p.add_argument("--thr", type=_threshold, default=DEFAULT_THRESHOLD, help="cascade confidence threshold")
    p.add_argument("--seed", type=int, default=None, help="random seed (default: $DMR_SEED or 0)")

    p = commands.add_parser("augment", help="balance an existing model with its training CSV")
    p.add_argument("--model", required=True, help="trained model file")
    p.add_argument("--data", required=True, help="the model's training CSV")
    p.add_argument("--out", default=None, help="output model file (default: overwrite --model)")
    p.add_argument("--balance-cap", type=int, default=DEFAULT_BALANCE_CAP)
    p.add_argument("--seed", type=int, default=None)

    p = commands.add_parser("update", help="continue learning from new labelled rows")
    p.add_argument("--model", required=True, help="trained model file")
    p.add_argument("--data", required=True, help="CSV of new labelled rows")
    p.add_argument("--out", default=None, help="output model file (default: overwrite --model)")
    p.add_argument("--thr", type=_threshold, default=None, help="override the model's threshold")
    p.add_argument("--balance", action="store_true", help="balance prototype counts again afterwards")
    p.add_argument("--balance-cap", type=int, default=DEFAULT_BALANCE_CAP)
    p.add_argument("--seed", type=int, default=None)

    p = commands.add_parser("megaclouds", help="print the mega-clouds of a model")
    p.add_argument("--model", required=True)

    p = commands.add_parser("rank", help="print the prototype ranking, or recompute it from a CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--data", default=None, help="labelled CSV to recompute the ranking from")
    p.add_argument("--out", default=None, help="output model file (default: overwrite --model)")

    p = commands.add_parser("predict", help="predict labels for a CSV of queries")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True, help="CSV of queries, with or without a label column")
    p.add_argument("--thr", type=_threshold, default=None, help="override the model's threshold")
    p.add_argument("--flat", action="store_true", help="use the flat nearest-prototype decision")

    p = commands.add_parser("explain", help="explain the prediction of every query row")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--thr", type=_threshold, default=None)

    p = commands.add_parser("rules", help="print one IF-THEN rule per mega-cloud")
    p.add_argument("--model", required=True)

    p = commands.add_parser("evaluate", help="repeated stratified train/test evaluation")
    p.add_argument("--data", required=True)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--split", type=float, default=0.8, help="training fraction per class")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--balance", action="store_true")
    p.add_argument("--balance-cap", type=int, default=DEFAULT_BALANCE_CAP)
    p.add_argument("--thr", type=_threshold, default=DEFAULT_THRESHOLD)
    p.add_argument("--flat", action="store_true")
    p.add_argument("--out", default=None, help="also write the report as JSON to this file")
    return parser


def _cmd_train(args, out: Console) -> int:
    config = TrainConfig(balance=args.balance, balance_cap=args.balance_cap,
                         threshold=args.thr, seed=resolve_seed(args.seed))
    model, report = train(load_csv(args.data), config)
    save_model(model, args.model)
    display_report(report)
    return EXIT_OK


def _cmd_augment(args, out: Console) -> int:
    model = load_model(args.model)
    dataset = load_csv(args.data, dimensionality=model.dimensionality)
    config = TrainConfig(balance=True, balance_cap=args.balance_cap, threshold=model.threshold,
                         seed=resolve_seed(args.seed))
    balanced, report = augment(model, dataset, config)
    save_model(balanced, args.out or args.model)
    display_report(report)
    return EXIT_OK


def _cmd_update(args, out: Console) -> int:
    model = load_model(args.model)
    dataset = load_csv(args.data, dimensionality=model.dimensionality)
    config = TrainConfig(balance=args.balance, balance_cap=args.balance_cap,
                         threshold=model.threshold if args.thr is None else args.thr,
                         seed=resolve_seed(args.seed))
    updated, report = update(model, dataset, config)
    save_model(updated, args.out or args.model)
    display_report(report)
    return EXIT_OK


def _cmd_megaclouds(args, out: Console) -> int:
    model = load_model(args.model)
    if not model.megaclouds:
        raise ModelError("merge first: the model has no mega-clouds")
    out.print(f"MG={len(model.megaclouds)} M={model.n_prototypes}")
    display_megaclouds(model.megaclouds, out)
    return EXIT_OK


def _cmd_rank(args, out: Console) -> int:
    model = load_model(args.model)
    if args.data:
        rerank(model, load_csv(args.data, dimensionality=model.dimensionality))
        save_model(model, args.out or args.model)
    if model.ranking is None:
        raise ModelError("rank first: the model has no prototype ranking")
    display_ranking(model.ranking, model.cloud_index(), out)
    return EXIT_OK


def _cmd_predict(args, out: Console) -> int:
    model = load_model(args.model)
    queries = load_csv(args.data, dimensionality=model.dimensionality)
    predictions = predict_batch(model, queries.samples, threshold=args.thr, flat=args.flat)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["row", "label", "score", "path"])
    for row, p in zip(queries.source_ids, predictions):
        writer.writerow([row, p.label, repr(p.score), p.path_label])
    return EXIT_OK


def _cmd_explain(args, out: Console) -> int:
    model = load_model(args.model)
    queries = load_csv(args.data, dimensionality=model.dimensionality)
    rules = export_rules(model)
    clouds = model.cloud_index()
    predictions = predict_batch(model, queries.samples, threshold=args.thr)
    standardized = standardize_apply(queries.samples, model.standardization)
    for row, x, p in zip(queries.source_ids, standardized, predictions):
        cloud = clouds[p.winning_cloud]
        origin = "synthetic" if cloud.synthetic else f"training row {cloud.source_sample_id}"
        typicality = ", ".join(f"{k}={v:.3f}" for k, v in class_typicality(x, model).items())
        out.print(f"row {row}: label \"{p.label}\"", markup=False, highlight=False)
        out.print(f"  prototype {p.winning_cloud} ({origin}), similarity {p.score:.4f}, path {p.path_label}",
                  markup=False, highlight=False)
        out.print(f"  typicality: {typicality}", markup=False, highlight=False)
        out.print(f"  rule: {format_rule(rule_for_cloud(rules, p.winning_cloud))}", markup=False, highlight=False)
    return EXIT_OK


def _cmd_rules(args, out: Console) -> int:
    display_rules(export_rules(load_model(args.model)), format_rule, out)
    return EXIT_OK


def _cmd_evaluate(args, out: Console) -> int:
    config = EvalConfig(repeats=args.repeats, split=args.split, seed=resolve_seed(args.seed),
                        balance=args.balance, balance_cap=args.balance_cap, threshold=args.thr, flat=args.flat)
    report = evaluate(load_csv(args.data), config)
    display_eval_report(report, out)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(report.to_dict(), f, indent=2)
            f.write("\n")
    return EXIT_OK


COMMANDS = {
    "train": _cmd_train,
    "augment": _cmd_augment,
    "update": _cmd_update,
    "megaclouds": _cmd_megaclouds,
    "rank": _cmd_rank,
    "predict": _cmd_predict,
    "explain": _cmd_explain,
    "rules": _cmd_rules,
    "evaluate": _cmd_evaluate,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parses `argv`, runs one command and returns its exit code."""
    err = Console(stderr=True)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # --help and --version exit through argparse
        return int(e.code or 0)
    except UsageError as e:
        err.print(e.usage, end="", markup=False, highlight=False)
        err.print(f"dmr: error: {e}", markup=False, highlight=False)
        return EXIT_USAGE

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s",
                        handlers=[RichHandler(console=err, show_path=False)], force=True)
    try:
        return COMMANDS[args.command](args, Console())
    except ConfigValidationError as e:
        err.print(f"dmr: error: {e}", markup=False, highlight=False)
        return EXIT_USAGE
    except DataError as e:
        err.print(f"dmr: data error: {e}", markup=False, highlight=False)
        return EXIT_DATA
    except DmrError as e:
        err.print(f"dmr: model error: {e}", markup=False, highlight=False)
        return EXIT_MODEL
    except OSError as e:
        err.print(f"dmr: data error: {e}", markup=False, highlight=False)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
