"""Logging helpers that also collect run reports, and rich tables for models and evaluations."""
from typing import List, Mapping, Sequence
import logging
from rich.console import Console
from rich.table import Table

logger = logging.getLogger(__name__)
# stderr keeps command output on stdout machine-readable
console = Console(stderr=True)


def log_info(msg: str, report: List[str]):
    """Logs an informational message to the logger, report list, and console."""
    logger.info(msg)
    report.append(msg)
    console.log(f"[green]{msg}")


def log_warning(msg: str, report: List[str]):
    """Logs a warning message to the logger, report list, and console."""
    logger.warning(msg)
    report.append(msg)
    console.log(f"[yellow]{msg}")


def log_error(msg: str, report: List[str]):
    """Logs an error message to the logger, report list, and console."""
    logger.error(msg)
    report.append(msg)
    console.log(f"[red]{msg}")


def display_report(report: List[str], out: Console = console):
    """Formats and prints the list of report messages as a console table."""
    table = Table(title="Training Report")
    table.add_column("#", style="dim")
    table.add_column("Message", style="bold")

    for i, msg in enumerate(report, start=1):
        table.add_row(str(i), msg)

    out.print(table)


def display_megaclouds(megaclouds: Sequence, out: Console = console):
    """Prints one row per mega-cloud: id, class label and number of member prototypes."""
    table = Table(title=f"Mega-clouds (MG={len(megaclouds)})")
    table.add_column("Mega-cloud", style="dim")
    table.add_column("Class", style="bold")
    table.add_column("Prototypes")
    table.add_column("Member ids")

    for mega in megaclouds:
        table.add_row(
            str(mega.id),
            mega.class_label,
            str(len(mega.member_cloud_ids)),
            ", ".join(str(i) for i in mega.member_cloud_ids),
        )

    out.print(table)


def display_ranking(ranking, clouds: Mapping[int, object], out: Console = console):
    """Prints the prototype ranking, best first."""
    table = Table(title="Prototype Ranking")
    table.add_column("Rank", style="dim")
    table.add_column("Prototype")
    table.add_column("Class", style="bold")
    table.add_column("Support")
    table.add_column("Training error")

    for rank, cloud_id in enumerate(ranking.order, start=1):
        cloud = clouds[cloud_id]
        table.add_row(
            str(rank),
            str(cloud_id),
            cloud.class_label,
            str(cloud.support),
            f"{ranking.per_cloud_error[cloud_id]:.4f}",
        )

    out.print(table)


def display_rules(rules: Sequence, formatter, out: Console = console):
    """Prints one IF-THEN rule per line."""
    for rule in rules:
        out.print(formatter(rule), markup=False, highlight=False)


def display_eval_report(report, out: Console = console):
    """Prints the summary and per-class accuracy of an evaluation run."""
    summary = Table(title="Evaluation Report")
    summary.add_column("Metric", style="dim")
    summary.add_column("Value", style="bold")
    summary.add_row("Mean accuracy", f"{report.accuracy:.4f}")
    summary.add_row("Fold accuracies", ", ".join(f"{a:.4f}" for a in report.fold_accuracies))
    summary.add_row("Prototypes (mean)", str(report.n_prototypes))
    summary.add_row("Mega-clouds (mean)", str(report.n_megaclouds))
    out.print(summary)

    per_class = Table(title="Per-class accuracy")
    per_class.add_column("Class", style="bold")
    per_class.add_column("Accuracy")
    for label, value in report.per_class_accuracy.items():
        per_class.add_row(label, f"{value:.4f}")
    out.print(per_class)
