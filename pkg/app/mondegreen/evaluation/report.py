"""Aligned text tables and JSON files for evaluation reports."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional, Sequence, Union

from ..utils import atomic_write
from .ab import METRICS, AbReport
from .closed_loop import GroundTruthReport
from .sets import SetScores
from .stats import CorpusStats


def _cell(value: Any) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def format_table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Left-aligned first column, right-aligned values."""
    cells = [list(header)] + [[_cell(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = []
    for index, row in enumerate(cells):
        parts = [row[0].ljust(widths[0])] + [cell.rjust(width) for cell, width in zip(row[1:], widths[1:])]
        lines.append("  ".join(parts).rstrip())
        if index == 0:
            lines.append("  ".join("-" * width for width in widths))
    return "\n".join(lines)


def render_sets(scores: SetScores) -> str:
    rouge = scores.rouge_l
    keys = ["complete_no_correction", "complete_model", "triggered_no_correction", "triggered_model"]
    rows = [(label, bleu, rouge.get(key)) for (label, bleu), key in zip(scores.rows(), keys)]
    table = format_table(("set", "BLEU", "ROUGE-L"), rows)
    summary = (
        f"pairs={scores.complete_size} triggered={scores.triggered_size} "
        f"trigger_rate={_cell(scores.trigger_rate)}%"
    )
    return f"{table}\n{summary}"


def render_ab(
    control: AbReport,
    treatment: AbReport,
    comparison: dict[str, dict[str, Optional[float]]],
) -> str:
    blocks = []
    segments = [("overall", control.overall, treatment.overall), ("triggered", control.triggered, treatment.triggered)]
    for name, c, t in segments:
        rows = []
        for metric in METRICS:
            rows.append(
                (
                    metric,
                    getattr(c, metric) if c else None,
                    getattr(t, metric) if t else None,
                    comparison[name][metric],
                )
            )
        queries = f"{c.queries if c else 0}/{t.queries if t else 0}"
        blocks.append(f"[{name}] queries control/treatment = {queries}\n" + format_table(("metric", "control", "treatment", "change %"), rows))
    breakdown = [
        (segment, values["ctr"], values["refinement_pct"])
        for segment, values in comparison.items()
        if segment not in ("overall", "triggered")
    ]
    if breakdown:
        blocks.append("[breakdown]\n" + format_table(("segment", "ctr change %", "refinement change %"), breakdown))
    return "\n\n".join(blocks)


def render_stats(stats: CorpusStats) -> str:
    rows: list[tuple[str, Any]] = [
        ("avg_length_words", stats.avg_length_words),
        ("query_count", stats.query_count),
        ("distinct_count", stats.distinct_count),
    ]
    rows += [(f"party_share_pct[{party}]", share) for party, share in stats.party_share.items()]
    return format_table(("statistic", "value"), rows)


def render_ground_truth(report: GroundTruthReport) -> str:
    rows = [
        ("table_precision", report.table_precision),
        ("triggered_precision", report.triggered_precision),
        ("coverage", report.coverage),
    ]
    return format_table(("ground truth", "value"), rows)


def write_json(path: Union[str, Path], payload: dict) -> None:
    with atomic_write(path) as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
