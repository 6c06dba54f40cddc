"""Evaluation harness: BLEU sets, A/B metrics, corpus statistics and ground-truth checks."""
from .ab import AbMetrics, AbReport, Tally, ab_metrics, compare_arms, detect_refinement, relative_change
from .bleu import MAX_ORDER, corpus_bleu, sentence_bleu
from .closed_loop import GroundTruthReport, ground_truth_report
from .report import format_table, render_ab, render_ground_truth, render_sets, render_stats, write_json
from .sets import (
    EvalPair,
    EvalSplit,
    SetScores,
    apply_table,
    build_eval_split,
    evaluate_sets,
    read_pairs,
    rouge_l,
    write_pairs,
)
from .stats import CorpusStats, corpus_stats, read_corpus

__all__ = [
    "MAX_ORDER",
    "AbMetrics",
    "AbReport",
    "CorpusStats",
    "EvalPair",
    "EvalSplit",
    "GroundTruthReport",
    "SetScores",
    "Tally",
    "ab_metrics",
    "apply_table",
    "build_eval_split",
    "compare_arms",
    "corpus_bleu",
    "corpus_stats",
    "detect_refinement",
    "evaluate_sets",
    "format_table",
    "ground_truth_report",
    "read_corpus",
    "read_pairs",
    "relative_change",
    "render_ab",
    "render_ground_truth",
    "render_sets",
    "render_stats",
    "rouge_l",
    "sentence_bleu",
    "write_json",
    "write_pairs",
]
