"""Closed-loop acceptance run: simulate, split, train, evaluate and A/B in one process.

Thresholds come from ``app/eval_config.json``; the process exits non-zero when
any criterion fails.
"""
import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from app.mondegreen.config.app_config import AppConfig
from app.mondegreen.errors import MondegreenError
from app.mondegreen.evaluation import (
    ab_metrics,
    build_eval_split,
    compare_arms,
    evaluate_sets,
    ground_truth_report,
    render_ab,
    render_ground_truth,
    render_sets,
)
from app.mondegreen.phonetics import PronouncingLexicon, load_lexicon
from app.mondegreen.simulator import ConfusionLexicon, generate_logs, load_confusions
from app.mondegreen.trainer import train
from app.mondegreen.utils import setup_logger

logger = setup_logger(__name__)

EVAL_CONFIG = Path(__file__).resolve().parent / "eval_config.json"


@dataclass(frozen=True)
class CriterionResult:
    name: str
    value: Optional[float]
    threshold: float
    at_most: bool

    @property
    def passed(self) -> bool:
        if self.value is None:
            return False
        return self.value <= self.threshold if self.at_most else self.value >= self.threshold


def closed_loop(
    config: AppConfig,
    lexicon: PronouncingLexicon,
    confusions: ConfusionLexicon,
    holdout: float = 0.1,
) -> dict:
    """Run the whole pipeline in memory and return every measured quantity plus the reports."""
    control = generate_logs(config.sim, confusions, lexicon=lexicon)
    split = build_eval_split(control.records, config.trainer, holdout=holdout, seed=config.sim.seed)
    trained = train(split.train_records, config.trainer, lexicon)
    scores = evaluate_sets(split.pairs, trained.table)
    truth = ground_truth_report(trained.table, control.truth, trained.pairs, control.records)

    treatment = generate_logs(config.sim, confusions, rewrite_table=trained.table, lexicon=lexicon)
    window, threshold = config.trainer.t_window, config.trainer.tau
    control_ab = ab_metrics(control.records, lexicon, trained.table, threshold=threshold, window=window)
    treatment_ab = ab_metrics(treatment.records, lexicon, trained.table, threshold=threshold, window=window)
    comparison = compare_arms(control_ab, treatment_ab)

    gain = None
    if scores.triggered_model is not None and scores.triggered_no_correction is not None:
        gain = scores.triggered_model - scores.triggered_no_correction
    measured = {
        "triggered_bleu_gain": gain,
        "complete_bleu_change": scores.complete_model - scores.complete_no_correction,
        "triggered_precision": truth.triggered_precision,
        "retried_coverage": truth.coverage,
        "treatment_ctr_change_pct": comparison["triggered"]["ctr"],
        "treatment_interaction_change_pct": comparison["triggered"]["user_interaction_rate"],
        "treatment_refinement_change_pct": comparison["triggered"]["refinement_pct"],
    }
    return {
        "measured": measured,
        "scores": scores,
        "truth": truth,
        "control": control_ab,
        "treatment": treatment_ab,
        "comparison": comparison,
        "table": trained.table,
    }


def check_criteria(measured: dict, criteria: dict) -> list[CriterionResult]:
    results = []
    for name, criterion in criteria.items():
        results.append(
            CriterionResult(
                name=name,
                value=measured.get(name),
                threshold=float(criterion["threshold"]),
                at_most=criterion.get("match_type") == "AT_MOST",
            )
        )
    return results


def run_eval(argv: Optional[Sequence[str]] = None) -> None:
    """Wrapper to run the closed-loop evaluation with thresholds from ``eval_config.json``."""
    parser = argparse.ArgumentParser(prog="run-eval", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="TOML experiment config (defaults otherwise)")
    parser.add_argument("--eval-config", default=str(EVAL_CONFIG))
    parser.add_argument("--sessions", type=int)
    parser.add_argument("--seed", type=int)
    args = parser.parse_args(argv)

    try:
        eval_config = json.loads(Path(args.eval_config).read_text(encoding="utf-8"))
        run = eval_config.get("run", {})
        config = AppConfig.from_file(args.config) if args.config else AppConfig()
        config = config.with_overrides(
            "sim",
            seed=args.seed if args.seed is not None else run.get("seed"),
            n_sessions=args.sessions if args.sessions is not None else run.get("n_sessions"),
        )
        print(f"Running closed loop: {config.sim.n_sessions} sessions, seed {config.sim.seed}")
        lexicon = load_lexicon(path=config.paths.lexicon)
        confusions = load_confusions(config.paths.confusions)
        outcome = closed_loop(config, lexicon, confusions, holdout=run.get("holdout", 0.1))
    except MondegreenError as exc:
        logger.error(str(exc))
        sys.exit(exc.exit_code)
    except KeyboardInterrupt:
        sys.exit(130)

    print(render_sets(outcome["scores"]))
    print()
    print(render_ground_truth(outcome["truth"]))
    print()
    print(render_ab(outcome["control"], outcome["treatment"], outcome["comparison"]))
    print()

    results = check_criteria(outcome["measured"], eval_config["criteria"])
    for result in results:
        bound = "<=" if result.at_most else ">="
        value = "n/a" if result.value is None else f"{result.value:.4f}"
        print(f"{'PASS' if result.passed else 'FAIL'}  {result.name} = {value} ({bound} {result.threshold})")
    if not all(result.passed for result in results):
        sys.exit(1)


if __name__ == "__main__":
    run_eval()
