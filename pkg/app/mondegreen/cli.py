"""``mondegreen`` command line: simulate, train, serve, eval and stats.

Every subcommand returns a process exit status; library errors map to the
``exit_code`` of their ``MondegreenError`` class.
"""
from __future__ import annotations

import argparse
import sys
from importlib import metadata
from pathlib import Path
from typing import Optional, Sequence

from .config import settings
from .config.app_config import AppConfig, require_inputs, split_address
from .errors import InputFileError, MondegreenError, UsageError
from .evaluation import (
    ab_metrics,
    build_eval_split,
    compare_arms,
    corpus_stats,
    evaluate_sets,
    ground_truth_report,
    read_corpus,
    read_pairs,
    render_ab,
    render_ground_truth,
    render_sets,
    render_stats,
    write_json,
    write_pairs,
)
from .phonetics import PronouncingLexicon, load_lexicon
from .query_model import read_log, sort_for_mining, write_log
from .simulator import GroundTruth, generate_logs, load_confusions
from .trainer import SNAPSHOT_VERSION, mine_pairs, read_snapshot, train, write_snapshot
from .utils import set_level, setup_logger

logger = setup_logger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors raised as ``UsageError`` instead of exiting."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _version() -> str:
    try:
        package = metadata.version("mondegreen")
    except metadata.PackageNotFoundError:
        package = "0+unknown"
    return f"mondegreen {package} (snapshot format {SNAPSHOT_VERSION})"


def _load_config(path: Optional[str]) -> AppConfig:
    return AppConfig.from_file(path) if path else AppConfig()


def _lexicon(config: AppConfig) -> PronouncingLexicon:
    return load_lexicon(path=config.paths.lexicon)


def _required(value: Optional[object], flag: str) -> Path:
    if value is None:
        raise UsageError(f"{flag} is required (or set it under [paths] in --config)")
    return Path(value)


def _emit(text: str, payload: dict, json_path: Optional[str]) -> None:
    print(text)
    if json_path:
        write_json(json_path, payload)
        logger.info(f"Wrote JSON report to {json_path}")


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_config(args.config).with_overrides("sim", seed=args.seed, n_sessions=args.sessions)
    out = _required(args.out or config.paths.logs, "--out")
    truth_path = _required(args.truth or config.paths.truth, "--truth")
    config.require_paths("confusions", "lexicon", snapshot=args.snapshot)
    confusions = load_confusions(config.paths.confusions)
    lexicon = _lexicon(config) if config.sim.augment_confusions else None
    table = read_snapshot(args.snapshot) if args.snapshot else None

    result = generate_logs(config.sim, confusions, rewrite_table=table, lexicon=lexicon, progress=args.progress)
    write_log(out, result.records)
    result.truth.write(truth_path)
    arm = "treatment" if table is not None else "control"
    print(
        f"simulated {result.sessions} {arm} sessions: {len(result.records)} records, "
        f"{result.corrupted_sessions} corrupted, {len(result.truth)} distinct corruptions -> {out}"
    )
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    config = _load_config(args.config).with_overrides(
        "trainer",
        alpha=args.alpha,
        beta=args.beta,
        tau=args.tau,
        t_window=args.t,
        min_query_count=args.min_count,
        workers=args.workers,
    )
    logs = _required(args.logs or config.paths.logs, "--logs")
    out = _required(args.out or config.paths.snapshot, "--out")
    config.require_paths("lexicon", logs=logs)
    records = read_log(logs)
    if not records:
        logger.warning(f"Log file {logs} is empty; writing an empty snapshot")
    result = train(records, config.trainer, _lexicon(config))
    write_snapshot(result.table, out)
    print(
        f"trained on {len(records)} records: {len(result.pairs)} pairs, "
        f"{len(result.table)} rewrites -> {out}"
    )
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .serving import CorrectionService, create_app

    config = _load_config(args.config)
    snapshot = _required(args.snapshot or config.paths.snapshot, "--snapshot")
    config.require_paths(snapshot=snapshot)
    listen = args.listen or config.serve.listen
    try:
        host, port = split_address(listen)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    service = CorrectionService.from_snapshot(snapshot)
    logger.info(f"Serving {service.table.version} on {host}:{port}")
    uvicorn.run(create_app(service), host=host, port=port)
    return 0


def cmd_eval_bleu(args: argparse.Namespace) -> int:
    require_inputs(pairs=args.pairs, snapshot=args.snapshot)
    pairs = read_pairs(args.pairs)
    table = read_snapshot(args.snapshot) if args.snapshot else None
    scores = evaluate_sets(pairs, table)
    _emit(render_sets(scores), scores.as_dict(), args.json)
    return 0


def cmd_eval_ab(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    config.require_paths("lexicon", control=args.control, treatment=args.treatment, snapshot=args.snapshot)
    lexicon = _lexicon(config)
    table = read_snapshot(args.snapshot) if args.snapshot else None
    window, threshold = config.trainer.t_window, config.trainer.tau
    control = ab_metrics(read_log(args.control), lexicon, table, threshold=threshold, window=window)
    treatment = ab_metrics(read_log(args.treatment), lexicon, table, threshold=threshold, window=window)
    comparison = compare_arms(control, treatment)
    payload = {"control": control.as_dict(), "treatment": treatment.as_dict(), "relative_change_pct": comparison}
    _emit(render_ab(control, treatment, comparison), payload, args.json)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    require_inputs(corpus=args.corpus)
    stats = corpus_stats(read_corpus(args.corpus))
    _emit(render_stats(stats), stats.as_dict(), args.json)
    return 0


def cmd_eval_split(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    config.require_paths(logs=args.logs)
    split = build_eval_split(read_log(args.logs), config.trainer, holdout=args.holdout, seed=args.seed)
    write_log(args.train_out, split.train_records)
    write_pairs(args.pairs_out, split.pairs)
    print(
        f"held out {len(split.heldout_users)} users: {len(split.train_records)} training records "
        f"-> {args.train_out}, {len(split.pairs)} pairs -> {args.pairs_out}"
    )
    return 0


def cmd_eval_truth(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    config.require_paths(snapshot=args.snapshot, truth=args.truth, logs=args.logs)
    table = read_snapshot(args.snapshot)
    truth = GroundTruth.read(args.truth)
    records = read_log(args.logs)
    pairs = mine_pairs(sort_for_mining(records), config.trainer)
    report = ground_truth_report(table, truth, pairs, records)
    _emit(render_ground_truth(report), report.as_dict(), args.json)
    return 0


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="mondegreen", description="Voice query correction from search session logs")
    parser.add_argument("--version", action="version", version=_version())
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help=f"override MONDEGREEN_LOG_LEVEL (currently {settings.log_level})",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="<subcommand>")

    simulate = commands.add_parser("simulate", help="generate a synthetic query log with ground truth")
    simulate.add_argument("--config", required=True)
    simulate.add_argument("--out")
    simulate.add_argument("--truth")
    simulate.add_argument("--snapshot", help="apply this rewrite table (treatment arm)")
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--sessions", type=int)
    simulate.add_argument("--progress", action="store_true")
    simulate.set_defaults(handler=cmd_simulate)

    train_cmd = commands.add_parser("train", help="mine pairs and build a rewrite snapshot")
    train_cmd.add_argument("--logs")
    train_cmd.add_argument("--out")
    train_cmd.add_argument("--config")
    train_cmd.add_argument("--alpha", type=float)
    train_cmd.add_argument("--beta", type=float)
    train_cmd.add_argument("--tau", type=int)
    train_cmd.add_argument("--t", type=int, help="correction window in seconds")
    train_cmd.add_argument("--min-count", type=int)
    train_cmd.add_argument("--workers", type=int)
    train_cmd.set_defaults(handler=cmd_train)

    serve = commands.add_parser("serve", help="serve corrections over HTTP")
    serve.add_argument("--snapshot")
    serve.add_argument("--listen")
    serve.add_argument("--config")
    serve.set_defaults(handler=cmd_serve)

    evaluate = commands.add_parser("eval", help="evaluation reports")
    reports = evaluate.add_subparsers(dest="report", required=True, metavar="<report>")

    bleu = reports.add_parser("bleu", help="BLEU on the complete and triggered sets")
    bleu.add_argument("--pairs", required=True)
    bleu.add_argument("--snapshot")
    bleu.add_argument("--json")
    bleu.set_defaults(handler=cmd_eval_bleu)

    ab = reports.add_parser("ab", help="compare control and treatment logs")
    ab.add_argument("--control", required=True)
    ab.add_argument("--treatment", required=True)
    ab.add_argument("--snapshot")
    ab.add_argument("--config")
    ab.add_argument("--json")
    ab.set_defaults(handler=cmd_eval_ab)

    stats = reports.add_parser("stats", help="query length and count statistics")
    stats.add_argument("--corpus", required=True)
    stats.add_argument("--json")
    stats.set_defaults(handler=cmd_stats)

    split = reports.add_parser("split", help="seeded held-out users and balanced evaluation pairs")
    split.add_argument("--logs", required=True)
    split.add_argument("--train-out", required=True)
    split.add_argument("--pairs-out", required=True)
    split.add_argument("--holdout", type=float, default=0.1)
    split.add_argument("--seed", type=int, default=0)
    split.add_argument("--config")
    split.set_defaults(handler=cmd_eval_split)

    truth = reports.add_parser("truth", help="rewrite precision and coverage against simulator ground truth")
    truth.add_argument("--snapshot", required=True)
    truth.add_argument("--truth", required=True)
    truth.add_argument("--logs", required=True)
    truth.add_argument("--config")
    truth.add_argument("--json")
    truth.set_defaults(handler=cmd_eval_truth)

    top_stats = commands.add_parser("stats", help="same as 'eval stats'")
    top_stats.add_argument("--corpus", required=True)
    top_stats.add_argument("--json")
    top_stats.set_defaults(handler=cmd_stats)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.log_level:
            set_level(args.log_level)
        return args.handler(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 0
    except MondegreenError as exc:
        logger.error(str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        logger.error(str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return InputFileError.exit_code
    except KeyboardInterrupt:
        return 130


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
