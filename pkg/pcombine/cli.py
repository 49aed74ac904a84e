"""Command-line front end: merge, threshold, table, simulate, ic-check, sequential."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from pcombine.dependence_sim import ic_balance_profile, sweep_rho
from pcombine.errors import (
    EXIT_DOMAIN,
    EXIT_OK,
    EXIT_USAGE,
    ConfigurationError,
    DomainError,
    IngestionError,
    IntegrationError,
    PCombineError,
    RootFindingError,
)
from pcombine.models.methods import TABLE_METHODS, canonical_method, parse_method
from pcombine.models.queries import (
    ComputationMode,
    Exact,
    LargeKAsymptotic,
    MonteCarlo,
    SmallEpsAsymptotic,
    ThresholdKind,
)
from pcombine.models.simulation import Arm, ExperimentConfig, OneFactorGaussian, SignalCase
from pcombine.plotting import save_removal_curve, save_rp_curves
from pcombine.sequential import (
    adjusted_pvalue,
    ingest_pvalues,
    inline_pvalues,
    report_frame,
    run_sequential,
)
from pcombine.settings import Settings, get_settings
from pcombine.tables import generate_log_ratio_table, generate_table, to_wide
from pcombine.thresholds import resolve_query, threshold

logger = logging.getLogger("pcombine")

MODES = ("auto", "exact", "small-eps", "large-k", "monte-carlo")


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _names(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def _kind(text: str) -> ThresholdKind:
    return ThresholdKind(text.upper())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcombine",
        description="Merge p-values and compute VAD/VI/VC thresholds and prices for validity.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--output", type=Path, help="Output file (default: stdout)")
    common.add_argument("--seed", type=int, help="Master seed (default: settings / PCOMBINE_SEED)")
    common.add_argument("--digits", type=int, help="Significant digits in CSV output")
    common.add_argument("--workers", type=int, help="Worker threads for Monte Carlo blocks")
    common.add_argument(
        "--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"]
    )
    common.add_argument("--config-out", type=Path, help="Also write the resolved config here")

    def add_mode(p: argparse.ArgumentParser) -> None:
        p.add_argument("--mode", choices=MODES, default="auto")
        p.add_argument("--replications", type=int, help="N for the monte-carlo mode")

    sub = parser.add_subparsers(dest="command", required=True)

    merge = sub.add_parser("merge", parents=[common], help="Combine one vector of p-values")
    merge.add_argument("--method", required=True)
    merge.add_argument("--kind", type=_kind, required=True)
    merge.add_argument("--epsilon", type=float, required=True)
    source = merge.add_mutually_exclusive_group(required=True)
    source.add_argument("--values", type=_floats, help="Comma-separated p-values")
    source.add_argument("--input", type=Path, help="p-value file")
    merge.add_argument("--column", help="CSV column holding the p-values")
    add_mode(merge)

    thresh = sub.add_parser("threshold", parents=[common], help="One threshold value")
    thresh.add_argument("--method", required=True)
    thresh.add_argument("--kind", type=_kind, required=True)
    thresh.add_argument("--epsilon", type=float, required=True)
    thresh.add_argument("--K", type=int, required=True)
    add_mode(thresh)

    table = sub.add_parser("table", parents=[common], help="Prices for validity")
    table.add_argument("--epsilon", type=_floats, help="Levels (default: 0.01; 0.05,0.01 with --log-ratio)")
    table.add_argument("--K", type=_ints)
    table.add_argument("--methods", type=_names)
    table.add_argument("--log-ratio", action="store_true", help="(1/log K) b/a layout")
    table.add_argument("--wide", action="store_true", help="One column per K")
    add_mode(table)

    simulate = sub.add_parser("simulate", parents=[common], help="RP curves over rho")
    simulate.add_argument("--case", type=SignalCase, required=True)
    simulate.add_argument("--K", type=int, required=True)
    simulate.add_argument("--epsilon", type=float, default=0.01)
    simulate.add_argument("--rho", type=_floats)
    simulate.add_argument("--N", type=int)
    simulate.add_argument("--methods", type=_names)
    simulate.add_argument("--kinds", type=lambda t: [_kind(k) for k in _names(t)])
    simulate.add_argument("--block-size", type=int, default=1000)
    simulate.add_argument("--svg", type=Path)

    ic = sub.add_parser("ic-check", parents=[common], help="Empirical IC-balance test")
    ic.add_argument("--method", required=True)
    ic.add_argument("--K", type=int, required=True)
    ic.add_argument("--N", type=int, default=100_000)
    ic.add_argument("--level", type=float)
    ic.add_argument("--lam", type=_floats, help="IC-mixture weights, e.g. 0.25,0.5,1")

    seq = sub.add_parser("sequential", parents=[common], help="Remove the smallest p-values")
    seq.add_argument("--input", type=Path, required=True)
    seq.add_argument("--column")
    seq.add_argument("--method", required=True)
    seq.add_argument("--kind", type=_kind, required=True)
    seq.add_argument("--epsilon", type=float, required=True)
    seq.add_argument("--svg", type=Path)
    add_mode(seq)

    return parser


def resolve_mode(args: argparse.Namespace, settings: Settings) -> Optional[ComputationMode]:
    match args.mode:
        case "auto":
            return None
        case "exact":
            return Exact()
        case "small-eps":
            return SmallEpsAsymptotic()
        case "large-k":
            return LargeKAsymptotic()
        case "monte-carlo":
            return MonteCarlo(
                replications=args.replications or settings.monte_carlo.replications,
                seed=args.seed,
                workers=args.workers,
            )


def resolved_config(args: argparse.Namespace, settings: Settings) -> dict:
    config = {k: v for k, v in vars(args).items() if k != "func"}
    config["settings_file"] = settings.source
    config["monte_carlo"] = settings.monte_carlo.model_dump()
    config["simulation_replications"] = settings.simulation.replications
    return config


def write_frame(frame: pd.DataFrame, args: argparse.Namespace, settings: Settings) -> None:
    digits = args.digits or settings.output.significant_digits
    if args.format == "json":
        text = frame.to_json(orient="records", double_precision=min(digits, 15)) + "\n"
    else:
        text = frame.to_csv(index=False, float_format=f"%.{digits}g", lineterminator="\n")
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)


def cmd_merge(args: argparse.Namespace, settings: Settings) -> pd.DataFrame:
    method = parse_method(args.method)
    if args.values is not None:
        p = inline_pvalues(args.values)
    else:
        p = ingest_pvalues(args.input, args.column)
    query = resolve_query(method, args.kind, args.epsilon, p.K, resolve_mode(args, settings))
    result = threshold(query)
    combined, adjusted = adjusted_pvalue(method, args.kind, p, args.epsilon, result.mode_used)
    record = {
        "method": canonical_method(method).name,
        "kind": str(args.kind),
        "K": p.K,
        "epsilon": args.epsilon,
        "combined": combined,
        "threshold": result.value,
        "adjusted": adjusted,
        "reject": combined < result.value,
        "mode": result.mode_used.tag,
    }
    return pd.DataFrame([record])


def cmd_threshold(args: argparse.Namespace, settings: Settings) -> pd.DataFrame:
    method = parse_method(args.method)
    query = resolve_query(method, args.kind, args.epsilon, args.K, resolve_mode(args, settings))
    result = threshold(query)
    record = {
        "method": canonical_method(method).name,
        "kind": str(args.kind),
        "K": args.K,
        "epsilon": args.epsilon,
        "value": result.value,
        "mode": result.mode_used.tag,
        **result.diagnostics.model_dump(),
    }
    return pd.DataFrame([record])


def cmd_table(args: argparse.Namespace, settings: Settings) -> pd.DataFrame:
    methods = [parse_method(m) for m in (args.methods or TABLE_METHODS)]
    if args.log_ratio:
        K_list = args.K or settings.tables.log_ratio_k_values
        epsilons = args.epsilon or [0.05, 0.01]
        frame = generate_log_ratio_table(epsilons, K_list, methods)
    else:
        K_list = args.K or settings.tables.k_values
        mode = resolve_mode(args, settings)
        frame = pd.concat(
            [generate_table(eps, K_list, methods, mode) for eps in args.epsilon or [0.01]],
            ignore_index=True,
        )
    return to_wide(frame) if args.wide else frame


def cmd_simulate(args: argparse.Namespace, settings: Settings) -> pd.DataFrame:
    names = args.methods or list(TABLE_METHODS)
    kinds = args.kinds or [ThresholdKind.VAD, ThresholdKind.VI]
    arms = [Arm(method=parse_method(name), kind=kind) for name in names for kind in kinds]
    template = ExperimentConfig(
        model=OneFactorGaussian(rho=0.0, mu=(0.0,) * args.K),
        arms=arms,
        epsilon=args.epsilon,
        replications=args.N or settings.simulation.replications,
        master_seed=args.seed,
        block_size=args.block_size,
    )
    curves = sweep_rho(template, args.case, args.rho, workers=args.workers)
    if args.svg:
        save_rp_curves(curves, args.svg)
    return curves


def cmd_ic_check(args: argparse.Namespace, settings: Settings) -> pd.DataFrame:
    return ic_balance_profile(
        parse_method(args.method), args.K, args.N, args.seed, args.lam, args.level, args.workers
    )


def cmd_sequential(args: argparse.Namespace, settings: Settings) -> pd.DataFrame:
    p = ingest_pvalues(args.input, args.column)
    method = parse_method(args.method)
    report = run_sequential(p, method, args.kind, args.epsilon, resolve_mode(args, settings))
    frame = report_frame(report)
    logger.info(f"stop_index={report.stop_index}")
    if args.svg:
        save_removal_curve(frame, report.method, args.epsilon, args.svg)
    return frame


COMMANDS = {
    "merge": cmd_merge,
    "threshold": cmd_threshold,
    "table": cmd_table,
    "simulate": cmd_simulate,
    "ic-check": cmd_ic_check,
    "sequential": cmd_sequential,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )
    settings = get_settings()
    if args.seed is None:
        args.seed = settings.seed
    if args.workers is None:
        args.workers = settings.monte_carlo.workers

    config = json.dumps(resolved_config(args, settings), default=str, sort_keys=True)
    logger.info(f"config {config}")
    if args.config_out:
        args.config_out.write_text(config + "\n")

    try:
        frame = COMMANDS[args.command](args, settings)
        write_frame(frame, args, settings)
    except (DomainError, RootFindingError, IntegrationError, IngestionError) as e:
        logger.debug("domain error", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValidationError, ConfigurationError, ValueError) as e:
        logger.debug("usage error", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PCombineError as e:
        logger.debug("numeric error", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK
