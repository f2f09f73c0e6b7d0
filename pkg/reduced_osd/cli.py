"""Command-line front end: `sim`, `cost` and `inspect`."""

from __future__ import annotations

import argparse
from collections.abc import Sequence
import logging
import sys
from typing import Any, TextIO

from .code import load_code
from .config import parse_cost_options, parse_inspect_options, parse_sim_config
from .const import (
    ALPHA_AUTO,
    CONF_ALPHA,
    CONF_BLR,
    CONF_BMAX,
    CONF_CHUNK_SIZE,
    CONF_CODE,
    CONF_DECODER,
    CONF_FRAMES,
    CONF_K,
    CONF_MAX_ERRORS,
    CONF_N,
    CONF_ORDER,
    CONF_OUT,
    CONF_P,
    CONF_SAMPLES,
    CONF_SEED,
    CONF_SNR,
    CONF_STAGES,
    CONF_TRANSMIT,
    CONF_WORKERS,
    DECODERS,
    EXIT_CONFIG_ERROR,
    EXIT_IO_ERROR,
    EXIT_OK,
    MISQUOTED_THREE_STAGE_COSTS,
    TRANSMIT_RANDOM,
    TRANSMIT_ZERO,
)
from .coordinator import SimulationCoordinator, format_csv
from .data import SnrResult
from .diagnostics import code_diagnostics
from .errors import ReducedOsdError
from .staged import ge_cost, optimize_alpha

_LOGGER = logging.getLogger(__name__)

# argparse destinations equal the option keys
_SIM_OPTIONS = (
    CONF_CODE,
    CONF_DECODER,
    CONF_ORDER,
    CONF_BMAX,
    CONF_STAGES,
    CONF_ALPHA,
    CONF_P,
    CONF_SNR,
    CONF_FRAMES,
    CONF_MAX_ERRORS,
    CONF_SEED,
    CONF_WORKERS,
    CONF_OUT,
    CONF_TRANSMIT,
    CONF_CHUNK_SIZE,
)


# -------------------------------
# region Cost
# -------------------------------


def cost_summary(n: int, k: int, b_lr: int, alpha: int | str | None = None) -> dict[str, Any]:
    """Resolve `auto` and evaluate the GE cost model.

    Raises:
        InvalidArgumentsError: sizes or alpha out of range.
    """
    if alpha == ALPHA_AUTO:
        alpha = optimize_alpha(n, k, b_lr)
    cost = ge_cost(n, k, b_lr, alpha)
    summary: dict[str, Any] = {
        "n": n,
        "k": k,
        "b_lr": b_lr,
        "alpha": cost.alpha,
        "full": cost.full,
        "two_stage": cost.two_stage,
        "three_stage": cost.three_stage,
        "note": None,
    }
    misquoted = MISQUOTED_THREE_STAGE_COSTS.get((n, k, b_lr, cost.alpha or 0))
    if misquoted is not None and misquoted != cost.three_stage:
        summary["note"] = (
            f"the often quoted {misquoted:,} for alpha={cost.alpha} does not match "
            f"the cost formula, which gives {cost.three_stage:,}"
        )
    return summary


def cost_report(n: int, k: int, b_lr: int, alpha: int | str | None = None) -> str:
    """Format the full / two-stage / three-stage costs as a table."""
    summary = cost_summary(n, k, b_lr, alpha)
    lines = [
        f"GE cost for n={n}, k={k}, |B_K,LR|={b_lr}",
        f"  {'full':<24}{summary['full']:>14,}",
        f"  {'two-stage':<24}{summary['two_stage']:>14,}",
    ]
    if summary["three_stage"] is not None:
        label = f"three-stage (alpha={summary['alpha']})"
        lines.append(f"  {label:<24}{summary['three_stage']:>14,}")
    if alpha == ALPHA_AUTO:
        lines.append(f"  optimal alpha: {summary['alpha']}")
    if summary["note"]:
        lines.append(f"  note: {summary['note']}")
    return "\n".join(lines)


# -------------------------------
# region Reports
# -------------------------------


def sim_table(results: list[SnrResult]) -> str:
    """Human-readable summary of a sweep with 95% WER intervals."""
    lines = [f"{'Eb/N0':>7} {'frames':>8} {'errors':>7} {'WER':>11} {'95% interval':>25} {'MLD-LB':>11}"]
    for r in results:
        low, high = r.wer_interval()
        interval = f"[{low:.3e}, {high:.3e}]"
        lines.append(
            f"{r.snr_db:>7g} {r.frames:>8} {r.word_errors:>7} {r.wer:>11.3e} {interval:>25} {r.mld_lb_wer:>11.3e}"
        )
    return "\n".join(lines)


def inspect_report(info: dict[str, Any]) -> str:
    """Format code diagnostics as `key: value` lines."""
    b_k = info["b_k"]
    cost = info["ge_cost"]
    return "\n".join(
        [
            f"code: {info['code']}",
            f"(n, k): ({info['n']}, {info['k']})",
            f"rate: {info['rate']:.4f}",
            f"B_K: {' '.join(str(c) for c in b_k)}",
            f"orderings sampled: {info['samples']} (seed {info['seed']})",
            f"|B_K,LR| mean: {info['mean_b_lr']:.3f}",
            f"|B_K,LR| max: {info['max_b_lr']}",
            f"|B_K,LR| != |P_N-K,MR|: {info['partition_violations']}",
            f"stage-2 dependencies mean: {info['mean_dependencies']:.3f}",
            f"stage-2 row additions mean: {info['mean_stage2_rowops']:.3f}",
            f"GE cost at max |B_K,LR|: full {cost['full']:,}, two-stage {cost['two_stage']:,}",
        ]
    )


# -------------------------------
# region Commands
# -------------------------------


def _cmd_sim(args: argparse.Namespace, out: TextIO) -> int:
    options = {
        key: getattr(args, key)
        for key in _SIM_OPTIONS
        if getattr(args, key) is not None
    }
    cfg, csv_path = parse_sim_config(options)
    results = SimulationCoordinator(cfg).run_sweep(csv_path)
    if csv_path is None:
        out.write(format_csv(results))
        print(sim_table(results), file=sys.stderr)
    else:
        print(sim_table(results), file=out)
    return EXIT_OK


def _cmd_cost(args: argparse.Namespace, out: TextIO) -> int:
    options = {CONF_N: args.n, CONF_K: args.k, CONF_BLR: args.blr}
    if args.alpha is not None:
        options[CONF_ALPHA] = args.alpha
    opts = parse_cost_options(options)
    print(cost_report(opts[CONF_N], opts[CONF_K], opts[CONF_BLR], opts[CONF_ALPHA]), file=out)
    return EXIT_OK


def _cmd_inspect(args: argparse.Namespace, out: TextIO) -> int:
    options: dict[str, Any] = {CONF_CODE: args.code}
    if args.samples is not None:
        options[CONF_SAMPLES] = args.samples
    if args.seed is not None:
        options[CONF_SEED] = args.seed
    opts = parse_inspect_options(options)
    code = load_code(opts[CONF_CODE])
    print(inspect_report(code_diagnostics(code, opts[CONF_SAMPLES], opts[CONF_SEED])), file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = argparse.ArgumentParser(
        prog="reduced-osd",
        description="Ordered-statistics decoding with reduced Gaussian elimination.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at debug level")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("sim", help="Monte-Carlo WER/BER simulation over an SNR sweep")
    sim.add_argument("--code", required=True, help="bch:m,t or file:PATH")
    sim.add_argument("--decoder", choices=DECODERS)
    sim.add_argument("--order", help="reprocessing order i")
    sim.add_argument("--bmax", help="restrict stage 2 to B_max rows")
    sim.add_argument("--stages", help="2 or 3")
    sim.add_argument("--alpha", help=f"three-stage split, integer or '{ALPHA_AUTO}'")
    sim.add_argument("--p", help="Chase-2 least reliable positions")
    sim.add_argument("--snr", required=True, help="comma-separated Eb/N0 points in dB")
    sim.add_argument("--frames", help="maximum frames per point")
    sim.add_argument("--max-errors", dest="max_errors", help="stop a point after this many word errors")
    sim.add_argument("--seed")
    sim.add_argument("--workers", help="worker processes")
    sim.add_argument("--out", help="CSV output path (stdout if omitted)")
    sim.add_argument("--transmit", choices=[TRANSMIT_ZERO, TRANSMIT_RANDOM])
    sim.add_argument("--chunk-size", dest="chunk_size", help="frames per worker task")
    sim.set_defaults(func=_cmd_sim)

    cost = sub.add_parser("cost", help="Gaussian-elimination cost model")
    cost.add_argument("--n", required=True)
    cost.add_argument("--k", required=True)
    cost.add_argument("--blr", required=True, help="|B_K,LR|")
    cost.add_argument("--alpha", help=f"integer or '{ALPHA_AUTO}'")
    cost.set_defaults(func=_cmd_cost)

    inspect = sub.add_parser("inspect", help="code summary and partition statistics")
    inspect.add_argument("--code", required=True, help="bch:m,t or file:PATH")
    inspect.add_argument("--samples", help="random orderings to sample")
    inspect.add_argument("--seed")
    inspect.set_defaults(func=_cmd_inspect)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    """Run the CLI and return its exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args, out or sys.stdout)
    except ReducedOsdError as err:
        _LOGGER.error("%s", err)
        return EXIT_CONFIG_ERROR
    except OSError as err:
        _LOGGER.error("%s", err)
        return EXIT_IO_ERROR
