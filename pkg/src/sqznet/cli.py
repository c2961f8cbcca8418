"""Command-line front end: frequency sweeps to CSV, and self-verification.

Exit codes: 0 success, 1 configuration/validation error, 2 verification
failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from collections.abc import Sequence

from .analysis import bare_source_variance
from .config import ConfigError, PRESETS, GridSpec, ScenarioConfig, load_config, load_preset
from .network import DARK, DETECTION, SRC, build_mach_zehnder, sweep


# 12 significant digits: independent rounding of the budget columns must
# stay well inside the 1e-9 closure guarantee on the formatted values.
def _fmt(x: float) -> str:
    return f"{x:.11e}"


def write_csv(cfg: ScenarioConfig, out_path: str) -> None:
    """Sweep the scenario and write one CSV row per grid frequency.

    Columns: frequency_hz, v_total, v_total_db, shot_ref, then the optional
    bare-OPA comparison curve, then per-source budget columns.
    """
    net = build_mach_zehnder(cfg.mach_zehnder)
    models = net.source_models({SRC: cfg.mach_zehnder.src_model})
    grid = cfg.grid.frequencies()
    points = sweep(net, grid, models)
    budget_cols: list[str] = []
    if cfg.include_budget:
        budget_cols = list(net.source_ids()) + [DETECTION, DARK]
    header = ["frequency_hz", "v_total", "v_total_db", "shot_ref"]
    if cfg.include_bare_opa:
        header.append("v_bare_opa")
    header += budget_cols
    lines = [",".join(header)]
    for pt in points:
        row = [_fmt(pt.frequency_hz), _fmt(pt.v_plus), _fmt(pt.v_plus_db), _fmt(1.0)]
        if cfg.include_bare_opa:
            omega = 2.0 * math.pi * pt.frequency_hz
            row.append(_fmt(bare_source_variance(cfg.mach_zehnder, omega)))
        row += [_fmt(pt.contributions[c]) for c in budget_cols]
        lines.append(",".join(row))
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqznet",
        description="Frequency-domain noise spectra of a single-OPA "
        "noise-cancellation interferometer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run a scenario and write a CSV spectrum")
    src = sw.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="YAML scenario file")
    src.add_argument("--preset", choices=sorted(PRESETS), help="shipped scenario preset")
    sw.add_argument("--out", required=True, help="output CSV path")
    sw.add_argument("--fmin", type=float, help="override grid minimum (Hz)")
    sw.add_argument("--fmax", type=float, help="override grid maximum (Hz)")
    sw.add_argument("--points", type=int, help="override grid point count")
    sw.add_argument("--spacing", choices=["log", "linear"], help="override grid spacing")
    sw.add_argument("--budget", action="store_true", help="force per-source budget columns")

    vf = sub.add_parser("verify", help="run the built-in physics consistency suites")
    vf.add_argument("--seed", type=int, default=0, help="RNG seed for the random draws")
    vf.add_argument("--draws", type=int, default=10_000, help="consistency-suite draw count")
    return parser


def _run_sweep(args: argparse.Namespace) -> int:
    try:
        cfg = load_preset(args.preset) if args.preset else load_config(args.config)
        grid = cfg.grid
        if any(v is not None for v in (args.fmin, args.fmax, args.points, args.spacing)):
            grid = GridSpec(
                min_hz=args.fmin if args.fmin is not None else grid.min_hz,
                max_hz=args.fmax if args.fmax is not None else grid.max_hz,
                points=args.points if args.points is not None else grid.points,
                spacing=args.spacing if args.spacing is not None else grid.spacing,
            )
        cfg = ScenarioConfig(
            mach_zehnder=cfg.mach_zehnder,
            grid=grid,
            include_budget=cfg.include_budget or args.budget,
            include_bare_opa=cfg.include_bare_opa,
        )
        write_csv(cfg, args.out)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def _run_verify(args: argparse.Namespace) -> int:
    from . import verify

    results = verify.run_all(seed=args.seed, draws=args.draws)
    for result in results:
        print(result.line())
    return 0 if all(r.passed for r in results) else 2


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "sweep":
        return _run_sweep(args)
    return _run_verify(args)


if __name__ == "__main__":
    sys.exit(main())
