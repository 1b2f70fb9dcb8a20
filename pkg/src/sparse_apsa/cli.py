"""Command-line front end.

Subcommands::

    sparse-apsa simulate       run Monte Carlo experiments, write MSE CSVs + manifest
    sparse-apsa noise-check    compare sampler against the characteristic function
    sparse-apsa penalty-curve  tabulate the ZA / RZA / RL1 penalty strengths

Exit codes: 0 success, 1 check failed (noise-check only), 2 bad
configuration, 3 I/O failure.

CSV numbers are written with 17 significant digits (``%.17g``), enough to
round-trip a double exactly, so repeated runs give byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .adaptive_filters import ReweightedL1, ReweightedZeroAttracting, ZeroAttracting, penalty_curve
from .config import PRESETS, ConfigError, build_experiments, load_preset, parse_override, read_config_file, resolve
from .mc_harness import run_experiment, steady_state_mse
from .stable_noise import StableParams, characteristic_fn, empirical_cf, sample_vector

log = logging.getLogger("sparse_apsa")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3
FLOAT_FORMAT = ".17g"
MANIFEST_NAME = "manifest.json"


def _fmt(value) -> str:
    return format(float(value), FLOAT_FORMAT)


def write_csv(path, header, columns) -> None:
    """Write equal-length numeric ``columns`` under ``header``.

    Integer-valued first columns (iteration counters) are written as ints.
    """
    path = Path(path)
    rows = zip(*columns)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, (int, np.integer)) else _fmt(v) for v in row])


def write_curves_csv(path, curves) -> None:
    n = len(curves[0].mse_db)
    write_csv(
        path,
        ["iteration"] + [c.label for c in curves],
        [list(range(n))] + [c.mse_db for c in curves],
    )


def penalty_curve_table(eps_rza: float = 20.0, delta_rl1: float = 0.01, step: float = 1e-3):
    """Grid over [-1, 1] with the three unscaled penalty strengths."""
    n = int(round(1.0 / step))
    grid = np.arange(-n, n + 1) / n
    return {
        "w": grid,
        "zeta_za": penalty_curve(ZeroAttracting(), grid),
        "zeta_rza": penalty_curve(ReweightedZeroAttracting(eps=eps_rza), grid),
        "zeta_rl1": penalty_curve(ReweightedL1(delta=delta_rl1), grid),
    }


# ---------------------------------------------------------------- simulate


def _resolve_simulate_config(args) -> tuple:
    layers = []
    if args.config is not None:
        layers.append(read_config_file(args.config))
    if args.preset is not None:
        layers.append(load_preset(args.preset))
    cli_layer = {}
    for item in args.set or []:
        key, value = parse_override(item)
        cli_layer[key] = value
    for flag, key in (("seed", "master_seed"), ("runs", "n_runs"), ("iterations", "n_iterations")):
        if getattr(args, flag) is not None:
            cli_layer[key] = getattr(args, flag)
    layers.append(cli_layer)
    flat = resolve(*layers)
    return flat, build_experiments(flat)


def cmd_simulate(args) -> int:
    if args.config is not None and args.preset is not None:
        print("error: --config and --preset are mutually exclusive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        flat, experiments = _resolve_simulate_config(args)
    except ConfigError as exc:
        print(f"error: bad configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_dir = Path(args.out_dir)
    started = time.perf_counter()
    entries = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for exp in experiments:
            curves = run_experiment(exp, threads=args.threads)
            csv_path = out_dir / f"{exp.name}.csv"
            write_curves_csv(csv_path, curves)
            window = min(flat["steady_window"], exp.n_iterations)
            summary = {c.label: steady_state_mse(c, window) for c in curves}
            entries.append({"name": exp.name, "csv": csv_path.name, "config": exp.to_dict(),
                            "steady_state_db": summary})
            print(f"{exp.name}: wrote {csv_path}")
            for label, value in summary.items():
                print(f"  {label:>14s}  steady-state {value:8.3f} dB")
        manifest = {
            "artifact_version": __version__,
            "master_seed": flat["master_seed"],
            "steady_window": flat["steady_window"],
            "resolved_config": flat,
            "experiments": entries,
            "outputs": [e["csv"] for e in entries],
            "wall_clock_seconds": time.perf_counter() - started,
        }
        (out_dir / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n")
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# ------------------------------------------------------------- noise-check


def _parse_grid(text: str):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError("t-grid", f"expected comma-separated numbers, got {text!r}") from None
    if not values or not all(np.isfinite(values)):
        raise ConfigError("t-grid", "expected at least one finite value")
    return np.array(values)


def cmd_noise_check(args) -> int:
    try:
        params = StableParams(args.alpha, args.beta, args.gamma, args.delta)
        t = _parse_grid(args.t_grid)
        if args.samples < 1:
            raise ConfigError("samples", "must be >= 1")
    except (ConfigError, ValueError) as exc:
        print(f"error: bad parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    rng = np.random.default_rng(args.seed)
    x = sample_vector(params, args.samples, rng)
    emp = empirical_cf(x, t)
    ana = characteristic_fn(params, t)
    err = np.abs(emp - ana)

    # Gaussian reference with the dispersion-matched variance 2*gamma
    half_width = args.hist_range * params.scale
    edges = np.linspace(params.delta - half_width, params.delta + half_width, args.bins + 1)
    counts, _ = np.histogram(x, bins=edges)
    widths = np.diff(edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    density = counts / (args.samples * widths)
    var = 2.0 * params.gamma
    gauss = np.exp(-((centers - params.delta) ** 2) / (2 * var)) / np.sqrt(2 * np.pi * var)

    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        write_csv(out_dir / "noise_cf.csv",
                  ["t", "empirical_re", "empirical_im", "analytic_re", "analytic_im", "abs_error"],
                  [t, emp.real, emp.imag, ana.real, ana.imag, err])
        write_csv(out_dir / "noise_hist.csv",
                  ["bin_left", "bin_right", "density_stable", "density_gaussian"],
                  [edges[:-1], edges[1:], density, gauss])
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO

    worst = float(err.max())
    ok = worst < args.threshold
    print(f"{params}: max |CF error| = {worst:.5f} over t={t.tolist()} "
          f"({args.samples} samples) -> {'PASS' if ok else 'FAIL'} (threshold {args.threshold})")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


# ----------------------------------------------------------- penalty-curve


def cmd_penalty_curve(args) -> int:
    try:
        table = penalty_curve_table(args.eps_rza, args.delta_rl1)
    except ValueError as exc:
        print(f"error: bad parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        Path(args.output).parent.mkdir(parents=True, exist_ok=True)
        write_csv(args.output, list(table), list(table.values()))
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparse-apsa", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run Monte Carlo MSE experiments")
    sim.add_argument("--config", help="flat TOML config file layered over the defaults")
    sim.add_argument("--preset", choices=PRESETS, help="named preset (default: 'default')")
    sim.add_argument("--seed", type=int, help="master seed")
    sim.add_argument("--runs", type=int, help="Monte Carlo runs M (paper scale: 1000)")
    sim.add_argument("--iterations", type=int, help="iterations per run")
    sim.add_argument("--threads", type=int, default=1, help="worker threads (output unaffected)")
    sim.add_argument("--out-dir", default="results", help="output directory")
    sim.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
    sim.set_defaults(func=cmd_simulate)

    nc = sub.add_parser("noise-check", help="validate the alpha-stable sampler")
    nc.add_argument("--alpha", type=float, default=1.2)
    nc.add_argument("--beta", type=float, default=0.0)
    nc.add_argument("--gamma", type=float, default=0.6)
    nc.add_argument("--delta", type=float, default=0.0)
    nc.add_argument("--samples", type=int, default=100_000)
    nc.add_argument("--t-grid", default="0.5,1,2", help="comma-separated CF evaluation points")
    nc.add_argument("--threshold", type=float, default=0.02, help="max allowed |CF error|")
    nc.add_argument("--bins", type=int, default=200)
    nc.add_argument("--hist-range", type=float, default=10.0,
                    help="histogram half-width in units of gamma**(1/alpha)")
    nc.add_argument("--seed", type=int, default=0)
    nc.add_argument("--out-dir", default="results")
    nc.set_defaults(func=cmd_noise_check)

    pc = sub.add_parser("penalty-curve", help="tabulate penalty strengths over [-1, 1]")
    pc.add_argument("--output", default="penalty_curve.csv")
    pc.add_argument("--eps-rza", type=float, default=20.0)
    pc.add_argument("--delta-rl1", type=float, default=0.01)
    pc.set_defaults(func=cmd_penalty_curve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse usage errors are configuration errors
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
