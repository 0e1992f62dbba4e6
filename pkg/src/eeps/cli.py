"""Command-line entry point: eeps <experiment> [flags].

Flag values override config-file values, which override defaults.  The
config file is plain "key = value" text; list-valued keys take
space- or comma-separated entries.  EEPS_THREADS in the environment
overrides the thread count.
"""

from __future__ import annotations

import argparse
import os
import sys

from .experiments import EXPERIMENTS, ExperimentConfig, run_experiment
from .plots import emit_svg

_LIST_INT = ("L", "N")
_LIST_FLOAT = ("filling", "W")
_SCALAR_FLOAT = ("V", "mu", "coupling")
_SCALAR_INT = ("realizations", "samples", "seed", "threads")


def parse_config_file(path: str) -> dict:
    """Key-value config: one 'key = value' per line, '#' comments."""
    values: dict = {}
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            items = val.replace(",", " ").split()
            if key in _LIST_INT:
                values[key] = tuple(int(x) for x in items)
            elif key in _LIST_FLOAT:
                values[key] = tuple(float(x) for x in items)
            elif key in _SCALAR_FLOAT:
                values[key] = float(val)
            elif key in _SCALAR_INT:
                values[key] = int(val)
            elif key == "models":
                values[key] = tuple(items)
            elif key == "svg":
                values[key] = val.lower() in ("1", "true", "yes")
            elif key == "out":
                values[key] = val
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="eeps",
        description="Entanglement-erasure experiments (CSV/SVG output).",
    )
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--L", type=int, nargs="+", help="system size(s)")
    p.add_argument("--N", type=int, nargs="+", help="particle numbers (band indices for tb-bands)")
    p.add_argument("--filling", type=float, nargs="+", help="N/L ratios (erasure-factor)")
    p.add_argument("--W", type=float, nargs="+", help="disorder strengths")
    p.add_argument("--V", type=float, help="density-density interaction (mbl-erasure)")
    p.add_argument("--mu", type=float, help="staggered potential strength")
    p.add_argument("--coupling", type=float, help="central-site coupling")
    p.add_argument("--models", nargs="+", help="models for erasure-factor")
    p.add_argument("--realizations", type=int, help="disorder realizations")
    p.add_argument("--samples", type=int, help="Monte Carlo samples")
    p.add_argument("--seed", type=int, help="experiment seed")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--svg", action="store_true", default=None, help="also write an SVG chart")
    p.add_argument("--config", help="key-value config file")
    p.add_argument("--threads", type=int, help="worker threads (env EEPS_THREADS overrides)")
    return p


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values: dict = {}
    if args.config:
        values.update(parse_config_file(args.config))
    for key in (*_LIST_INT, *_LIST_FLOAT, *_SCALAR_FLOAT, *_SCALAR_INT, "models", "out", "svg"):
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            values[key] = tuple(cli_val) if isinstance(cli_val, list) else cli_val
    env_threads = os.environ.get("EEPS_THREADS")
    if env_threads:
        values["threads"] = int(env_threads)
    kwargs = {k: v for k, v in values.items() if v is not None}
    return ExperimentConfig(experiment=args.experiment, **kwargs)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        csv_path = run_experiment(config)
        print(f"wrote {csv_path}")
        if config.svg:
            svg_path = emit_svg(csv_path, config.experiment)
            print(f"wrote {svg_path}")
    except (ValueError, OSError) as exc:
        print(f"eeps: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
