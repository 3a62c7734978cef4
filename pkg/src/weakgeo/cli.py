"""Command-line entry point: ``weakgeo <command> [--config FILE] [flags]``.

Exit status is 0 when every assertion holds, 1 on an assertion or optimizer
failure, and 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import INITS, ConfigError, ExperimentConfig
from .experiments import COMMANDS
from .geodesic import OptimizationError

log = logging.getLogger("weakgeo")


def _coords(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    return [float(c) for c in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weakgeo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", help="JSON file with experiment settings")
        cmd.add_argument("--dim", type=int)
        cmd.add_argument("--p", type=_coords, help="comma-separated coordinates, zero-padded")
        cmd.add_argument("--q", type=_coords, help="comma-separated coordinates, zero-padded")
        cmd.add_argument("--n-max", dest="n_max", type=int)
        cmd.add_argument("--segments", type=int)
        cmd.add_argument("--metric", choices=("weak", "euclidean"))
        cmd.add_argument("--seed", type=int)
        cmd.add_argument("--out", help="CSV output path (default: stdout)")
        cmd.add_argument("--quad-nodes", dest="quad_nodes", type=int)
        cmd.add_argument("--quad-panels", dest="quad_panels", type=int)
        cmd.add_argument("--max-iters", dest="max_iters", type=int)
        cmd.add_argument("--grad-tol", dest="grad_tol", type=float)
        cmd.add_argument("--init", choices=INITS)
        cmd.add_argument("--detour-n", dest="detour_n", type=int)
        cmd.add_argument("--perturb", type=float)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = ExperimentConfig.load(args.config, overrides)
    except (ConfigError, TypeError) as exc:
        log.error("config error: %s", exc)
        return 2

    try:
        table = COMMANDS[args.command](cfg)
    except OptimizationError as exc:
        log.error("optimizer failed: %s", exc)
        return 1

    body = table.to_csv()
    if cfg.out:
        Path(cfg.out).write_text(body)
    else:
        sys.stdout.write(body)
    if table.summary:
        log.info(json.dumps(table.summary, sort_keys=True))
    if not table.ok:
        log.error("%s: assertion failed", args.command)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
