"""
Command-line entry point.

    ckg run --config run.yaml [--output-dir DIR]
    ckg preset fig2 --output-dir DIR
    ckg list-presets

Exit codes: 0 success, 1 configuration error, 2 runtime failure (blow-up,
resonance, or any other error during the run).  ``CKG_OUTPUT_ROOT`` sets the
parent directory used when ``--output-dir`` is not given.
"""

import argparse
import logging
import os
import sys
from pathlib import Path

from .config import load_config
from .errors import ConfigError, ParameterError
from .presets import PRESETS, run_preset
from .runner import run

OUTPUT_ROOT_ENV = "CKG_OUTPUT_ROOT"


def _default_dir(name):
    return Path(os.environ.get(OUTPUT_ROOT_ENV, ".")) / name


def build_parser():
    parser = argparse.ArgumentParser(prog="ckg", description="Coupled Klein-Gordon pseudospectral solver")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a YAML configuration")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--output-dir", type=Path)

    p = sub.add_parser("preset", help="run a built-in experiment")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--output-dir", type=Path)
    p.add_argument("--workers", type=int, default=1, help="processes for convergence ladders")

    sub.add_parser("list-presets", help="list built-in experiments")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")

    if args.command == "list-presets":
        width = max(map(len, PRESETS))
        for name, preset in PRESETS.items():
            print(f"{name:<{width}}  {preset.description}")
        return 0

    if args.command == "run":
        try:
            config = load_config(args.config)
        except (ConfigError, ParameterError, OSError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 1
        out = args.output_dir or (None if config.output_dir else _default_dir(config.name))
        manifest = run(config, out)
        if manifest.status != "completed":
            print(f"{manifest.status}: {manifest.message}", file=sys.stderr)
        return manifest.exit_code

    out = args.output_dir or _default_dir(args.name)
    try:
        return run_preset(args.name, out, workers=args.workers)
    except Exception as exc:
        print(f"preset {args.name} failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
