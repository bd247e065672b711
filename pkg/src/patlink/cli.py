"""Command-line entry point: resumable file-to-file stages driven by a config.

    patlink synth --out demo            # generate a synthetic corpus
    patlink run-all --config demo/patlink.yaml
    patlink serve --config demo/patlink.yaml --port 8000

Exit codes: 0 success, 2 missing input file, 3 invalid configuration,
64 unknown subcommand.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import pipeline, synth
from .config import RunConfig, load_config
from .errors import ConfigError, PatlinkError

EXIT_OK = 0
EXIT_MISSING_INPUT = 2
EXIT_BAD_CONFIG = 3
EXIT_USAGE = 64

STAGE_COMMANDS = list(pipeline.STAGES) + ["run-all"]
COMMANDS = STAGE_COMMANDS + ["serve", "synth"]


def _usage() -> str:
    return (
        "usage: patlink <command> [options]\n"
        f"commands: {', '.join(COMMANDS)}\n"
        "common options: --config PATH --stage-dir PATH --seed N --verbose\n"
    )


def _build_parser(command: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=f"patlink {command}")
    if command == "synth":
        parser.add_argument("--out", required=True, help="output directory for the corpus")
        parser.add_argument("--seed", type=int, default=42)
        parser.add_argument("--homonym", action="store_true",
                            help="generate the single-homonym fan-out corpus instead")
        parser.add_argument("--verbose", action="store_true")
        return parser
    parser.add_argument("--config", default="patlink.yaml", help="run configuration file")
    parser.add_argument("--stage-dir", default=None, help="override the stage directory")
    parser.add_argument("--seed", type=int, default=None, help="override the global seed")
    parser.add_argument("--verbose", action="store_true")
    if command == "serve":
        parser.add_argument("--host", default="127.0.0.1")
        parser.add_argument("--port", type=int, default=8000)
    return parser


def _load(args) -> RunConfig:
    cfg = load_config(args.config)
    if args.stage_dir:
        cfg.stage_dir = args.stage_dir
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        print(_usage())
        return EXIT_OK
    command, rest = argv[0], argv[1:]
    if command not in COMMANDS:
        sys.stderr.write(f"patlink: unknown subcommand {command!r}\n{_usage()}")
        return EXIT_USAGE
    args = _build_parser(command).parse_args(rest)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s")

    if command == "synth":
        generate = synth.generate_homonym_corpus if args.homonym else synth.generate_corpus
        config_path = generate(args.out, seed=args.seed)
        print(f"synthetic corpus written; config at {config_path}")
        return EXIT_OK

    try:
        cfg = _load(args)
    except ConfigError as exc:
        sys.stderr.write(f"patlink: configuration error: {exc}\n")
        return EXIT_BAD_CONFIG

    try:
        if command == "serve":
            import uvicorn

            from .review import create_app
            uvicorn.run(create_app(cfg), host=args.host, port=args.port, log_level="info")
            return EXIT_OK
        if command == "run-all":
            summary = pipeline.run_all(cfg)
        else:
            summary = {command: pipeline.STAGES[command](cfg)}
        for stage_name, stats in summary.items():
            print(f"{stage_name}: {stats}")
        return EXIT_OK
    except FileNotFoundError as exc:
        sys.stderr.write(f"patlink: {command}: missing input file: {exc}\n")
        return EXIT_MISSING_INPUT
    except ConfigError as exc:
        sys.stderr.write(f"patlink: configuration error: {exc}\n")
        return EXIT_BAD_CONFIG
    except PatlinkError as exc:
        sys.stderr.write(f"patlink: {command} failed: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
