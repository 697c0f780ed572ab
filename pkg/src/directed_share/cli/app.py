# SPDX-License-Identifier: GPL-3.0-or-later
# Copyright (c) 2025 Santiago Bossa
#
# This file is part of directed-share.
#
# directed-share is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# directed-share is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with directed-share.  If not, see the LICENSE file in the project root.

"""
``directed-share`` command-line entry point.

Usage::

    directed-share synth --seed 7 --out data/
    directed-share evaluate --data data/ --out eval/ --set max_depth=4
    directed-share stats ttest --summary 301,4.18,0.95 665,3.70,1.11

Exit codes: 0 on success, 1 when the run fails on bad input or a violated
precondition (one ``error: <reason>`` line on stderr), 2 on usage errors.

Every run with ``--out`` leaves ``resolved-config.txt`` (replayable with
``--config``) and ``run.log`` in the output directory. Timestamps only ever
appear in ``run.log``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from ..config import dump_kv, load_kv
from ..errors import ContractError, DirectedShareError
from ..io.csvio import write_text
from . import commands
from .params import RunConfig, parse_set

log = logging.getLogger("directed_share.cli")

__all__ = ["build_parser", "run", "main"]

PACKAGE_LOGGER = "directed_share"

# command -> (input flags, alternatives accepted in place of all of them)
INPUTS: Dict[str, Tuple[Tuple[str, ...], Tuple[str, ...]]] = {
    "ingest": (("data",), ()),
    "recommend": (("likes", "friends"), ()),
    "featurize": (("data",), ()),
    "train": (("features",), ("data",)),
    "evaluate": (("features",), ("data",)),
    "ablate": (("features",), ("data",)),
    "simulate": (("graph", "seeds"), ()),
    "stats ttest": ((), ()),
    "stats lmm": (("ratings",), ()),
    "stats analyze": (("data",), ()),
    "synth": ((), ()),
}
OPTIONAL_INPUTS = {"simulate": ("likes",)}
# command -> flags that override the parameter of the same name
PARAM_FLAGS: Dict[str, Tuple[str, ...]] = {"recommend": ("user", "k", "n")}
PRINT_ONLY = {"stats ttest", "stats lmm"}


# --------------------------------------------------------------------------- #
# Parser
# --------------------------------------------------------------------------- #
def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    p.add_argument("--config", help="key=value parameter file")
    p.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one parameter (repeatable)",
    )
    p.add_argument("--out", help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="worker threads (default 1)")
    p.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="stderr log level",
    )
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="directed-share",
        description="Ego-network recommendation, share prediction, diffusion "
        "simulation and statistics for directed sharing studies.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, help_: str, *flags: str, container=sub) -> argparse.ArgumentParser:
        p = container.add_parser(name, parents=[common], help=help_)
        for flag in flags:
            p.add_argument(f"--{flag}")
        return p

    add("ingest", "validate a study directory and write a normalized copy", "data")
    rec = add("recommend", "top-n ego-network recommendations", "likes", "friends")
    rec.add_argument("--user", help="recommend for this user only (default: every user)")
    rec.add_argument("--k", type=int, help="neighbors per ego network")
    rec.add_argument("--n", type=int, help="list length")
    add("featurize", "feature vectors for every share decision", "data")
    add("train", "train a decision tree on one balanced dataset", "features", "data")
    add("evaluate", "cross-validate over balanced datasets", "features", "data")
    add("ablate", "cross-validate per feature group", "features", "data")
    add("simulate", "run a cascade simulation", "graph", "seeds", "likes")
    add("synth", "generate a synthetic study")

    stats = sub.add_parser("stats", help="statistical tests")
    ssub = stats.add_subparsers(dest="stats_command", required=True, metavar="TEST")
    ttest = add("ttest", "t-test from two n,mean,sd summaries", container=ssub)
    ttest.add_argument("--summary", nargs=2, required=True, metavar="N,MEAN,SD")
    ttest.add_argument("--pooled", action="store_true", help="equal-variance t-test")
    add("lmm", "mixed-model likelihood-ratio test", "ratings", container=ssub)
    add("analyze", "study comparison tables", "data", container=ssub)
    return parser


# --------------------------------------------------------------------------- #
# Resolution
# --------------------------------------------------------------------------- #
def _resolve(parser: argparse.ArgumentParser, args: argparse.Namespace) -> RunConfig:
    command = args.command
    if command == "stats":
        command = f"stats {args.stats_command}"
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")

    values: Dict[str, str] = load_kv(args.config) if args.config else {}
    values.update(parse_set(args.set))
    for key in PARAM_FLAGS.get(command, ()):
        if getattr(args, key, None) is not None:
            values[key] = str(getattr(args, key))

    if args.seed is not None:
        seed = args.seed
    else:
        try:
            seed = int(values.get("seed", "0"))
        except ValueError as exc:
            raise ContractError(f"seed: cannot parse {values['seed']!r} as int") from exc

    required, alternatives = INPUTS[command]
    names = required + alternatives + OPTIONAL_INPUTS.get(command, ())
    inputs: Dict[str, str] = {}
    for name in names:
        value = getattr(args, name, None) or values.get(f"input.{name}")
        if value:
            inputs[name] = value
    have_required = all(n in inputs for n in required)
    have_alternative = bool(alternatives) and all(n in inputs for n in alternatives)
    if not (have_required or have_alternative):
        wanted = " ".join(f"--{n}" for n in required)
        if alternatives:
            wanted += " (or " + " ".join(f"--{n}" for n in alternatives) + ")"
        parser.error(f"{command}: {wanted} required")
    if have_required and alternatives:
        for n in alternatives:
            inputs.pop(n, None)

    if args.out is None and command not in PRINT_ONLY:
        parser.error(f"{command}: --out is required")
    out = Path(args.out) if args.out is not None else None
    return RunConfig(command, seed, out, args.jobs, inputs, values)


# --------------------------------------------------------------------------- #
# Logging
# --------------------------------------------------------------------------- #
def _setup_logging(cfg: RunConfig, level: str) -> Tuple[logging.Logger, List[logging.Handler], int]:
    logger = logging.getLogger(PACKAGE_LOGGER)
    previous = logger.level
    handlers: List[logging.Handler] = []

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(level)
    console.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handlers.append(console)
    file_level = logging.INFO
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        fh = logging.FileHandler(cfg.out / "run.log", mode="w", encoding="utf-8")
        fh.setLevel(min(file_level, logging.getLevelName(level)))
        fh.setFormatter(
            logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
        )
        handlers.append(fh)
    for h in handlers:
        logger.addHandler(h)
    logger.setLevel(min(h.level for h in handlers))
    return logger, handlers, previous


def _teardown(logger: logging.Logger, handlers: Sequence[logging.Handler], previous: int) -> None:
    for h in handlers:
        logger.removeHandler(h)
        h.close()
    logger.setLevel(previous)


# --------------------------------------------------------------------------- #
# run / main
# --------------------------------------------------------------------------- #
def _dispatch(cfg: RunConfig, args: argparse.Namespace) -> str:
    unused = cfg.unused_keys()
    if unused:
        log.warning("ignoring parameter(s) not used by %s: %s", cfg.command, ", ".join(unused))
    resolved = cfg.resolved()
    if cfg.out is not None:
        write_text(cfg.out / "resolved-config.txt", dump_kv(resolved))
    log.info("running %s (seed=%d, jobs=%d)", cfg.command, cfg.seed, cfg.jobs)
    if cfg.command == "stats ttest":
        return commands.cmd_stats_ttest(cfg, args.summary, args.pooled)
    return commands.COMMANDS[cfg.command](cfg)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse *argv*, execute the subcommand and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _resolve(parser, args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else (0 if exc.code is None else 2)
    except DirectedShareError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    logger, handlers, previous = _setup_logging(cfg, args.log_level)
    try:
        text = _dispatch(cfg, args)
    except DirectedShareError as exc:
        log.debug("%s failed", cfg.command, exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        _teardown(logger, handlers, previous)
    if text:
        sys.stdout.write(text)
    return 0


def main() -> None:  # pragma: no cover
    sys.exit(run())
