"""``fracstab`` command-line interface.

Usage::

    fracstab simulate|stabilize|analyze|ml-eval [--config PATH] [--preset NAME]
                                                [--out PATH] [--format csv|json]

Exit codes: 0 success, 2 invalid configuration or parameters, 3 numerical
failure, 4 not stabilizable.  ``FRACSTAB_LOG`` (error, info, debug) sets the
verbosity of diagnostics on stderr; it never changes results.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import experiment
from .errors import ConfigError, FracstabError, NotStabilizableError, NumericError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_NOT_STABILIZABLE = 4

LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}

log = logging.getLogger("fracstab")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="fracstab", description="Caputo fractional diffusion: simulation and stabilization.")
    parser.add_argument("command", choices=experiment.COMMANDS)
    parser.add_argument("--config", type=Path, help="JSON experiment configuration")
    parser.add_argument("--preset", choices=experiment.PRESETS, help="built-in configuration")
    parser.add_argument("--out", type=Path, help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), help="output format (default: from config, else csv)")
    ml = parser.add_argument_group("ml-eval shortcuts")
    ml.add_argument("--alpha", type=float, help="first Mittag-Leffler parameter")
    ml.add_argument("--beta", type=float, default=None, help="second Mittag-Leffler parameter (default 1)")
    ml.add_argument("--z", action="append", help="argument (repeatable; complex as '1+2j')")
    return parser


def configure_logging() -> None:
    raw = os.environ.get("FRACSTAB_LOG", "error").strip().lower()
    level = LOG_LEVELS.get(raw, logging.ERROR)
    if not log.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        log.addHandler(handler)
    log.setLevel(level)
    if raw not in LOG_LEVELS:
        log.error("FRACSTAB_LOG=%r is not one of %s; using 'error'", raw, ", ".join(LOG_LEVELS))


def atomic_write(path: Path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and an atomic rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _side_path(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix)


def _raw_config(args) -> tuple[dict, Path | None]:
    if args.config is not None and args.preset is not None:
        raise ConfigError(["give either --config or --preset, not both"])
    if args.preset is not None:
        return experiment.preset(args.preset), None
    if args.config is not None:
        import json

        try:
            text = args.config.read_text()
        except OSError as exc:
            raise ConfigError([f"cannot read config {str(args.config)!r}: {exc.strerror}"]) from None
        try:
            return json.loads(text), args.config.parent
        except json.JSONDecodeError as exc:
            raise ConfigError([f"config {str(args.config)!r} is not valid JSON: {exc}"]) from None
    if args.command == "ml-eval":
        return {}, None
    raise ConfigError(["no configuration: pass --config PATH or --preset NAME"])


def _apply_ml_flags(raw: dict, args) -> dict:
    if args.alpha is not None:
        raw["alpha"] = args.alpha
    if args.z is not None or args.beta is not None:
        block = dict(raw.get("ml_eval", {}))
        if args.beta is not None:
            block["beta"] = args.beta
        if args.z is not None:
            block["z"] = [_number(z) for z in args.z]
        raw["ml_eval"] = block
    return raw


def _number(text: str):
    try:
        return float(text)
    except ValueError:
        return text


def main(argv=None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        raw, base = _raw_config(args)
        if args.command == "ml-eval":
            raw = _apply_ml_flags(raw, args)
        cfg = experiment.parse_config(raw, args.command, base_dir=base)
        fmt = args.format or cfg.output.format
        log.info("running %s (format %s)", args.command, fmt)
        result = experiment.run(args.command, cfg, fmt)
        out = args.out if args.out is not None else (Path(cfg.output.path) if cfg.output.path else None)
        if out is None:
            sys.stdout.write(result.main)
            for suffix, text in sorted(result.side.items()):
                log.info("side output %s not written (no --out given)", suffix)
        else:
            atomic_write(out, result.main)
            for suffix, text in sorted(result.side.items()):
                atomic_write(_side_path(out, suffix), text)
            if result.summary:
                sys.stdout.write(result.summary)
        return EXIT_OK
    except ConfigError as exc:
        for msg in exc.messages:
            print(f"fracstab: config error: {msg}", file=sys.stderr)
        return EXIT_VALIDATION
    except NotStabilizableError as exc:
        print(f"fracstab: not stabilizable: {exc}", file=sys.stderr)
        return EXIT_NOT_STABILIZABLE
    except NumericError as exc:
        print(f"fracstab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FracstabError, ValueError) as exc:
        print(f"fracstab: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ArithmeticError, FloatingPointError) as exc:
        print(f"fracstab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
