"""Command-line entry point: ``pairblockade {simulate,preset,report,validate-config}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigError
from .presets import PRESET_NAMES, figure_preset, recipe
from .sweep import SweepConfig, WORKERS_ENV, load_config, load_result, run_sweep, sidecar_paths, write_result

log = logging.getLogger("pairblockade")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_CHECKS = 3


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors; keep exit code 2 for numerical failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pairblockade", description="Photon blockade and pair-correlation sweeps.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def run_opts(p):
        p.add_argument("--out", type=Path, help="CSV path (sidecars are written next to it)")
        p.add_argument("--workers", type=_positive_int,
                       help=f"parallel worker processes (default: ${WORKERS_ENV} or 1)")
        p.add_argument("--nmax", type=int, help="photon cutoff for both modes")

    p = sub.add_parser("simulate", help="run a sweep from a JSON configuration")
    p.add_argument("--config", type=Path, required=True)
    run_opts(p)

    p = sub.add_parser("preset", help="run a named figure preset")
    p.add_argument("name", choices=PRESET_NAMES)
    run_opts(p)

    p = sub.add_parser("report", help="check a dataset and render its figure")
    p.add_argument("dataset", type=Path, help="CSV written by simulate or preset")
    p.add_argument("--no-figure", action="store_true", help="skip the PNG")
    p.add_argument("--strict", action="store_true", help=f"exit {EXIT_CHECKS} when any check fails")

    p = sub.add_parser("validate-config", help="parse a configuration without running it")
    p.add_argument("path", type=Path)
    return parser


def _execute(config: SweepConfig, args, default_out: Path) -> int:
    if args.nmax is not None:
        try:
            config = config.with_cutoff(args.nmax)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    out = args.out or default_out
    log.info("running %s: %d points", config.name or "sweep", config.n_points)
    result = run_sweep(config, workers=args.workers)
    written = write_result(result, out)
    if args.command == "preset":
        path = sidecar_paths(Path(out))["recipe"]
        path.write_text(recipe(args.name))
        written["recipe"] = path
    for kind, path in written.items():
        print(f"{kind}: {path}")
    if result.failed:
        tags = sorted({r["error"] for r in result.failed})
        print(f"{len(result.failed)} of {len(result.rows)} points failed: {', '.join(tags)}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _report(args) -> int:
    from .report import build_report

    result = load_result(args.dataset)
    rep = build_report(result)
    sys.stdout.write(rep.render())
    if not args.no_figure and result.rows:
        from .plotting import render

        print(f"figure: {render(result, sidecar_paths(args.dataset)['figure'])}")
    if result.failed:
        return EXIT_NUMERICAL
    if args.strict and not rep.passed:
        return EXIT_CHECKS
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "simulate":
            config = load_config(args.config)
            stem = config.name or args.config.stem
            return _execute(config, args, Path(f"{stem}.csv"))
        if args.command == "preset":
            return _execute(figure_preset(args.name), args, Path(f"{args.name}.csv"))
        if args.command == "report":
            if not args.dataset.exists():
                raise ConfigError(f"no such dataset: {args.dataset}")
            return _report(args)
        config = load_config(args.path)
        axes = ", ".join(f"{a.column}[{len(a.values)}]" for a in config.axes)
        print(f"ok: {config.name or args.path.stem}: {axes}; {config.n_points} points; "
              f"interference {config.interference_mode}; n_max {config.cutoffs.n_max_a}/{config.cutoffs.n_max_b}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
