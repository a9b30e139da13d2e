"""Command-line entry point: ``orthodac run`` and ``orthodac sweep``."""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidInputError, NumericFailure
from .scenarios import SCENARIOS, SWEEP_PARAMETERS, load_config, run_scenario, sweep

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4

log = logging.getLogger("orthodac")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("scenario", help=f"one of: {', '.join(SCENARIOS)}")
    p.add_argument("--config", metavar="FILE", help="JSON file with ScenarioConfig fields")
    p.add_argument("--seed", type=int, help="base seed (default 1)")
    p.add_argument("--out", metavar="DIR", help="output directory (default ./orthodac_out)")
    p.add_argument("--samples", type=int, help="output samples per realisation (default 65536)")
    p.add_argument("--svg", action="store_true", default=None, help="also write SVG plots")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orthodac", description="Orthogonal-sampling DAC simulator.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a named scenario with its default settings")
    _common(run)
    sw = sub.add_parser("sweep", help="Monte-Carlo sweep of one parameter")
    _common(sw)
    sw.add_argument("--param", required=True, choices=SWEEP_PARAMETERS)
    sw.add_argument("--from", dest="start", type=float, required=True,
                    help="first value (ps for dac_jitter_rms, dB for osnr_db)")
    sw.add_argument("--to", dest="stop", type=float, required=True, help="last value, same unit as --from")
    sw.add_argument("--points", type=int, required=True)
    sw.add_argument("--seeds", type=int, help="realisations per point (default 30)")
    return parser


def _sweep_values(param: str, start: float, stop: float, points: int) -> np.ndarray:
    if points < 1:
        raise InvalidInputError("--points must be >= 1")
    if points > 1 and start == stop:
        raise InvalidInputError("--from and --to must differ for more than one point")
    v = np.linspace(start, stop, points)
    return v * 1e-12 if param == "dac_jitter_rms" else v


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        overrides = dict(seed=args.seed, output_dir=args.out, samples=args.samples, svg=args.svg)
        if args.command == "sweep":
            overrides["seeds"] = args.seeds
        cfg = load_config(args.scenario, args.config, **overrides)
        if args.command == "run":
            result = run_scenario(cfg)
        else:
            result = sweep(cfg, args.param, _sweep_values(args.param, args.start, args.stop, args.points))
    except NumericFailure as e:
        print(f"orthodac: numeric failure in stage '{e.stage}': {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except InvalidInputError as e:
        print(f"orthodac: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"orthodac: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    for f in result.files:
        print(f)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
