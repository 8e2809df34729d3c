"""Command-line driver.

Exit status: 0 success, 1 invariant failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import channels, coherence, selfcheck, sweep
from .states import CONVENTIONS, FAMILIES, R_MAX

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG = 0, 1, 2
CLI_MEASURES = {m.replace("_", "-"): m for m in sweep.MEASURES}


def parse_qr(text: str) -> tuple[float, ...]:
    """``"0.2,0.5"`` -> explicit list; ``"0:1:64"`` -> linspace(start, stop, count)."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            n = int(count)
            if n < 1:
                raise ValueError
            return tuple(float(x) for x in np.linspace(float(start), float(stop), n))
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --qr {text!r}; use a,b,c or start:stop:count") from None


def _common(p: argparse.ArgumentParser, *, target=True, qr_default="0:1:64") -> None:
    p.add_argument("--family", choices=FAMILIES, default="plus")
    p.add_argument("--convention", choices=CONVENTIONS, default="swapped")
    if target:
        p.add_argument("--target", choices=sweep.TARGETS, default="particle")
    p.add_argument("--qr", type=parse_qr, default=parse_qr(qr_default), metavar="LIST|RANGE")


def _grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta", type=float, default=math.pi / 4)
    p.add_argument("--r-min", type=float, default=0.0)
    p.add_argument("--r-max", type=float, default=R_MAX)
    p.add_argument("--r-steps", type=int, default=64)


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output path (directory for figure); stdout if omitted")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unruh-coherence",
                                     description="Coherence, channel powers and correlations of an "
                                                 "Unruh-degraded fermionic mode.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="sweep one measure over (r, q_R)")
    _common(p)
    p.add_argument("--measure", choices=sorted(CLI_MEASURES), default="l1")
    _grid_flags(p)
    _output_flags(p)

    p = sub.add_parser("figure", help="regenerate a figure preset")
    p.add_argument("name", choices=sweep.FIGURES)
    p.add_argument("--convention", choices=CONVENTIONS, default="swapped")
    _output_flags(p)

    p = sub.add_parser("freeze", help="freezing conditions of the sector coherence")
    p.add_argument("--family", choices=FAMILIES, default="plus")
    p.add_argument("--convention", choices=CONVENTIONS, default="swapped")
    p.add_argument("--target", choices=sweep.SECTOR_TARGETS, default="particle")

    p = sub.add_parser("power", help="cohering and decohering power table")
    _common(p, qr_default="0:1:5")
    p.add_argument("--r-min", type=float, default=0.0)
    p.add_argument("--r-max", type=float, default=R_MAX)
    p.add_argument("--r-steps", type=int, default=5)

    p = sub.add_parser("crossing", help="acceleration where particle and antiparticle coherence meet")
    _common(p, target=False, qr_default="0:1:11")

    p = sub.add_parser("selfcheck", help="run the reduced-grid invariant suite")
    p.add_argument("--convention", choices=CONVENTIONS, default="swapped")
    return parser


def _config_from(args) -> sweep.SweepConfig:
    return sweep.SweepConfig(family=args.family, convention=args.convention, target=args.target,
                             measure=CLI_MEASURES[args.measure], r_min=args.r_min, r_max=args.r_max,
                             r_steps=args.r_steps, q_R=args.qr, theta=args.theta,
                             out=args.out, format=args.format)


def cmd_sweep(args) -> int:
    config = _config_from(args)
    records = sweep.run_sweep(config, threads=args.threads)
    if config.out is None:
        text = sweep.format_svg(records) if config.format == "svg" else sweep.format_csv(records)
        sys.stdout.write(text)
    elif config.format == "svg":
        sweep.emit_svg(records, config.out)
    else:
        sweep.emit_csv(records, config.out)
    return EXIT_OK


def cmd_figure(args) -> int:
    for path in sweep.write_figure(args.name, args.out or ".", args.format, args.convention, args.threads):
        print(path)
    return EXIT_OK


def cmd_freeze(args) -> int:
    rep = coherence.freezing_analysis(args.family, args.target, args.convention)
    print(f"family={rep.family} sector={rep.sector.value} convention={rep.convention}")
    print(f"dC/dr = {rep.derivative_expression}")
    for cond in rep.zero_conditions:
        print(f"  frozen when {cond}: max |dC/dr| = {rep.max_abs_derivative[cond]:.3e}")
    print("certified" if rep.certified else "NOT certified")
    return EXIT_OK if rep.certified else EXIT_INVARIANT


def cmd_power(args) -> int:
    if args.target not in sweep.SECTOR_TARGETS:
        raise sweep.ConfigError("power needs --target particle or antiparticle")
    if args.r_steps < 2 or not (0.0 <= args.r_min < args.r_max <= R_MAX + 1e-15):
        raise sweep.ConfigError("need 0 <= r_min < r_max <= pi/4 and r_steps >= 2")
    if any(not 0.0 <= q <= 1.0 for q in args.qr):
        raise sweep.ConfigError("q_R values must lie in [0, 1]")
    rs = np.linspace(args.r_min, args.r_max, args.r_steps)
    r, q = np.meshgrid(rs, np.asarray(args.qr), indexing="xy")
    ch = channels.unruh_channel(r, q, args.target, args.family, args.convention)
    cp = channels.cohering_power_z(ch)
    dp = channels.decohering_power_z(ch)
    closed = channels.decohering_power_closed(r, q, args.family, args.target)
    print("r,q_R,cohering_power,decohering_power,decohering_power_closed")
    for idx in np.ndindex(r.shape):
        print(",".join(format(float(x[idx]), ".17g") for x in (r, q, cp, dp, closed)))
    return EXIT_OK


def cmd_crossing(args) -> int:
    print("q_R,r_star")
    for q in args.qr:
        if not 0.0 <= q <= 1.0:
            raise sweep.ConfigError("q_R values must lie in [0, 1]")
        r_star = coherence.crossing_r(q, args.family, args.convention)
        print(f"{q:.17g},{'none' if r_star is None else format(r_star, '.17g')}")
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    return selfcheck.main(args.convention)


COMMANDS = {"sweep": cmd_sweep, "figure": cmd_figure, "freeze": cmd_freeze,
            "power": cmd_power, "crossing": cmd_crossing, "selfcheck": cmd_selfcheck}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](args)
    except (sweep.ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArithmeticError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
