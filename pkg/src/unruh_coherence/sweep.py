"""Deterministic parameter sweeps and figure presets."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import channels, coherence, correlations
from .reductions import Sector
from .states import CONVENTIONS, FAMILIES, R_MAX, THETA_MAX

MEASURES = ("l1", "gqd", "concurrence", "cohering_power", "decohering_power")
TARGETS = ("particle", "antiparticle", "region1", "region2")
SECTOR_TARGETS = ("particle", "antiparticle")
REGION_TARGETS = ("region1", "region2")
CSV_HEADER = "r,q_R,theta,family,target,measure,value"
RANGE_SLACK = 1e-12


class ConfigError(ValueError):
    pass


def measure_bounds(measure: str, target: str) -> tuple[float, float]:
    if measure == "l1":
        return 0.0, float(Sector.parse(target).dim - 1)
    if measure == "gqd":
        return 0.0, 0.5
    return 0.0, 1.0


@dataclass(frozen=True)
class SweepConfig:
    family: str = "plus"
    convention: str = "swapped"
    target: str = "particle"
    measure: str = "l1"
    r_min: float = 0.0
    r_max: float = R_MAX
    r_steps: int = 64
    q_R: tuple[float, ...] = field(default_factory=lambda: tuple(np.linspace(0.0, 1.0, 64)))
    theta: float = math.pi / 4
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        object.__setattr__(self, "q_R", tuple(float(q) for q in self.q_R))
        self.validate()

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}")
        if self.convention not in CONVENTIONS:
            raise ConfigError(f"convention must be one of {CONVENTIONS}")
        if self.target not in TARGETS:
            raise ConfigError(f"target must be one of {TARGETS}")
        if self.measure not in MEASURES:
            raise ConfigError(f"measure must be one of {MEASURES}")
        if self.format not in ("csv", "svg"):
            raise ConfigError("format must be csv or svg")
        if self.measure in ("gqd", "concurrence") and self.target not in REGION_TARGETS:
            raise ConfigError(f"{self.measure} needs a two-qubit target (region1/region2)")
        if self.measure in ("cohering_power", "decohering_power") and self.target not in SECTOR_TARGETS:
            raise ConfigError(f"{self.measure} needs a single-sector target (particle/antiparticle)")
        if int(self.r_steps) != self.r_steps or self.r_steps < 2:
            raise ConfigError("r_steps must be an integer >= 2")
        if not (0.0 <= self.r_min < self.r_max <= R_MAX + 1e-15):
            raise ConfigError(f"need 0 <= r_min < r_max <= pi/4, got [{self.r_min}, {self.r_max}]")
        if not self.q_R:
            raise ConfigError("q_R list is empty")
        if any(not (0.0 <= q <= 1.0) for q in self.q_R):
            raise ConfigError("q_R values must lie in [0, 1]")
        if not (0.0 <= self.theta <= THETA_MAX + 1e-15):
            raise ConfigError("theta must lie in [0, pi/4]")

    def r_grid(self) -> np.ndarray:
        return np.linspace(self.r_min, min(self.r_max, R_MAX), int(self.r_steps))


class SweepRecord(NamedTuple):
    r: float
    q_R: float
    theta: float
    family: str
    target: str
    measure: str
    value: float


def evaluate_row(config: SweepConfig, q_R: float, rs: np.ndarray) -> np.ndarray:
    """Measure values along the r grid at fixed q_R."""
    fam, conv, target, theta = config.family, config.convention, config.target, config.theta
    m = config.measure
    if m == "l1":
        return np.asarray(coherence.pipeline_coherence(rs, q_R, theta, fam, target, conv), dtype=float)
    if m in ("gqd", "concurrence"):
        rhos = correlations.region_state(rs, q_R, target, theta, fam, conv)
        fn = correlations.geometric_discord_eigen if m == "gqd" else correlations.concurrence
        return np.array([fn(rho) for rho in rhos])
    ch = channels.unruh_channel(rs, q_R, target, fam, conv)
    if m == "cohering_power":
        return np.asarray(channels.cohering_power_z(ch), dtype=float)
    return np.asarray(channels.decohering_power_z(ch), dtype=float)


def run_sweep(config: SweepConfig, threads: int = 1) -> list[SweepRecord]:
    """Records in row-major order: q_R outer, r inner.

    Each q_R row is one task; rows land in index-addressed slots, so the
    output does not depend on ``threads``.
    """
    config.validate()
    rs = config.r_grid()
    slots: list[np.ndarray | None] = [None] * len(config.q_R)

    def work(i: int) -> None:
        slots[i] = evaluate_row(config, config.q_R[i], rs)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, range(len(config.q_R))))
    else:
        for i in range(len(config.q_R)):
            work(i)

    lo, hi = measure_bounds(config.measure, config.target)
    records = []
    for q, row in zip(config.q_R, slots):
        for r, v in zip(rs, row):
            v = float(v)
            if not math.isfinite(v) or v < lo - RANGE_SLACK or v > hi + RANGE_SLACK:
                raise ArithmeticError(f"{config.measure} value {v!r} outside [{lo}, {hi}] at r={r}, q_R={q}")
            records.append(SweepRecord(float(r), q, config.theta, config.family,
                                       config.target, config.measure, v))
    return records


def _fmt(x: float) -> str:
    return format(x, ".17g")


def format_csv(records: Iterable[SweepRecord]) -> str:
    lines = [CSV_HEADER]
    for rec in records:
        lines.append(",".join([_fmt(rec.r), _fmt(rec.q_R), _fmt(rec.theta), rec.family,
                               rec.target, rec.measure, _fmt(rec.value)]))
    return "\n".join(lines) + "\n"


def emit_csv(records: Iterable[SweepRecord], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_csv(records))


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def format_svg(records: Sequence[SweepRecord], title: str = "", width: int = 640, height: int = 420) -> str:
    """Polyline chart of value against r, one line per (target, q_R) series."""
    series: dict[tuple[str, float], list[tuple[float, float]]] = {}
    for rec in records:
        series.setdefault((rec.target, rec.q_R), []).append((rec.r, rec.value))
    pad = 50
    xs = [p[0] for pts in series.values() for p in pts] or [0.0, 1.0]
    ys = [p[1] for pts in series.values() for p in pts] or [0.0, 1.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    targets = sorted({t for t, _ in series})
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="13">r</text>',
        f'<text x="{pad}" y="{pad - 10}" font-size="12">{y1:.4g}</text>',
        f'<text x="{pad - 5}" y="{height - pad + 15}" font-size="12" text-anchor="end">{y0:.4g}</text>',
        f'<text x="{width - pad}" y="{height - pad + 15}" font-size="12" text-anchor="end">{x1:.4g}</text>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>')
    for (target, q), pts in series.items():
        colour = _PALETTE[targets.index(target) % len(_PALETTE)]
        path = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1" points="{path}">'
                   f'<title>{target} q_R={q:.4g}</title></polyline>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(records: Sequence[SweepRecord], path: str | os.PathLike, title: str = "") -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_svg(records, title))


# --- figure presets -------------------------------------------------------

QR_DENSE = tuple(np.linspace(0.0, 1.0, 64))
QR_CURVES = (0.2, 0.5, 0.8)
FIG4_R_STEPS = 101


def _surface(family: str, target: str, measure: str, convention: str) -> SweepConfig:
    return SweepConfig(family=family, convention=convention, target=target, measure=measure,
                       r_steps=64, q_R=QR_DENSE, theta=math.pi / 4)


def _curves(target: str, measure: str) -> SweepConfig:
    return SweepConfig(family="plus", target=target, measure=measure,
                       r_steps=FIG4_R_STEPS, q_R=QR_CURVES, theta=math.pi / 4)


def figure_panels(name: str, convention: str = "swapped") -> dict[str, list[SweepConfig]]:
    """Panel name -> sweeps whose records make up that panel."""
    if name == "fig2":
        return {"fig2a": [_surface("plus", "particle", "l1", convention)],
                "fig2b": [_surface("plus", "antiparticle", "l1", convention)]}
    if name == "fig3":
        return {"fig3a": [_surface("plus", "particle", "decohering_power", convention)],
                "fig3b": [_surface("plus", "antiparticle", "decohering_power", convention)]}
    if name == "fig4":
        return {"fig4a": [_curves("region1", "l1"), _curves("region2", "l1")],
                "fig4b": [_curves("region1", "gqd"), _curves("region2", "gqd")],
                "fig4c": [_curves("region1", "concurrence"), _curves("region2", "concurrence")]}
    if name == "fig5":
        return {"fig5a": [_surface("minus", "particle", "l1", convention)],
                "fig5b": [_surface("minus", "antiparticle", "l1", convention)]}
    if name == "fig6":
        return {"fig6a": [_surface("minus", "particle", "decohering_power", convention)],
                "fig6b": [_surface("minus", "antiparticle", "decohering_power", convention)]}
    raise ConfigError(f"unknown figure {name!r}; choose from fig2..fig6")


FIGURES = ("fig2", "fig3", "fig4", "fig5", "fig6")


def run_figure(name: str, convention: str = "swapped", threads: int = 1) -> dict[str, list[SweepRecord]]:
    return {panel: [rec for cfg in cfgs for rec in run_sweep(cfg, threads)]
            for panel, cfgs in figure_panels(name, convention).items()}


def write_figure(name: str, out_dir: str | os.PathLike, fmt: str = "csv",
                 convention: str = "swapped", threads: int = 1) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for panel, records in run_figure(name, convention, threads).items():
        path = os.path.join(out_dir, f"{panel}.{fmt}")
        if fmt == "svg":
            emit_svg(records, path, title=panel)
        else:
            emit_csv(records, path)
        paths.append(path)
    return paths


def with_output(config: SweepConfig, out: str | None, fmt: str) -> SweepConfig:
    return replace(config, out=out, format=fmt)
