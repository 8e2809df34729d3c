"""Reduced-grid invariant suite behind ``unruh-coherence selfcheck``."""
from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import channels, coherence, correlations, smallmat, states
from .reductions import Sector, closed_form_sector, density_defects, reduce, reduce_amplitudes
from .states import R_MAX, THETA_MAX

GRID_R, GRID_Q, GRID_THETA = 32, 32, 8
PASS, FAIL, EXPECTED = "PASS", "FAIL", "EXPECTED-DIVERGENCE"


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""


@dataclass
class SelfCheckReport:
    convention: str
    results: list[CheckResult] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(r.status != FAIL for r in self.results)

    def lines(self) -> list[str]:
        out = [f"{r.status:<20} {r.name}" + (f"  ({r.detail})" if r.detail else "") for r in self.results]
        n_fail = sum(r.status == FAIL for r in self.results)
        out.append(f"{len(self.results)} invariants, {n_fail} failed, convention={self.convention}, "
                   f"{self.seconds:.1f}s")
        return out


def _grid():
    r = np.linspace(0.0, R_MAX, GRID_R)
    q = np.linspace(0.0, 1.0, GRID_Q)
    t = np.linspace(0.0, THETA_MAX, GRID_THETA)
    return np.meshgrid(r, q, t, indexing="ij")


def _max_gap(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _within(gap: float, tol: float) -> tuple[bool, str]:
    return gap <= tol, f"max gap {gap:.2e}, tol {tol:.0e}"


# each check returns (passed, detail)

def check_jacobi(_conv):
    rng = np.random.default_rng(11)
    a = rng.normal(size=(64, 4, 4)) + 1j * rng.normal(size=(64, 4, 4))
    a = a + smallmat.dagger(a)
    w, v = smallmat.hermitian_eig(a)
    recon = v @ (w[..., None] * smallmat.dagger(v))
    orth = smallmat.dagger(v) @ v - np.eye(4)
    return _within(max(_max_gap(recon, a), float(np.abs(orth).max())), 1e-12)


def check_partial_trace(_conv):
    r, q, t = (x[::4, ::4, ::2] for x in _grid())
    amps = states.prepared_state(r, q, t, "plus").amplitudes
    rho = np.einsum("...i,...j->...ij", amps, amps.conj())
    gap = 0.0
    for sector, keep in (("particle", (0,)), ("antiparticle", (2,)), ("region1", (0, 2)), ("region2", (1, 3))):
        gap = max(gap, _max_gap(smallmat.partial_trace(rho, keep), reduce_amplitudes(amps, sector)))
    return _within(gap, 1e-13)


def check_normalisation(conv):
    r, q, t = _grid()
    gap = 0.0
    for fam in states.FAMILIES:
        amps = states.prepared_state(r, q, t, fam, conv).amplitudes
        gap = max(gap, _max_gap(np.sum(np.abs(amps) ** 2, axis=-1), 1.0))
    return _within(gap, 1e-12)


def check_density_hygiene(conv):
    r, q, t = _grid()
    bad = []
    for fam in states.FAMILIES:
        amps = states.prepared_state(r, q, t, fam, conv).amplitudes
        for sector in Sector:
            problems = density_defects(reduce_amplitudes(amps, sector))
            if problems:
                bad.append(f"{fam}/{sector.value}: {problems[0]}")
    return not bad, "; ".join(bad) or "trace, Hermiticity, PSD on every grid point"


def _sector_closed_form(family):
    def check(conv):
        r, q, t = _grid()
        gap = 0.0
        for sector in ("particle", "antiparticle"):
            pipe = coherence.pipeline_coherence(r, q, t, family, sector, conv)
            # the closed-form formulas, i.e. the swapped reading for the minus family
            gap = max(gap, _max_gap(pipe, coherence.sector_coherence_closed(r, q, t, family, sector)))
        return _within(gap, 1e-12)
    return check


def check_closed_matrix(_conv):
    gap = 0.0
    for r in np.linspace(0, R_MAX, 5):
        for q in np.linspace(0, 1, 5):
            for t in np.linspace(0, THETA_MAX, 3):
                p = states.UnruhParams(float(r), float(q), float(t))
                for s in ("particle", "antiparticle"):
                    gap = max(gap, _max_gap(closed_form_sector(p, s).data,
                                            reduce(states.initial_state(p), s).data))
    return _within(gap, 1e-12)


def check_region_formulas(_conv):
    r, q, _ = (x[..., 0] for x in _grid())
    gap = 0.0
    for region in ("region1", "region2"):
        pipe = coherence.pipeline_coherence(r, q, math.pi / 4, "plus", region)
        gap = max(gap, _max_gap(pipe, coherence.region_coherence_closed(r, q, region)))
    return _within(gap, 1e-12)


def check_freezing(conv):
    worst = 0.0
    for fam in states.FAMILIES:
        for s in ("particle", "antiparticle"):
            rep = coherence.freezing_analysis(fam, s, conv, n_samples=16)
            worst = max(worst, max(rep.max_abs_derivative.values()))
    return _within(worst, coherence.FREEZE_TOL)


def check_crossing(conv):
    gap = 0.0
    for fam in states.FAMILIES:
        for q in np.linspace(0.0, 1.0, 33):
            r_star = coherence.crossing_r(float(q), fam, conv)
            if r_star is None:
                continue
            a = coherence.pipeline_coherence(r_star, q, math.pi / 4, fam, "particle", conv)
            b = coherence.pipeline_coherence(r_star, q, math.pi / 4, fam, "antiparticle", conv)
            gap = max(gap, abs(a - b))
    return _within(gap, 1e-12)


def check_axioms(_conv):
    rep = coherence.coherence_axiom_probes(seed=5, n_samples=200)
    return rep.passed, ", ".join(f"{k} {v:.1e}" for k, v in rep.worst.items())


def _channel_grid(n=GRID_R):
    r = np.linspace(0.0, R_MAX, n)
    q = np.linspace(0.0, 1.0, n)
    return np.meshgrid(r, q, indexing="ij")


def check_affine(conv):
    r, q = _channel_grid(8)
    for fam in states.FAMILIES:
        for s in ("particle", "antiparticle"):
            channels.unruh_channel(r, q, s, fam, conv).verify_affine()
    return True, f"64 probes per channel, tol {channels.AFFINE_TOL:.0e}"


def check_cohering_power(conv):
    r, q = _channel_grid()
    worst = 0.0
    for fam in states.FAMILIES:
        for s in ("particle", "antiparticle"):
            ch = channels.unruh_channel(r, q, s, fam, conv)
            worst = max(worst, float(np.max(np.abs(channels.cohering_power_z(ch)))),
                        float(np.max(np.abs(channels.cohering_power_definition(ch)))))
    return _within(worst, 1e-12)


def _decohering_closed_form(family):
    def check(conv):
        r, q = _channel_grid()
        gap = 0.0
        for s in ("particle", "antiparticle"):
            ch = channels.unruh_channel(r, q, s, family, conv)
            gap = max(gap, _max_gap(channels.decohering_power_z(ch),
                                    channels.decohering_power_closed(r, q, family, s)))
        return _within(gap, 1e-9)
    return check


def check_discord_routes(_conv):
    rng = np.random.default_rng(3)
    rhos = smallmat.random_density_matrices(rng, 100, 4)
    gap = max(abs(correlations.geometric_discord_eigen(x) - correlations.geometric_discord_svd(x)) for x in rhos)
    return _within(gap, 1e-11)


def check_werner(_conv):
    bell = np.zeros(4, dtype=complex)
    bell[[1, 2]] = [1 / math.sqrt(2), -1 / math.sqrt(2)]
    gap = 0.0
    for p in np.linspace(0, 1, 11):
        rho = p * np.outer(bell, bell.conj()) + (1 - p) * np.eye(4) / 4
        gap = max(gap, abs(correlations.concurrence(rho) - max(0.0, (3 * p - 1) / 2)))
    return _within(gap, 1e-10)


def check_convergence(conv):
    gap = 0.0
    for q in (0.2, 0.5, 0.8):
        b1 = correlations.region_state(R_MAX, q, "region1", convention=conv)
        b2 = correlations.region_state(R_MAX, q, "region2", convention=conv)
        for fn in (coherence.l1_coherence, correlations.geometric_discord_eigen, correlations.concurrence):
            gap = max(gap, abs(fn(b1) - fn(b2)))
    return _within(gap, 1e-11)


def check_sudden_death(_conv):
    found = []
    for q in (0.2, 0.5, 0.8):
        r_star = correlations.sudden_death_r(q, "region1", grid=128, tol=1e-8)
        if r_star is None:
            return False, f"no sudden death at q_R={q}"
        rho = correlations.region_state(R_MAX, q, "region1")
        if coherence.l1_coherence(rho) <= 0 or correlations.geometric_discord_eigen(rho) <= 0:
            return False, f"C_l1 or GQD vanished at q_R={q}"
        found.append(f"{r_star:.4f}")
    return True, "r* = " + ", ".join(found)


CHECKS: list[tuple[str, Callable, bool]] = [
    # (name, check, documented divergence under the printed convention)
    ("smallmat: Jacobi eigendecomposition reconstructs", check_jacobi, False),
    ("smallmat: partial trace equals direct contraction", check_partial_trace, False),
    ("unruh_states: prepared states normalised", check_normalisation, False),
    ("reductions: density-matrix hygiene on grid", check_density_hygiene, False),
    ("reductions: plus sector matrices match closed form", check_closed_matrix, False),
    ("coherence: plus pipeline equals closed form", _sector_closed_form("plus"), False),
    ("coherence: minus pipeline equals closed form", _sector_closed_form("minus"), True),
    ("coherence: region formulas", check_region_formulas, False),
    ("coherence: freezing certificates", check_freezing, False),
    ("coherence: crossing points", check_crossing, False),
    ("coherence: l1 axiom probes", check_axioms, False),
    ("channels: affine Bloch model", check_affine, False),
    ("channels: cohering power vanishes", check_cohering_power, False),
    ("channels: plus decohering power equals closed form", _decohering_closed_form("plus"), False),
    ("channels: minus decohering power equals closed form", _decohering_closed_form("minus"), True),
    ("correlations: discord eigen and SVD routes agree", check_discord_routes, False),
    ("correlations: Werner concurrence", check_werner, False),
    ("correlations: regions coincide at r = pi/4", check_convergence, False),
    ("correlations: entanglement sudden death", check_sudden_death, False),
]


def run_selfcheck(convention: str = "swapped", echo: Callable[[str], None] | None = None) -> SelfCheckReport:
    report = SelfCheckReport(convention)
    start = time.perf_counter()
    for name, check, documented in CHECKS:
        try:
            passed, detail = check(convention)
        except Exception as exc:  # an invariant that raises has failed
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        if passed:
            status = PASS
        elif documented and convention == "printed":
            status = EXPECTED
            detail = f"q_L/q_R interchange of the printed minus-family state; {detail}"
        else:
            status = FAIL
        result = CheckResult(name, status, detail)
        report.results.append(result)
        if echo:
            echo(report.lines()[len(report.results) - 1])
    report.seconds = time.perf_counter() - start
    return report


def main(convention: str = "swapped") -> int:
    report = run_selfcheck(convention, echo=print)
    print(report.lines()[-1])
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:2]))
