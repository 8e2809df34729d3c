"""The twelve acceptance criteria, one test each.

Every test records a one-line verdict (shown in the pytest terminal summary
and printed when this file is run as a script) before asserting.
"""
import hashlib
import math
import sys

import numpy as np

from acceptance_log import record
from oracles import concurrence_charpoly, werner
from unruh_coherence import channels, coherence, correlations, states, sweep
from unruh_coherence.coherence import pipeline_coherence
from unruh_coherence.reductions import Sector, density_defects, reduce_amplitudes
from unruh_coherence.smallmat import random_density_matrices
from unruh_coherence.states import R_MAX, THETA_MAX, q_left

PI4 = math.pi / 4
QR_CURVES = (0.2, 0.5, 0.8)


def full_grid():
    return np.meshgrid(np.linspace(0, R_MAX, 64), np.linspace(0, 1, 64),
                       np.linspace(0, THETA_MAX, 16), indexing="ij")


def test_ac01_closed_form_equality():
    r, q, t = full_grid()
    gap_p = np.abs(pipeline_coherence(r, q, t, "plus", "particle") - q * np.sin(2 * t) * np.cos(r)).max()
    gap_a = np.abs(pipeline_coherence(r, q, t, "plus", "antiparticle") - q_left(q) * np.sin(2 * t) * np.sin(r)).max()
    ok = gap_p <= 1e-12 and gap_a <= 1e-12
    record(1, "closed-form equality on 64x64x16", ok, f"particle {gap_p:.1e}, antiparticle {gap_a:.1e}")
    assert ok


def test_ac02_maxima():
    a = pipeline_coherence(0.0, 1.0, PI4, "plus", "particle")
    b = pipeline_coherence(PI4, 0.0, PI4, "plus", "antiparticle")
    ok = abs(a - 1) <= 1e-12 and abs(b - math.sqrt(2) / 2) <= 1e-12
    record(2, "maxima 1 and sqrt(2)/2", ok, f"{a:.15f}, {b:.15f}")
    assert ok


def test_ac03_freezing():
    worst = 0.0
    for sector, cond in (("particle", "q_R=0"), ("antiparticle", "q_L=0")):
        rep = coherence.freezing_analysis("plus", sector, n_samples=16)
        worst = max(worst, rep.max_abs_derivative[cond])
    rs = np.linspace(0, R_MAX, 1024)[:, None]
    ts = np.linspace(0, THETA_MAX, 16)[None, :]
    rho = reduce_amplitudes(states.prepared_state(rs, 0.0, ts, "plus").amplitudes, "particle")
    off = np.abs(rho[..., 0, 1]).max()
    ok = worst <= 1e-10 and off <= 1e-12
    record(3, "freezing at q_R=0 / q_L=0", ok, f"max |dC/dr| {worst:.1e}, off-diagonal {off:.1e}")
    assert ok


def test_ac04_crossing():
    gap, n = 0.0, 0
    for q in np.linspace(0, 1, 33):
        q_L = math.sqrt(1 - q * q)
        r_star = math.atan2(q, q_L)
        if r_star > PI4:
            assert coherence.crossing_r(q) is None
            continue
        assert abs(coherence.crossing_r(q) - r_star) <= 1e-15
        a = pipeline_coherence(r_star, q, PI4, "plus", "particle")
        b = pipeline_coherence(r_star, q, PI4, "plus", "antiparticle")
        gap, n = max(gap, abs(a - b)), n + 1
    ok = gap <= 1e-12
    record(4, "crossing at arctan(q_R/q_L)", ok, f"{n} crossings in range, max gap {gap:.1e}")
    assert ok


def test_ac05_cohering_power():
    r, q = np.meshgrid(np.linspace(0, R_MAX, 32), np.linspace(0, 1, 32), indexing="ij")
    worst = 0.0
    for fam in states.FAMILIES:
        for sector in ("particle", "antiparticle"):
            ch = channels.unruh_channel(r, q, sector, fam)
            worst = max(worst, np.abs(channels.cohering_power_z(ch)).max(),
                        np.abs(channels.cohering_power_definition(ch)).max())
    ok = worst <= 1e-12
    record(5, "cohering power vanishes on 32x32", ok, f"max {worst:.1e}")
    assert ok


def test_ac06_decohering_power():
    r, q = np.meshgrid(np.linspace(0, R_MAX, 64), np.linspace(0, 1, 64), indexing="ij")
    gap = 0.0
    for fam in states.FAMILIES:
        for sector in ("particle", "antiparticle"):
            d = channels.decohering_power_z(channels.unruh_channel(r, q, sector, fam, "swapped"))
            gap = max(gap, np.abs(d - channels.decohering_power_closed(r, q, fam, sector)).max())
    d0 = channels.decohering_power_z(channels.unruh_channel(0.0, 1.0, "particle"))
    d1 = channels.decohering_power_z(channels.unruh_channel(PI4, 1.0, "particle"))
    ok = gap <= 1e-9 and abs(d0) <= 1e-9 and abs(d1 - 2 / 3) <= 1e-9
    record(6, "decohering power definition vs closed forms", ok,
           f"max gap {gap:.1e}, D(0,1)={d0:.2e}, D(pi/4,1)={d1:.12f}")
    assert ok


def test_ac07_region_formulas():
    r, q = np.meshgrid(np.linspace(0, R_MAX, 64), np.linspace(0, 1, 64), indexing="ij")
    q_L, c, s = q_left(q), np.cos(r), np.sin(r)
    c1 = pipeline_coherence(r, q, PI4, "plus", "region1")
    c2 = pipeline_coherence(r, q, PI4, "plus", "region2")
    gap = max(np.abs(c1 - (q_L * q * c * s + q_L * s + q * c)).max(),
              np.abs(c2 - (q_L * q * c * s + q_L * c + q * s)).max())
    rs = np.linspace(0, R_MAX, 64)
    qs = np.linspace(0, 1, 64)
    eq = max(np.abs(pipeline_coherence(rs, math.sqrt(2) / 2, PI4, "plus", "region1")
                    - pipeline_coherence(rs, math.sqrt(2) / 2, PI4, "plus", "region2")).max(),
             np.abs(pipeline_coherence(R_MAX, qs, PI4, "plus", "region1")
                    - pipeline_coherence(R_MAX, qs, PI4, "plus", "region2")).max())
    ok = gap <= 1e-12 and eq <= 1e-12
    record(7, "region formulas and their equality lines", ok, f"formula gap {gap:.1e}, equality gap {eq:.1e}")
    assert ok


def test_ac08_convergence():
    gap = 0.0
    for q in QR_CURVES:
        b1 = correlations.region_state(R_MAX, q, "region1")
        b2 = correlations.region_state(R_MAX, q, "region2")
        for fn in (coherence.l1_coherence, correlations.geometric_discord_eigen, correlations.concurrence):
            gap = max(gap, abs(fn(b1) - fn(b2)))
    ok = gap <= 1e-11
    record(8, "regions coincide at r = pi/4", ok, f"max gap {gap:.1e}")
    assert ok


def test_ac09_sudden_death():
    rs = np.linspace(0, R_MAX, 1024)
    found, ok = [], True
    for q in QR_CURVES:
        r_star = correlations.sudden_death_r(q, "region1", grid=1024)
        if r_star is None or not r_star < PI4:
            ok = False
            found.append(f"q_R={q}: none")
            continue
        tail = correlations.region_state(rs[rs >= r_star], q, "region1")
        dead = all(correlations.concurrence(x) == 0.0 for x in tail)
        alive = all(coherence.l1_coherence(x) > 0 and correlations.geometric_discord_eigen(x) > 0 for x in tail)
        ok &= dead and alive
        found.append(f"q_R={q}: r*={r_star:.6f}")
    record(9, "entanglement sudden death before pi/4", ok, ", ".join(found))
    assert ok


def test_ac10_cross_formula_oracles():
    rng = np.random.default_rng(2024)
    rhos = random_density_matrices(rng, 1000, 4)
    gqd_gap = max(abs(correlations.geometric_discord_eigen(x) - correlations.geometric_discord_svd(x)) for x in rhos)
    conc_gap = max(abs(correlations.concurrence(x) - concurrence_charpoly(x)) for x in rhos)
    werner_gap = max(abs(correlations.concurrence(werner(p)) - max(0.0, (3 * p - 1) / 2))
                     for p in np.linspace(0, 1, 11))
    ok = gqd_gap <= 1e-11 and conc_gap <= 1e-9 and werner_gap <= 1e-10
    record(10, "GQD routes, concurrence oracle, Werner family", ok,
           f"GQD {gqd_gap:.1e}, concurrence {conc_gap:.1e}, Werner {werner_gap:.1e}")
    assert ok


def test_ac11_density_hygiene():
    r, q, t = full_grid()
    problems = []
    for fam in states.FAMILIES:
        for conv in states.CONVENTIONS:
            amps = states.prepared_state(r, q, t, fam, conv).amplitudes
            for sector in Sector:
                bad = density_defects(reduce_amplitudes(amps, sector))
                if bad:
                    problems.append(f"{fam}/{conv}/{sector.value}: {bad}")
    ok = not problems
    record(11, "density-matrix hygiene on the full grid", ok, "; ".join(problems) or "65536 points x 16 variants")
    assert ok


def _figure_hashes(threads):
    return {panel: hashlib.sha256(sweep.format_csv(recs).encode("utf-8")).hexdigest()
            for fig in sweep.FIGURES for panel, recs in sweep.run_figure(fig, threads=threads).items()}


def test_ac12_determinism():
    first, second, parallel = _figure_hashes(1), _figure_hashes(1), _figure_hashes(8)
    ok = first == second == parallel
    record(12, "byte-identical presets across runs and threads", ok, f"{len(first)} panels")
    assert ok


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_ac")):
        try:
            fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
