"""l1-norm coherence of the sector and region states."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .reductions import DensityMatrix, Sector, reduce_amplitudes
from .smallmat import random_density_matrices
from .states import Convention, Family, R_MAX, prepared_state, q_left

FD_STEP = 1e-5
FREEZE_TOL = 1e-10


def l1_coherence(rho) -> np.ndarray | float:
    """Sum of moduli of the off-diagonal entries (batched)."""
    if isinstance(rho, DensityMatrix):
        rho = rho.data
    rho = np.asarray(rho)
    total = np.abs(rho).sum(axis=(-2, -1)) - np.abs(np.diagonal(rho, axis1=-2, axis2=-1)).sum(axis=-1)
    return float(total) if np.ndim(total) == 0 else total


def pipeline_coherence(r, q_R, theta, family: Family, sector, convention: Convention = "swapped"):
    """C_l1 of the reduced state, computed by partial trace."""
    amps = prepared_state(r, q_R, theta, family, convention).amplitudes
    return l1_coherence(reduce_amplitudes(amps, sector))


def _weights(q_R, family: Family, convention: Convention):
    """(particle weight, antiparticle weight) multiplying sin(2 theta)."""
    q_L = q_left(q_R)
    if family == "minus" and convention == "printed":
        return q_L, q_R
    return q_R, q_L


def sector_coherence_closed(r, q_R, theta, family: Family, sector,
                            convention: Convention = "swapped"):
    """Analytic sector coherence.

    plus:  particle q_R sin2t cos r,  antiparticle q_L sin2t sin r
    minus: particle q_R sin2t sin r,  antiparticle q_L sin2t cos r
    (the ``printed`` minus convention exchanges q_R and q_L).
    """
    sector = Sector.parse(sector)
    wp, wa = _weights(q_R, family, convention)
    s2t = np.sin(2 * np.asarray(theta, dtype=float))
    if family == "plus":
        fp, fa = np.cos(r), np.sin(r)
    else:
        fp, fa = np.sin(r), np.cos(r)
    if sector == Sector.particle_I:
        return wp * s2t * fp
    if sector == Sector.antiparticle_I:
        return wa * s2t * fa
    raise ValueError(f"sector coherence needs particle_I or antiparticle_I, got {sector}")


def region_coherence_closed(r, q_R, region, theta: float = math.pi / 4):
    """Plus-family region coherence at the maximally coherent preparation."""
    if not math.isclose(float(theta), math.pi / 4, abs_tol=1e-15):
        raise NotImplementedError("region closed forms exist only for theta = pi/4")
    region = Sector.parse(region)
    q_L = q_left(q_R)
    c, s = np.cos(r), np.sin(r)
    if region == Sector.region_I:
        return q_L * q_R * c * s + q_L * s + q_R * c
    if region == Sector.region_II:
        return q_L * q_R * c * s + q_L * c + q_R * s
    raise ValueError(f"region closed form needs region_I or region_II, got {region}")


@dataclass
class FreezingReport:
    sector: Sector
    family: Family
    convention: Convention
    derivative_expression: str
    zero_conditions: list[str]
    max_abs_derivative: dict[str, float] = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return all(v <= FREEZE_TOL for v in self.max_abs_derivative.values())


_DERIVATIVES = {
    ("plus", Sector.particle_I): "-{w} sin(2 theta) sin r",
    ("plus", Sector.antiparticle_I): "{w} sin(2 theta) cos r",
    ("minus", Sector.particle_I): "{w} sin(2 theta) cos r",
    ("minus", Sector.antiparticle_I): "-{w} sin(2 theta) sin r",
}


def _central_difference(f, r, h=FD_STEP):
    return (f(r + h) - f(r - h)) / (2 * h)


def freezing_analysis(family: Family, sector, convention: Convention = "swapped",
                      n_samples: int = 16, theta_probe: float = math.pi / 4) -> FreezingReport:
    """Conditions under which the sector coherence does not depend on r.

    Each condition is substituted into the partial-trace pipeline and the
    r-derivative is estimated by central differences at ``n_samples``
    interior points.
    """
    sector = Sector.parse(sector)
    names = ("q_L", "q_R") if family == "minus" and convention == "printed" else ("q_R", "q_L")
    weight = names[0] if sector == Sector.particle_I else names[1]
    expr = _DERIVATIVES[(family, sector)].format(w=weight)
    conditions = ["sin2theta=0", f"{weight}=0"]

    rs = np.linspace(FD_STEP, R_MAX - FD_STEP, n_samples)
    substitutions = {
        "sin2theta=0": dict(q_R=0.6, theta=0.0),
        "q_R=0": dict(q_R=0.0, theta=theta_probe),
        "q_L=0": dict(q_R=1.0, theta=theta_probe),
    }
    worst = {}
    for cond in conditions:
        sub = substitutions[cond]

        def f(r, sub=sub):
            return pipeline_coherence(r, sub["q_R"], sub["theta"], family, sector, convention)

        worst[cond] = float(np.max(np.abs(_central_difference(f, rs))))
    return FreezingReport(sector, family, convention, expr, conditions, worst)


def crossing_r(q_R: float, family: Family = "plus", convention: Convention = "swapped"):
    """Acceleration at which particle and antiparticle coherences coincide, or None."""
    wp, wa = _weights(q_R, family, convention)
    wp, wa = float(wp), float(wa)
    # plus: wp cos r = wa sin r ; minus: wp sin r = wa cos r
    r_star = math.atan2(wp, wa) if family == "plus" else math.atan2(wa, wp)
    return r_star if r_star <= R_MAX + 1e-15 else None


@dataclass
class ProbeReport:
    n_samples: int
    faithfulness: bool
    convexity: bool
    diagonal_unitary_invariance: bool
    worst: dict[str, float]

    @property
    def passed(self) -> bool:
        return self.faithfulness and self.convexity and self.diagonal_unitary_invariance


def coherence_axiom_probes(seed: int = 0, n_samples: int = 1000) -> ProbeReport:
    """Randomised checks of faithfulness, convexity and phase invariance of C_l1."""
    rng = np.random.default_rng(seed)
    worst = {"faithfulness": 0.0, "convexity": 0.0, "invariance": 0.0}
    ok = {"faithfulness": True, "convexity": True, "invariance": True}
    for dim in (2, 4):
        rho = random_density_matrices(rng, n_samples, dim)
        sigma = random_density_matrices(rng, n_samples, dim)
        c_rho = l1_coherence(rho)

        diag = np.zeros_like(rho)
        idx = np.arange(dim)
        diag[:, idx, idx] = rho[:, idx, idx]
        c_diag = l1_coherence(diag)
        worst["faithfulness"] = max(worst["faithfulness"], float(np.max(c_diag)))
        ok["faithfulness"] &= bool(np.all(c_diag <= 1e-12) and np.all(c_rho > 1e-12))

        p = rng.uniform(size=n_samples)[:, None, None]
        mix = p * rho + (1 - p) * sigma
        excess = l1_coherence(mix) - (p[:, 0, 0] * c_rho + (1 - p[:, 0, 0]) * l1_coherence(sigma))
        worst["convexity"] = max(worst["convexity"], float(np.max(excess)))
        ok["convexity"] &= bool(np.all(excess <= 1e-12))

        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(n_samples, dim)))
        rotated = phases[:, :, None] * rho * np.conj(phases)[:, None, :]
        drift = np.abs(l1_coherence(rotated) - c_rho)
        worst["invariance"] = max(worst["invariance"], float(np.max(drift)))
        ok["invariance"] &= bool(np.all(drift <= 1e-12))
    return ProbeReport(n_samples, ok["faithfulness"], ok["convexity"], ok["invariance"], worst)
