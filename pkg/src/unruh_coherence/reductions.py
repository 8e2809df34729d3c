"""Reduced states seen by detectors in region I and region II."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import smallmat
from .states import PureState, UnruhParams, q_left

TRACE_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10


class Sector(enum.Enum):
    particle_I = "particle"
    antiparticle_I = "antiparticle"
    region_I = "region1"
    region_II = "region2"

    @property
    def dim(self) -> int:
        return 2 if self in (Sector.particle_I, Sector.antiparticle_I) else 4

    @classmethod
    def parse(cls, value: "Sector | str") -> "Sector":
        if isinstance(value, cls):
            return value
        for member in cls:
            if value in (member.name, member.value):
                return member
        raise ValueError(f"unknown sector {value!r}")


# qubit slots kept for each sector, in output order; region II is
# (antiparticle-II, particle-II) to line up with the reference matrix basis
KEEP = {
    Sector.particle_I: (0,),
    Sector.antiparticle_I: (2,),
    Sector.region_I: (0, 2),
    Sector.region_II: (1, 3),
}


class InvalidDensityMatrix(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated 2x2 or 4x4 density matrix (leading batch axes allowed)."""

    data: np.ndarray
    check_psd: bool = True

    def __post_init__(self):
        rho = np.asarray(self.data, dtype=complex)
        if rho.ndim < 2 or rho.shape[-1] != rho.shape[-2] or rho.shape[-1] not in (2, 4):
            raise InvalidDensityMatrix(f"expected (..., d, d) with d in (2, 4), got {rho.shape}")
        problems = density_defects(rho, check_psd=self.check_psd)
        if problems:
            raise InvalidDensityMatrix("; ".join(problems))
        rho.setflags(write=False)
        object.__setattr__(self, "data", rho)

    @property
    def dim(self) -> int:
        return self.data.shape[-1]

    def purity(self):
        return np.real(np.einsum("...ij,...ji->...", self.data, self.data))


def density_defects(rho: np.ndarray, check_psd: bool = True) -> list[str]:
    """Human-readable list of violated density-matrix invariants (empty if valid)."""
    problems = []
    tr = np.trace(rho, axis1=-2, axis2=-1)
    if np.any(np.abs(tr - 1.0) > TRACE_TOL):
        problems.append(f"trace off by {np.abs(tr - 1.0).max():.3e}")
    herm = np.abs(rho - smallmat.dagger(rho))
    if herm.size and herm.max() > HERMITIAN_TOL:
        problems.append(f"non-Hermitian by {herm.max():.3e}")
        return problems
    if check_psd:
        w = smallmat.hermitian_eig(rho).eigenvalues
        if w.min() < -PSD_TOL:
            problems.append(f"negative eigenvalue {w.min():.3e}")
    return problems


def reduce_amplitudes(amps: np.ndarray, sector: Sector | str) -> np.ndarray:
    """Raw reduced matrices for ``(..., 16)`` amplitudes, without validation.

    Contracts the amplitude tensor directly instead of forming the 16x16
    projector; equivalent to ``smallmat.partial_trace(|psi><psi|, KEEP[sector])``.
    """
    sector = Sector.parse(sector)
    keep = KEEP[sector]
    amps = np.asarray(amps)
    batch = amps.shape[:-1]
    t = amps.reshape(*batch, 2, 2, 2, 2)
    traced = [i for i in range(4) if i not in keep]
    t = np.moveaxis(t, [len(batch) + k for k in keep] + [len(batch) + i for i in traced],
                    range(len(batch), len(batch) + 4))
    d = 2 ** len(keep)
    mat = t.reshape(*batch, d, 16 // d)
    return mat @ smallmat.dagger(mat)


def reduce(state: PureState, sector: Sector | str, validate: bool = True) -> DensityMatrix:
    rho = reduce_amplitudes(state.amplitudes, sector)
    return DensityMatrix(rho, check_psd=validate)


def closed_form_sector(params: UnruhParams, sector: Sector | str) -> DensityMatrix:
    """Analytic single-sector matrix for the plus family.

    The off-diagonals are the reference ones.  The populations carry
    ``sin^2(theta)`` (the excitation weight); the reference form shows
    ``cos^2(theta)`` there, which only agrees at ``theta = pi/4``.
    """
    sector = Sector.parse(sector)
    if params.family != "plus":
        raise NotImplementedError(
            "no trustworthy closed form for the minus family; use reduce(initial_state(params), sector)"
        )
    r, q_R, theta = params.r, params.q_R, params.theta
    q_L = q_left(q_R)
    c2, s2 = np.cos(r) ** 2, np.sin(r) ** 2
    st2 = np.sin(theta) ** 2
    half = 0.5 * np.sin(2 * theta)
    if sector == Sector.particle_I:
        off = q_R * half * np.cos(r)
        rho = [[-q_R**2 * st2 * c2 + c2, off], [off, q_R**2 * st2 * c2 + s2]]
    elif sector == Sector.antiparticle_I:
        off = -q_L * half * np.sin(r)
        rho = [[q_L**2 * st2 * s2 + c2, off], [off, -q_L**2 * st2 * s2 + s2]]
    else:
        raise ValueError(f"closed form only for single sectors, got {sector}")
    return DensityMatrix(np.array(rho, dtype=complex))
