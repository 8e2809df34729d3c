"""Unruh-mode states of a single Grassmann-scalar frequency mode.

Amplitudes live on the 16-dim basis ``|p q m n>``:

    p  region-I particle       (qubit 0, most significant bit)
    q  region-II antiparticle  (qubit 1)
    m  region-I antiparticle   (qubit 2)
    n  region-II particle      (qubit 3)

All builders broadcast over array-valued ``r`` / ``q_R`` / ``theta`` and
return amplitudes with shape ``(..., 16)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

Family = Literal["plus", "minus"]
Convention = Literal["printed", "swapped"]

R_MAX = math.pi / 4
THETA_MAX = math.pi / 4
FAMILIES = ("plus", "minus")
CONVENTIONS = ("printed", "swapped")

# slack for grid endpoints computed in floating point (e.g. linspace(0, pi/4))
_EDGE = 1e-12


def basis_index(bits: str) -> int:
    """``'1011'`` -> 11, with slot p as the most significant bit."""
    return int(bits, 2)


def q_left(q_R):
    return np.sqrt(np.clip(1.0 - np.square(q_R), 0.0, None))


def _check_range(name: str, x, lo: float, hi: float) -> None:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} must be finite")
    if np.any(x < lo - _EDGE) or np.any(x > hi + _EDGE):
        raise ValueError(f"{name} outside [{lo:g}, {hi:g}]: {x.min():g}..{x.max():g}")


def _check_choice(name: str, value: str, allowed) -> None:
    if value not in allowed:
        raise ValueError(f"{name} must be one of {allowed}, got {value!r}")


@dataclass(frozen=True)
class UnruhParams:
    r: float
    q_R: float
    theta: float = math.pi / 4
    family: Family = "plus"
    convention: Convention = "swapped"

    def __post_init__(self):
        _check_range("r", self.r, 0.0, R_MAX)
        _check_range("q_R", self.q_R, 0.0, 1.0)
        _check_range("theta", self.theta, 0.0, THETA_MAX)
        _check_choice("family", self.family, FAMILIES)
        _check_choice("convention", self.convention, CONVENTIONS)

    @property
    def q_L(self) -> float:
        return float(q_left(self.q_R))


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalised amplitudes over ``|p q m n>``; may carry batch dimensions."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape[-1:] != (16,):
            raise ValueError(f"expected (..., 16) amplitudes, got {amps.shape}")
        norm = np.linalg.norm(amps, axis=-1)
        if np.any(np.abs(norm - 1.0) > 1e-12):
            raise ValueError(f"state not normalised: |psi| = {norm}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def density(self) -> np.ndarray:
        a = self.amplitudes
        return a[..., :, None] * np.conj(a[..., None, :])

    def inner(self, other: "PureState"):
        return np.sum(np.conj(self.amplitudes) * other.amplitudes, axis=-1)


def rindler_r(omega_ratio: float) -> float:
    """Acceleration parameter for a Rindler frequency ratio ``Omega c / a``."""
    omega_ratio = float(omega_ratio)
    if not (omega_ratio > 0 and math.isfinite(omega_ratio)):
        raise ValueError(f"omega_ratio must be positive and finite, got {omega_ratio}")
    return math.acos((math.exp(-2 * math.pi * omega_ratio) + 1.0) ** -0.5)


def _blank(*params) -> np.ndarray:
    shape = np.broadcast(*[np.asarray(p) for p in params]).shape
    return np.zeros(shape + (16,), dtype=complex)


def vacuum_amplitudes(r) -> np.ndarray:
    _check_range("r", r, 0.0, R_MAX)
    c, s = np.cos(r), np.sin(r)
    out = _blank(r)
    out[..., basis_index("0000")] = c * c
    out[..., basis_index("0011")] = -s * c
    out[..., basis_index("1100")] = s * c
    out[..., basis_index("1111")] = -s * s
    return out


def particle_amplitudes(r, q_R) -> np.ndarray:
    _check_range("r", r, 0.0, R_MAX)
    _check_range("q_R", q_R, 0.0, 1.0)
    c, s, q_L = np.cos(r), np.sin(r), q_left(q_R)
    out = _blank(r, q_R)
    out[..., basis_index("1000")] = q_R * c
    out[..., basis_index("1011")] = -q_R * s
    out[..., basis_index("1101")] = q_L * s
    out[..., basis_index("0001")] = q_L * c
    return out


def antiparticle_amplitudes(r, q_R, convention: Convention = "swapped") -> np.ndarray:
    """One-antiparticle excitation.

    ``printed`` puts q_L on the ``|0100>``/``|0111>`` pair and q_R on
    ``|1110>``/``|0010>``; ``swapped`` interchanges the two weights, which is
    the reading that reproduces the closed-form minus-family coherences.
    """
    _check_range("r", r, 0.0, R_MAX)
    _check_range("q_R", q_R, 0.0, 1.0)
    _check_choice("convention", convention, CONVENTIONS)
    c, s, q_L = np.cos(r), np.sin(r), q_left(q_R)
    w_a, w_b = (q_L, q_R) if convention == "printed" else (q_R, q_L)
    out = _blank(r, q_R)
    out[..., basis_index("0100")] = w_a * c
    out[..., basis_index("0111")] = -w_a * s
    out[..., basis_index("1110")] = w_b * s
    out[..., basis_index("0010")] = w_b * c
    return out


def unruh_vacuum(r) -> PureState:
    return PureState(vacuum_amplitudes(r))


def unruh_one_particle(r, q_R) -> PureState:
    return PureState(particle_amplitudes(r, q_R))


def unruh_one_antiparticle(r, q_R, convention: Convention = "swapped") -> PureState:
    return PureState(antiparticle_amplitudes(r, q_R, convention))


def excitation(r, q_R, family: Family, convention: Convention = "swapped") -> PureState:
    _check_choice("family", family, FAMILIES)
    if family == "plus":
        return unruh_one_particle(r, q_R)
    return unruh_one_antiparticle(r, q_R, convention)


def prepared_state(r, q_R, theta, family: Family = "plus",
                   convention: Convention = "swapped") -> PureState:
    """``cos(theta)|0_U> + sin(theta)|1^{+/-}_U>`` with broadcasting parameters."""
    _check_range("theta", theta, 0.0, THETA_MAX)
    theta = np.asarray(theta, dtype=float)[..., None]
    vac = unruh_vacuum(r).amplitudes
    exc = excitation(r, q_R, family, convention).amplitudes
    return PureState(np.cos(theta) * vac + np.sin(theta) * exc)


def initial_state(params: UnruhParams) -> PureState:
    return prepared_state(params.r, params.q_R, params.theta, params.family, params.convention)
