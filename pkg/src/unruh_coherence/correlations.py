"""Two-qubit correlations: Bloch decomposition, geometric discord, concurrence."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import smallmat
from .reductions import DensityMatrix, Sector, reduce_amplitudes
from .states import R_MAX, Convention, Family, prepared_state

PAULI = np.array(
    [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex
)
I2 = np.eye(2, dtype=complex)
# sigma_y (x) sigma_y is real, symmetric and orthogonal
YY = np.kron(PAULI[1], PAULI[1]).real


def _as_array(rho) -> np.ndarray:
    return rho.data if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


@dataclass(frozen=True)
class BlochDecomposition:
    x: np.ndarray  # Tr(rho sigma_i (x) I)
    y: np.ndarray  # Tr(rho I (x) sigma_i)
    T: np.ndarray  # Tr(rho sigma_i (x) sigma_j)

    def reassemble(self) -> np.ndarray:
        rho = np.kron(I2, I2).astype(complex)
        for i in range(3):
            rho = rho + self.x[i] * np.kron(PAULI[i], I2) + self.y[i] * np.kron(I2, PAULI[i])
            for j in range(3):
                rho = rho + self.T[i, j] * np.kron(PAULI[i], PAULI[j])
        return rho / 4


def bloch_decompose(rho) -> BlochDecomposition:
    rho = _as_array(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-qubit matrix, got {rho.shape}")

    def expect(op):
        val = np.trace(rho @ op)
        if abs(val.imag) > 1e-12:
            raise ValueError(f"complex Pauli expectation {val}; input not Hermitian")
        return val.real

    x = np.array([expect(np.kron(p, I2)) for p in PAULI])
    y = np.array([expect(np.kron(I2, p)) for p in PAULI])
    T = np.array([[expect(np.kron(p, q)) for q in PAULI] for p in PAULI])
    return BlochDecomposition(x, y, T)


def geometric_discord_eigen(rho) -> float:
    """``(|x|^2 + ||T||^2 - lambda_max(x x^T + T T^T)) / 4``."""
    b = bloch_decompose(rho)
    K = np.outer(b.x, b.x) + b.T @ b.T.T
    lam_max = smallmat.hermitian_eig(K).eigenvalues[-1]
    return max(0.0, 0.25 * (b.x @ b.x + np.sum(b.T**2) - lam_max))


def geometric_discord_svd(rho) -> float:
    """Same quantity from the singular values of the 3x4 matrix ``(x | T)``."""
    b = bloch_decompose(rho)
    sv = smallmat.singular_values(np.column_stack([b.x, b.T]))
    sq = sv**2
    return max(0.0, 0.25 * (sq.sum() - sq.max()))


def spin_flip(rho) -> np.ndarray:
    """``(sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)`` in the computational basis."""
    rho = _as_array(rho)
    return YY @ np.conj(rho) @ YY


def concurrence_spectrum(rho) -> np.ndarray:
    """Eigenvalues of ``R = sqrt(sqrt(rho) rho~ sqrt(rho))``, descending.

    ``R`` is the polar factor of ``X = sqrt(rho) sqrt(rho~)`` (``R^2 = X X^H``),
    so its eigenvalues are the singular values of ``X``; computing them that
    way avoids the square-root loss of precision for near-zero eigenvalues.
    """
    rho = _as_array(rho)
    s = smallmat.psd_sqrt(rho)
    s_tilde = YY @ np.conj(s) @ YY
    return smallmat.singular_values(s @ s_tilde)


def concurrence(rho) -> float:
    mu = concurrence_spectrum(rho)
    return float(min(1.0, max(0.0, 2 * mu.max() - mu.sum())))


def region_state(r, q_R, region, theta: float = math.pi / 4, family: Family = "plus",
                 convention: Convention = "swapped") -> np.ndarray:
    amps = prepared_state(r, q_R, theta, family, convention).amplitudes
    return reduce_amplitudes(amps, Sector.parse(region))


def sudden_death_r(q_R: float, region=Sector.region_I, theta: float = math.pi / 4,
                   grid: int = 1024, tol: float = 1e-10):
    """First acceleration after which the region concurrence stays zero up to pi/4.

    A ``grid``-point scan locates the last strictly positive sample; bisection
    then pins the boundary to ``tol``.  Returns None when the concurrence never
    vanishes before pi/4, or is zero on the whole scan.
    """
    rs = np.linspace(0.0, R_MAX, grid)
    rhos = region_state(rs, q_R, region, theta)
    values = np.array([concurrence(rho) for rho in rhos])
    positive = np.flatnonzero(values > 0.0)
    if positive.size == 0 or positive[-1] == grid - 1:
        return None

    def conc_at(r):
        return concurrence(region_state(r, q_R, region, theta))

    lo, hi = rs[positive[-1]], rs[positive[-1] + 1]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if conc_at(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return float(hi)
