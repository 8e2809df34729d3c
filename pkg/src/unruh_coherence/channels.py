"""Qubit channels induced by Unruh modes, and their cohering/decohering power.

A channel is stored as an isometry ``V`` from the input qubit into an
n-qubit space together with the index of the qubit that survives the
partial trace.  Its affine Bloch action ``m -> M m + c`` is derived from
``V`` at construction and checked against it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import smallmat
from .coherence import l1_coherence
from .smallmat import random_density_matrices
from .reductions import KEEP, Sector
from .states import Convention, Family, excitation, q_left, vacuum_amplitudes

PAULI = np.array(
    [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex
)
Z_BASIS = np.array([0.0, 0.0, 1.0])
AFFINE_TOL = 1e-11
NORM_SLACK = 1e-10
INV_PHI = (math.sqrt(5) - 1) / 2
SCAN_CHUNK = 32


class InvalidChannelError(ValueError):
    pass


def bloch_vector(rho) -> np.ndarray:
    rho = np.asarray(rho)
    off = rho[..., 0, 1]
    return np.stack([2 * off.real, -2 * off.imag, (rho[..., 0, 0] - rho[..., 1, 1]).real], axis=-1)


def bloch_state(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    return 0.5 * (np.eye(2) + np.einsum("...i,ijk->...jk", m, PAULI))


def pure_ket(m) -> np.ndarray:
    """Ket with unit Bloch vector ``m`` (batched over leading axes)."""
    m = np.asarray(m, dtype=float)
    polar = np.arccos(np.clip(m[..., 2], -1.0, 1.0))
    azimuth = np.arctan2(m[..., 1], m[..., 0])
    return np.stack([np.cos(polar / 2) + 0j, np.exp(1j * azimuth) * np.sin(polar / 2)], axis=-1)


def _lift(x: np.ndarray, batch_ndim: int, core_ndim: int) -> np.ndarray:
    """Insert singleton axes so a leading sample axis broadcasts against a channel batch."""
    lead = x.ndim - core_ndim
    return x.reshape(x.shape[:lead] + (1,) * batch_ndim + x.shape[lead:])


@dataclass(frozen=True, eq=False)
class QubitChannel:
    """Isometry ``(..., 2**n, 2)`` plus the surviving qubit index.

    Leading axes of the isometry describe a batch of channels sharing
    ``keep``; every method broadcasts over them.
    """

    isometry: np.ndarray
    keep: int
    label: str = ""
    bloch_matrix: np.ndarray = field(init=False)
    bloch_shift: np.ndarray = field(init=False)
    _defect_factor: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        V = np.asarray(self.isometry, dtype=complex)
        dim = V.shape[-2] if V.ndim >= 2 else 0
        n = dim.bit_length() - 1
        if V.ndim < 2 or V.shape[-2:] != (2**n, 2) or not 0 <= self.keep < n:
            raise InvalidChannelError(f"bad isometry shape {V.shape} / keep={self.keep}")
        gram = smallmat.dagger(V) @ V
        if not smallmat.allclose(gram, np.eye(2), 1e-12):
            raise InvalidChannelError(f"V^H V deviates from identity by {np.abs(gram - np.eye(2)).max():.3e}")
        V.setflags(write=False)
        object.__setattr__(self, "isometry", V)

        probes = bloch_state(np.concatenate([np.eye(3), -np.eye(3)]))
        out = bloch_vector(self.apply(_lift(probes, self.batch_ndim, 2)))
        M = np.moveaxis((out[:3] - out[3:]) / 2, 0, -1)
        c = (out[:3] + out[3:]).mean(axis=0) / 2
        object.__setattr__(self, "bloch_matrix", M)
        object.__setattr__(self, "bloch_shift", c)
        if n > 1:
            factor = np.linalg.qr(self.minor_coefficients(), mode="r")
        else:
            factor = np.zeros(self.batch_shape + (3, 3), dtype=complex)
        object.__setattr__(self, "_defect_factor", factor)
        self.verify_affine()

    @property
    def n_qubits(self) -> int:
        return self.isometry.shape[-2].bit_length() - 1

    @property
    def batch_shape(self) -> tuple:
        return self.isometry.shape[:-2]

    @property
    def batch_ndim(self) -> int:
        return self.isometry.ndim - 2

    def kraus(self) -> np.ndarray:
        """Isometry reshaped to ``(..., 2 kept, 2**(n-1) env, 2 in)``."""
        n = self.n_qubits
        batch = self.batch_shape
        t = self.isometry.reshape(*batch, *([2] * n), 2)
        t = np.moveaxis(t, len(batch) + self.keep, len(batch))
        return t.reshape(*batch, 2, 2 ** (n - 1), 2)

    def apply(self, rho) -> np.ndarray:
        """``Tr_env(V rho V^H)``, contracted without forming the big matrix."""
        K = self.kraus()
        return np.einsum("...aei,...ij,...bej->...ab", K, np.asarray(rho, dtype=complex), np.conj(K))

    def affine(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=float)
        return np.einsum("...ij,...j->...i", self.bloch_matrix, m) + self.bloch_shift

    def minor_coefficients(self) -> np.ndarray:
        """Coefficients ``C`` with output 2x2 minors ``= C @ (k0^2, k0 k1, k1^2)``.

        For an input ket ``k`` the output amplitudes form a 2 x 2^(n-1) matrix
        ``A[i, e] = sum_a K[i, e, a] k_a``; each minor ``A_0j A_1l - A_0l A_1j``
        is a quadratic form in ``k``.
        """
        K = self.kraus()
        j, l = np.triu_indices(K.shape[-2], 1)
        W = (K[..., 0, j, :, None] * K[..., 1, l, None, :]
             - K[..., 0, l, :, None] * K[..., 1, j, None, :])
        return np.stack([W[..., 0, 0], W[..., 0, 1] + W[..., 1, 0], W[..., 1, 1]], axis=-1)

    def purity_defect(self, m) -> np.ndarray:
        """``1 - |m'|^2`` for pure inputs with unit Bloch vector ``m``.

        Equals ``4 det(rho_out) = 4 sum_{j<l} |A_0j A_1l - A_0l A_1j|^2`` (Cauchy-Binet),
        a sum of squares that stays accurate when the output is nearly pure.
        The minors are evaluated through the triangular factor of
        :meth:`minor_coefficients`, which preserves the norm.
        """
        ket = pure_ket(m)
        u = np.stack([ket[..., 0] ** 2, ket[..., 0] * ket[..., 1], ket[..., 1] ** 2], axis=-1)
        Ru = np.einsum("...ij,...j->...i", self._defect_factor, u)
        return 4.0 * np.sum(Ru.real**2 + Ru.imag**2, axis=-1)

    def verify_affine(self, n_inputs: int = 64, seed: int = 1234) -> None:
        rho = random_density_matrices(np.random.default_rng(seed), n_inputs, 2)
        direct = bloch_vector(self.apply(_lift(rho, self.batch_ndim, 2)))
        model = self.affine(_lift(bloch_vector(rho), self.batch_ndim, 1))
        err = np.abs(direct - model).max()
        if err > AFFINE_TOL:
            raise InvalidChannelError(f"affine Bloch model off by {err:.3e} for {self.label or 'channel'}")


def identity_channel() -> QubitChannel:
    return QubitChannel(np.eye(2), 0, "identity")


def unitary_channel(U, label: str = "unitary") -> QubitChannel:
    return QubitChannel(np.asarray(U, dtype=complex), 0, label)


def depolarizing_channel() -> QubitChannel:
    """Completely depolarising channel: |i> -> |i> (x) |Phi+>, keep qubit 1."""
    V = np.zeros((8, 2), dtype=complex)
    V[0b000, 0] = V[0b011, 0] = 1 / math.sqrt(2)
    V[0b100, 1] = V[0b111, 1] = 1 / math.sqrt(2)
    return QubitChannel(V, 1, "depolarizing")


def unruh_channel(r, q_R, sector, family: Family = "plus",
                  convention: Convention = "swapped") -> QubitChannel:
    """|0> -> Unruh vacuum, |1> -> one-(anti)particle state; keep one region-I slot."""
    sector = Sector.parse(sector)
    if sector not in (Sector.particle_I, Sector.antiparticle_I):
        raise ValueError(f"Unruh channel keeps a single sector, got {sector}")
    vac = vacuum_amplitudes(r)
    exc = excitation(r, q_R, family, convention).amplitudes
    vac, exc = np.broadcast_arrays(vac, exc)
    V = np.stack([vac, exc], axis=-1)
    label = f"unruh[{family}/{sector.value}/{convention}]"
    return QubitChannel(V, KEEP[sector][0], label)


def f_measure(ch: QubitChannel, m, k=Z_BASIS) -> np.ndarray | float:
    """``(1 - sqrt(1 - |m'|^2)) (1 - (m'.k / |m'|)^2)`` for unit input Bloch vector(s) ``m``.

    ``m' = 0`` gives 0.
    """
    m = np.asarray(m, dtype=float)
    k = np.asarray(k, dtype=float)
    if np.any(np.abs(np.linalg.norm(m, axis=-1) - 1.0) > 1e-12):
        raise ValueError("input Bloch vector must be a unit vector")
    mp = ch.affine(m)
    norm2 = np.sum(mp * mp, axis=-1)
    if np.any(norm2 > (1.0 + NORM_SLACK) ** 2):
        raise InvalidChannelError(f"output Bloch vector longer than 1: {np.sqrt(norm2.max()):.12f}")
    defect = np.clip(ch.purity_defect(m), 0.0, 1.0)
    cross = np.cross(mp, k)
    safe = np.where(norm2 > 0, norm2, 1.0)
    transverse = np.where(norm2 > 0, np.sum(cross * cross, axis=-1) / safe, 0.0)
    return _scalar((1.0 - np.sqrt(defect)) * np.clip(transverse, 0.0, 1.0))


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def cohering_power(ch: QubitChannel, k=Z_BASIS):
    k = np.asarray(k, dtype=float)
    return _scalar(np.maximum(f_measure(ch, k, k), f_measure(ch, -k, k)))


def cohering_power_z(ch: QubitChannel):
    return cohering_power(ch, Z_BASIS)


def cohering_power_definition(ch: QubitChannel):
    """Max l1 coherence produced from |0><0| and |1><1| (z basis)."""
    inputs = _lift(np.array([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]), ch.batch_ndim, 2)
    return _scalar(np.max(l1_coherence(ch.apply(inputs)), axis=0))


def golden_section_min(f, a, b, tol: float = 1e-12, max_iter: int = 200):
    """Minimise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``.

    ``a`` and ``b`` may be arrays (one bracket per element, ``f`` evaluated
    elementwise); iteration stops once every bracket is narrower than ``tol``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = np.asarray(f(c)), np.asarray(f(d))
    for _ in range(max_iter):
        if np.all(np.abs(b - a) <= tol):
            break
        left = fc <= fd
        # left: minimum in [a, d]  -> b=d, d=c, new c
        # right: minimum in [c, b] -> a=c, c=d, new d
        a, b = np.where(left, a, c), np.where(left, d, b)
        c_new = np.where(left, b - INV_PHI * (b - a), d)
        d_new = np.where(left, c, a + INV_PHI * (b - a))
        fc_old, fd_old = fc, fd
        probe = np.where(left, c_new, d_new)
        fp = np.asarray(f(probe))
        fc = np.where(left, fp, fd_old)
        fd = np.where(left, fc_old, fp)
        c, d = c_new, d_new
    best = fc <= fd
    return _scalar(np.where(best, c, d)), _scalar(np.where(best, fc, fd))


def _equator(k) -> tuple[np.ndarray, np.ndarray]:
    k = np.asarray(k, dtype=float)
    k = k / np.linalg.norm(k)
    helper = np.array([1.0, 0.0, 0.0]) if abs(k[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = helper - (helper @ k) * k
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(k, e1)


def decohering_power(ch: QubitChannel, k=Z_BASIS, grid: int = 1024, tol: float = 1e-12):
    """``1 - min F`` over pure inputs on the equator orthogonal to ``k``.

    A ``grid``-point azimuth scan brackets the minimum, golden section then
    refines it to ``|d phi| <= tol``.  Batched channels are refined together.
    """
    e1, e2 = _equator(k)

    def m_of(phi):
        phi = np.asarray(phi, dtype=float)[..., None]
        return np.cos(phi) * e1 + np.sin(phi) * e2

    phis = np.linspace(0.0, 2 * math.pi, grid, endpoint=False)
    coarse = np.full(ch.batch_shape, np.inf)
    i = np.zeros(ch.batch_shape, dtype=int)
    for start in range(0, grid, SCAN_CHUNK):
        values = f_measure(ch, _lift(m_of(phis[start:start + SCAN_CHUNK]), ch.batch_ndim, 1), k)
        j = np.argmin(values, axis=0)
        vmin = np.min(values, axis=0)
        better = vmin < coarse
        i = np.where(better, j + start, i)
        coarse = np.where(better, vmin, coarse)
    step = phis[1] - phis[0]
    _, fine = golden_section_min(lambda p: f_measure(ch, m_of(p), k), phis[i] - step, phis[i] + step, tol)
    return _scalar(1.0 - np.minimum(coarse, fine))


def decohering_power_z(ch: QubitChannel, grid: int = 1024):
    return decohering_power(ch, Z_BASIS, grid)


def decohering_power_closed(r, q_R, family: Family, sector):
    """Closed forms, ``1 - (1 - sqrt(1 - mv)) (1 - z^2 / mv)``.

    ``z`` is the output z-component for equatorial inputs and ``mv`` the
    squared output Bloch length.  The minus-family forms assume the swapped
    antiparticle convention.
    """
    sector = Sector.parse(sector)
    q_L2 = np.square(q_left(q_R))
    q_R2 = np.square(q_R)
    c2, s2, cos2r = np.cos(r) ** 2, np.sin(r) ** 2, np.cos(2 * np.asarray(r, dtype=float))
    if family == "plus" and sector == Sector.particle_I:
        z = q_L2 * c2 - s2
        mv = q_R2 * c2 + z * z
    elif family == "plus" and sector == Sector.antiparticle_I:
        z = q_L2 * s2 + cos2r
        mv = q_L2 * s2 + z * z
    elif family == "minus" and sector == Sector.particle_I:
        z = -q_L2 * s2 + c2
        mv = q_R2 * s2 + z * z
    elif family == "minus" and sector == Sector.antiparticle_I:
        z = -q_L2 * c2 + cos2r
        mv = q_L2 * c2 + z * z
    else:
        raise ValueError(f"no closed form for {family}/{sector}")
    safe = np.where(mv > 0, mv, 1.0)
    f = np.where(mv > 0, (1 - np.sqrt(np.clip(1 - mv, 0.0, None))) * (1 - z * z / safe), 0.0)
    return _scalar(1.0 - f)
