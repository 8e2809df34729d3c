"""Dense complex linear algebra for small (<= 16x16) matrices.

Every routine accepts leading batch dimensions, so ``(..., n, n)`` stacks
are processed in one vectorised pass.  Qubit index 0 is the leftmost tensor
factor and the most significant bit of the basis-state integer.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
PSD_CLAMP = 1e-10
JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
_TINY = 1e-290


class NotHermitianError(ValueError):
    pass


class NotPSDError(ValueError):
    pass


class HermitianEigen(NamedTuple):
    eigenvalues: np.ndarray  # (..., n) ascending
    eigenvectors: np.ndarray  # (..., n, n), columns


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def allclose(a, b, atol: float) -> bool:
    """Entrywise ``|a - b| <= atol``; no relative slack."""
    return bool(np.all(np.abs(np.asarray(a) - np.asarray(b)) <= atol))


def check_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    diff = np.abs(a - dagger(a))
    if diff.size and diff.max() > tol:
        idx = tuple(int(i) for i in np.unravel_index(int(np.argmax(diff)), diff.shape))
        raise NotHermitianError(
            f"matrix not Hermitian: |A - A^H| = {diff[idx]:.3e} at entry {idx} (tol {tol:g})"
        )


def hermitian_eig(a, tol: float = HERMITIAN_TOL) -> HermitianEigen:
    """Eigendecomposition of Hermitian matrices by cyclic complex Jacobi rotations.

    Sweeps over all (p, q) pairs until the off-diagonal Frobenius mass drops
    below ``JACOBI_OFF_TOL * max(1, ||A||_F)`` or ``JACOBI_MAX_SWEEPS`` is hit.
    Eigenvalues are returned ascending, eigenvectors as columns.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected (..., n, n), got shape {a.shape}")
    check_hermitian(a, tol)
    batch_shape, n = a.shape[:-2], a.shape[-1]

    A = (0.5 * (a + dagger(a))).reshape(-1, n, n).copy()
    V = np.broadcast_to(np.eye(n, dtype=complex), A.shape).copy()
    scale = np.maximum(1.0, np.linalg.norm(A, axis=(-2, -1)))
    offmask = ~np.eye(n, dtype=bool)
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.sqrt(np.sum(np.abs(A[:, offmask]) ** 2, axis=-1))
        if np.all(off <= JACOBI_OFF_TOL * scale):
            break
        for p, q in pairs:
            apq = A[:, p, q]
            mag = np.abs(apq)
            # subnormal entries would overflow the phase division
            active = mag > _TINY
            if not active.any():
                continue
            safe = np.where(active, mag, 1.0)
            phase = np.where(active, apq, 1.0) / safe
            with np.errstate(over="ignore"):
                # |tau| = inf is harmless: t -> 0, the correct limit
                tau = (A[:, q, q].real - A[:, p, p].real) / (2.0 * safe)
                t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # J = diag(.., 1_p, conj(phase)_q, ..) @ real rotation [[c, s], [-s, c]]
            jpp, jpq = c, s
            jqp, jqq = -s * np.conj(phase), c * np.conj(phase)

            colp, colq = A[:, :, p].copy(), A[:, :, q].copy()
            A[:, :, p] = colp * jpp[:, None] + colq * jqp[:, None]
            A[:, :, q] = colp * jpq[:, None] + colq * jqq[:, None]
            rowp, rowq = A[:, p, :].copy(), A[:, q, :].copy()
            A[:, p, :] = np.conj(jpp)[:, None] * rowp + np.conj(jqp)[:, None] * rowq
            A[:, q, :] = np.conj(jpq)[:, None] * rowp + np.conj(jqq)[:, None] * rowq
            A[:, p, q] = 0.0
            A[:, q, p] = 0.0
            A[:, p, p] = A[:, p, p].real
            A[:, q, q] = A[:, q, q].real

            vp, vq = V[:, :, p].copy(), V[:, :, q].copy()
            V[:, :, p] = vp * jpp[:, None] + vq * jqp[:, None]
            V[:, :, q] = vp * jpq[:, None] + vq * jqq[:, None]

    w = np.real(np.diagonal(A, axis1=-2, axis2=-1))
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    V = np.take_along_axis(V, order[:, None, :], axis=-1)
    return HermitianEigen(w.reshape(*batch_shape, n), V.reshape(*batch_shape, n, n))


def psd_sqrt(a) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in ``[-PSD_CLAMP, 0)`` are set to zero; anything more
    negative raises :class:`NotPSDError`.
    """
    w, v = hermitian_eig(a)
    if w.size and w.min() < -PSD_CLAMP:
        raise NotPSDError(f"matrix not PSD: smallest eigenvalue {w.min():.3e}")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root[..., None, :]) @ dagger(v)


def partial_trace(rho, keep: Sequence[int], n: int | None = None) -> np.ndarray:
    """Reduce an n-qubit density matrix onto the qubits listed in ``keep``.

    The output tensor factors follow the order of ``keep`` (so ``keep=(1, 0)``
    also swaps the two survivors).
    """
    rho = np.asarray(rho)
    dim = rho.shape[-1]
    if n is None:
        n = dim.bit_length() - 1
    if rho.shape[-2:] != (dim, dim) or dim != 2**n:
        raise ValueError(f"expected (..., 2^{n}, 2^{n}) matrix, got {rho.shape}")
    keep = [int(k) for k in keep]
    if len(set(keep)) != len(keep):
        raise ValueError(f"repeated index in keep={keep}")
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep={keep} out of range for {n} qubits")

    batch = rho.shape[:-2]
    nb = len(batch)
    t = rho.reshape(*batch, *([2] * (2 * n)))
    bra = list(range(nb, nb + n))
    ket = [i + n if i - nb in keep else i for i in bra]
    # ket labels of traced qubits reuse the bra label, which makes einsum sum them
    in_labels = list(range(nb)) + bra + ket
    out_labels = list(range(nb)) + [nb + k for k in keep] + [nb + k + n for k in keep]
    out = np.einsum(t, in_labels, out_labels)
    d = 2 ** len(keep)
    return out.reshape(*batch, d, d)


def singular_values(a, tol: float = 1e-15, max_sweeps: int = 60) -> np.ndarray:
    """Singular values (descending) by one-sided Hestenes-Jacobi.

    Works for real or complex ``m x n`` input and returns ``min(m, n)``
    values.  Small singular values keep absolute accuracy of order
    ``eps * ||A||``, which eigenvalues of ``A A^H`` would not.
    """
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite entry in matrix")
    m, n = a.shape
    # orthogonalise the columns of whichever orientation has fewer of them
    X = (a.T if n > m else a).astype(complex if np.iscomplexobj(a) else float, copy=True)
    k = X.shape[1]
    for _ in range(max_sweeps):
        rotated = False
        for p in range(k - 1):
            for q in range(p + 1, k):
                x, y = X[:, p].copy(), X[:, q].copy()
                alpha = np.vdot(x, x).real
                beta = np.vdot(y, y).real
                gamma = np.vdot(x, y)
                g = abs(gamma)
                if g <= tol * np.sqrt(alpha * beta) or g <= _TINY:
                    continue
                rotated = True
                with np.errstate(over="ignore"):
                    zeta = (beta - alpha) / (2.0 * g)
                    t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                phase = gamma / g
                yt = np.conj(phase) * y
                X[:, p] = c * x - s * yt
                X[:, q] = phase * (s * x + c * yt)
        if not rotated:
            break
    sv = np.linalg.norm(X, axis=0)
    return np.sort(sv)[::-1][: min(m, n)]


def random_density_matrices(rng: np.random.Generator, n: int, dim: int, rank: int | None = None):
    """Hilbert-Schmidt (Ginibre) ensemble, optionally rank-limited."""
    k = rank or dim
    g = rng.normal(size=(n, dim, k)) + 1j * rng.normal(size=(n, dim, k))
    rho = g @ np.conj(np.swapaxes(g, -1, -2))
    return rho / np.trace(rho, axis1=-2, axis2=-1)[:, None, None]
