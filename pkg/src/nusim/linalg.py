"""Small dense complex matrix kernel.

Everything here works on plain ``numpy`` arrays. Matrices in this package are
at most a few hundred rows wide, so no sparse formats are used.
"""
from __future__ import annotations

import numpy as np

EPS_HERM = 1e-12
EPS_UNITARY = 1e-10
MAX_EIG_DIM = 4096

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)

for _m in PAULIS:
    _m.setflags(write=False)


class LinalgError(ValueError):
    pass


class NotHermitianError(LinalgError):
    pass


class NotUnitaryError(LinalgError):
    pass


class EigenConvergenceError(LinalgError):
    pass


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise LinalgError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise LinalgError("matrix contains NaN or Inf")
    return a


def as_hermitian(a, tol: float = EPS_HERM) -> np.ndarray:
    """Validate ``a`` as Hermitian and return it as a read-only complex array."""
    a = _as_square(a)
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise NotHermitianError(f"max |A - A^dagger| = {dev:.3e} exceeds {tol:.1e}")
    a = a.copy()
    a.setflags(write=False)
    return a


def unitarity_error(u) -> float:
    u = np.asarray(u, dtype=complex)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def as_unitary(u, tol: float = EPS_UNITARY) -> np.ndarray:
    """Validate ``u`` as unitary and return it as a read-only complex array."""
    u = _as_square(u)
    dev = unitarity_error(u)
    if dev > tol:
        raise NotUnitaryError(f"max |U^dagger U - I| = {dev:.3e} exceeds {tol:.1e}")
    u = u.copy()
    u.setflags(write=False)
    return u


def kron(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor most significant."""
    if not mats:
        raise LinalgError("kron needs at least one matrix")
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        m = np.asarray(m, dtype=complex)
        if out.size == 0 or m.size == 0:
            raise LinalgError("kron of an empty matrix")
        out = np.kron(out, m)
    return out


def eig_hermitian(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns
    -------
    eigenvalues : ndarray of float, ascending
    eigenvectors : ndarray, unitary, column ``k`` pairs with ``eigenvalues[k]``
    """
    h = as_hermitian(h)
    if h.shape[0] > MAX_EIG_DIM:
        raise LinalgError(f"dimension {h.shape[0]} exceeds cap {MAX_EIG_DIM}")
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise EigenConvergenceError(
            f"Hermitian eigensolver did not converge on a {h.shape[0]}x{h.shape[0]} matrix: {exc}"
        ) from exc
    return w, v


def expm_hermitian(h, t: float) -> np.ndarray:
    """Return ``exp(-i h t)`` through the eigenbasis of ``h``."""
    w, v = eig_hermitian(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def expm_taylor(a, terms: int = 50) -> np.ndarray:
    """Scaling-and-squaring Taylor exponential of a general square matrix.

    Kept independent of :func:`eig_hermitian` so the two can check each other.
    """
    a = _as_square(a)
    norm = np.max(np.sum(np.abs(a), axis=1))
    squarings = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0.5 else 0
    s = a / 2.0**squarings
    n = a.shape[0]
    out = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, terms + 1):
        term = term @ s / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def distance_up_to_global_phase(u, v) -> float:
    """``min_phi ||u - e^{i phi} v||_F``.

    Equal to ``sqrt(2d - 2|tr(u^dagger v)|)`` for unitaries; evaluated at the
    optimal phase directly because the closed form cancels catastrophically
    near zero (it bottoms out around 1e-8).
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise LinalgError(f"shape mismatch {u.shape} vs {v.shape}")
    overlap = np.vdot(v, u)  # tr(v^dagger u)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(u - phase * v))


def commutator_norm(a, b) -> float:
    """Frobenius norm of ``[a, b]``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return float(np.linalg.norm(a @ b - b @ a))
