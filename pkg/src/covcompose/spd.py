"""Symmetric eigendecomposition, the principal matrix logarithm, and three
distances between positive-definite matrices (Euclidean, log-Euclidean,
affine-invariant).
"""

from __future__ import annotations

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NotNearlyPSD,
    NotPositiveDefinite,
)


def symmetrize(mat) -> np.ndarray:
    a = np.asarray(mat, dtype=np.float64)
    return 0.5 * (a + a.T)


def _square(mat) -> np.ndarray:
    a = np.asarray(mat, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def _check_pair(p, q):
    a = _square(p)
    b = _square(q)
    if a.shape != b.shape:
        raise DimensionMismatch(f"matrix dimensions differ: {a.shape} vs {b.shape}")
    return a, b


def sym_eigen(mat):
    """Eigenvalues (descending) and orthonormal eigenvectors of a symmetric matrix.

    Deterministic: each eigenvector's largest-magnitude component is made
    positive, so identical input yields bit-identical output.
    """
    a = symmetrize(_square(mat))
    try:
        evals, evecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigendecomposition failed: {exc}") from exc
    evals = evals[::-1].copy()
    evecs = np.ascontiguousarray(evecs[:, ::-1])
    anchor = np.argmax(np.abs(evecs), axis=0)
    signs = np.sign(evecs[anchor, np.arange(evecs.shape[1])])
    signs[signs == 0] = 1.0
    return evals, evecs * signs


def spd_log(mat) -> np.ndarray:
    """Principal matrix logarithm of a positive-definite matrix."""
    evals, evecs = sym_eigen(mat)
    if evals[-1] <= 0.0:
        raise NotPositiveDefinite(f"smallest eigenvalue {evals[-1]:.6e} is not > 0")
    return symmetrize((evecs * np.log(evals)) @ evecs.T)


def spd_exp(mat) -> np.ndarray:
    """Matrix exponential of a symmetric matrix (inverse of spd_log)."""
    evals, evecs = sym_eigen(mat)
    return symmetrize((evecs * np.exp(evals)) @ evecs.T)


def dist_euclidean(p, q) -> float:
    """Frobenius norm of P - Q."""
    a, b = _check_pair(p, q)
    return float(np.linalg.norm(a - b, "fro"))


def dist_logeuclidean(p, q) -> float:
    """Frobenius norm of log P - log Q."""
    _check_pair(p, q)
    return float(np.linalg.norm(spd_log(p) - spd_log(q), "fro"))


def inv_sqrt(mat) -> np.ndarray:
    """P^{-1/2} for positive-definite P."""
    evals, evecs = sym_eigen(mat)
    if evals[-1] <= 0.0:
        raise NotPositiveDefinite(f"smallest eigenvalue {evals[-1]:.6e} is not > 0")
    return symmetrize((evecs * evals ** -0.5) @ evecs.T)


def dist_affineinvariant(p, q) -> float:
    """sqrt of the summed squared log-eigenvalues of P^{-1} Q.

    The eigenvalues are taken from the similar symmetric product
    P^{-1/2} Q P^{-1/2}. Operands are put in a canonical order first so
    d(P, Q) and d(Q, P) return the exact same float.
    """
    a, b = _check_pair(p, q)
    a = np.ascontiguousarray(a)
    b = np.ascontiguousarray(b)
    if b.tobytes() < a.tobytes():
        a, b = b, a
    isq = inv_sqrt(a)
    try:
        lam = np.linalg.eigvalsh(symmetrize(isq @ b @ isq))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigendecomposition failed: {exc}") from exc
    if lam[0] <= 0.0:
        raise NotPositiveDefinite(f"smallest relative eigenvalue {lam[0]:.6e} is not > 0")
    return float(np.sqrt(np.sum(np.log(lam) ** 2)))


def regularize(mat) -> np.ndarray:
    """Shift a symmetric near-PSD matrix to strictly positive-definite.

    Adds eps * I with eps = max(1e-6 * trace/p, 1e-10). Substantially negative
    eigenvalues signal an upstream covariance bug and raise NotNearlyPSD; if
    accumulated roundoff leaves the shifted matrix marginal, eps escalates
    until the result is strictly positive-definite.
    """
    a = symmetrize(_square(mat))
    p = a.shape[0]
    tr = float(np.trace(a))
    try:
        smallest = float(np.linalg.eigvalsh(a)[0])
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigendecomposition failed: {exc}") from exc
    tol = 1e-8 * max(tr / p, 0.0) + 1e-9
    if smallest < -tol:
        raise NotNearlyPSD(
            f"smallest eigenvalue {smallest:.6e} below -{tol:.6e}; covariance is not nearly PSD"
        )
    eps = max(1e-6 * tr / p, 1e-10)
    while smallest + eps <= 1e-3 * eps:
        eps *= 10.0
    return a + eps * np.eye(p)
