"""Dense linear-algebra helpers: nullspaces with an explicit singular-value
gap, and projective comparison of matrices."""

from __future__ import annotations

import numpy as np

NULL_RTOL = 1e-10
PROJ_TOL = 1e-8


def nullspace(A, rtol=NULL_RTOL, scale=None):
    """Orthonormal nullspace basis of ``A`` via SVD.

    Singular values below ``rtol * max(s_max, scale)`` count as zero; pass the
    natural magnitude of the problem as ``scale`` so that an all-zero system
    (every vector in the kernel) is recognized as such.  Returns the basis
    (columns) and the singular values.
    """
    A = np.asarray(A, dtype=complex)
    _, s, vh = np.linalg.svd(A)
    if s.size == 0:
        return np.eye(A.shape[1], dtype=complex), s
    ncols = A.shape[1]
    cutoff = rtol * (s[0] if scale is None else max(s[0], scale))
    rank = int(np.sum(s > cutoff))
    return vh[rank:].conj().T, np.concatenate([s, np.zeros(ncols - s.size)])


def normalize_projective(M):
    """Scale so the largest-magnitude entry becomes exactly 1 (first such
    entry in flat order breaks ties)."""
    M = np.asarray(M, dtype=complex)
    flat = np.abs(M).ravel()
    k = int(np.argmax(flat))
    pivot = M.ravel()[k]
    if pivot == 0:
        raise ValueError("zero matrix cannot be normalized")
    return M / pivot


def projective_distance(A, B) -> float:
    """Relative distance between A and the best scalar multiple of B."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    denom = np.vdot(B, B)
    if denom == 0:
        return float(np.linalg.norm(A) > 0)
    s = np.vdot(B, A) / denom
    return float(np.linalg.norm(A - s * B) / max(np.linalg.norm(A), 1e-300))


def projective_eq(A, B, tol=PROJ_TOL) -> bool:
    return projective_distance(A, B) <= tol


def scalar_between(A, B):
    """The least-squares scalar s with A ~ s B."""
    return np.vdot(B, A) / np.vdot(B, B)
