"""Dense complex linear-algebra kernels: SVD, Hermitian eigendecomposition, matrix exponential.

All tensor operations in the package funnel through these three wrappers so
that value clamping, Hermiticity checks and tie-breaking behaviour are fixed
in one place.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError

HERMITICITY_TOL = 1e-12

# Singular values below this fraction of the largest are clamped to zero so
# floating-point noise cannot create phantom Schmidt weights downstream.
SV_CLAMP_REL = 1e-14


def require_finite(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m)
    if not np.all(np.isfinite(m.real)) or (np.iscomplexobj(m) and not np.all(np.isfinite(m.imag))):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return m


def require_hermitian(h: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    h = require_finite(h, "matrix")
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.abs(h).max()))
    if np.abs(h - h.conj().T).max() > tol * scale:
        raise InvalidInputError("matrix is not Hermitian within tolerance")
    return h


def svd(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full-rank-trimmed SVD with descending, noise-clamped singular values.

    Returns (u, s, v_dag) with m = u @ diag(s) @ v_dag.  Singular values below
    SV_CLAMP_REL times the largest are set to zero; LAPACK's stable ordering
    is kept so degenerate values break ties reproducibly.
    """
    m = require_finite(m, "svd input")
    u, s, v_dag = np.linalg.svd(m, full_matrices=False)
    if s.size and s[0] > 0.0:
        s = np.where(s < SV_CLAMP_REL * s[0], 0.0, s)
    return u, s, v_dag


def eigh(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition, eigenvalues ascending.

    Raises InvalidInputError unless the input is Hermitian within 1e-12
    (relative to its largest entry).
    """
    h = require_hermitian(h)
    vals, vecs = np.linalg.eigh(h)
    return vals, vecs


def hermitian_exp(h: np.ndarray, scale: float) -> np.ndarray:
    """exp(scale * h) for Hermitian h, via eigendecomposition.

    For real scale the output is Hermitian; enforced by symmetrizing the
    reconstruction.
    """
    vals, vecs = eigh(h)
    ew = np.exp(scale * vals)
    out = (vecs * ew) @ vecs.conj().T
    if np.isrealobj(np.asarray(scale)):
        out = (out + out.conj().T) / 2
    return out
