"""Dense symmetric eigendecomposition with an explicit relative zero threshold."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import InsufficientSpectrumError, NumericError, ParameterError

DEFAULT_ZERO_TOL = 1e-8
SYMMETRY_TOL = 1e-10
SIGN_TOL = 1e-12


def _as_dense(M) -> np.ndarray:
    A = M.toarray() if sparse.issparse(M) else np.asarray(M)
    return A.astype(float, copy=False)


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    zero_tol: float = DEFAULT_ZERO_TOL

    @property
    def zero_threshold(self) -> float:
        top = float(np.max(np.abs(self.eigenvalues))) if self.eigenvalues.size else 0.0
        return self.zero_tol * max(1.0, top)

    @property
    def nullity(self) -> int:
        return int(np.count_nonzero(self.eigenvalues <= self.zero_threshold))

    def nonzero_indices(self) -> np.ndarray:
        return np.flatnonzero(self.eigenvalues > self.zero_threshold)


def canonical_sign(v: np.ndarray) -> np.ndarray:
    """Flip so the first component of non-negligible magnitude is positive."""
    nz = np.flatnonzero(np.abs(v) > SIGN_TOL)
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def eig_sym(M, zero_tol: float = DEFAULT_ZERO_TOL) -> Spectrum:
    """Full decomposition of a symmetric matrix (symmetrized before the solve)."""
    A = _as_dense(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NumericError(f"expected a square matrix, got shape {A.shape}")
    if A.size:
        if not np.all(np.isfinite(A)):
            raise NumericError("matrix has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(A))))
        if float(np.max(np.abs(A - A.T))) > SYMMETRY_TOL * scale:
            raise NumericError("matrix is not symmetric within tolerance")
    vals, vecs = np.linalg.eigh((A + A.T) / 2.0)
    return Spectrum(vals, vecs, zero_tol)


def nullity(M, zero_tol: float = DEFAULT_ZERO_TOL) -> int:
    """Count of eigenvalues at or below zero_tol * max(1, largest eigenvalue)."""
    return eig_sym(M, zero_tol).nullity


def smallest_nonzero_eigenpairs(
    M, k: int, zero_tol: float = DEFAULT_ZERO_TOL
) -> list[tuple[float, np.ndarray]]:
    """The k smallest eigenpairs strictly above the zero threshold.

    Eigenvectors follow the deterministic sign convention of canonical_sign.
    """
    if k < 1:
        raise ParameterError("k must be >= 1")
    spec = eig_sym(M, zero_tol)
    idx = spec.nonzero_indices()
    if idx.size < k:
        raise InsufficientSpectrumError(
            f"requested {k} nonzero eigenvalues, only {idx.size} available"
        )
    return [
        (float(spec.eigenvalues[i]), canonical_sign(spec.eigenvectors[:, i]))
        for i in idx[:k]
    ]
