"""Boundary operators, combinatorial Laplacians, and the rank-nullity oracle.

Boundary matrices carry integer entries so that the chain-complex identity
(the composite of consecutive boundary maps vanishes) can be asserted in
exact arithmetic.  Laplacians built from them are therefore integer matrices
as well; eigen-analysis converts to dense floats on demand.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from .complex import SimplicialComplex, faces
from .errors import ParameterError

RANK_REL_TOL = 1e-9


def boundary_matrix(X: SimplicialComplex, n: int) -> sparse.csr_matrix:
    """Signed incidence matrix from n-simplices to (n-1)-simplices.

    Column k holds the faces of the k-th n-simplex with alternating signs
    (the i-th face, obtained by dropping the i-th vertex, gets (-1)**i).
    Dimension 0 maps to the empty chain group: a 0 x |X_0| matrix.
    """
    if n < 0:
        raise ParameterError("boundary dimension must be >= 0")
    if n == 0:
        return sparse.csr_matrix((0, X.level_size(0)), dtype=np.int64)
    rows, cols, data = [], [], []
    for k, c in enumerate(X.simplices(n)):
        for i, f in enumerate(faces(c)):
            rows.append(X.index_of(f))
            cols.append(k)
            data.append(-1 if i % 2 else 1)
    shape = (X.level_size(n - 1), X.level_size(n))
    return sparse.csr_matrix((data, (rows, cols)), shape=shape, dtype=np.int64)


def down_laplacian(X: SimplicialComplex, n: int) -> sparse.csr_matrix:
    B = boundary_matrix(X, n)
    return (B.T @ B).tocsr()


def up_laplacian(X: SimplicialComplex, n: int) -> sparse.csr_matrix:
    B = boundary_matrix(X, n + 1)
    return (B @ B.T).tocsr()


def laplacian(X: SimplicialComplex, n: int) -> sparse.csr_matrix:
    """Combinatorial Laplacian: down plus up part, symmetric PSD."""
    return (down_laplacian(X, n) + up_laplacian(X, n)).tocsr()


def matrix_rank(M) -> int:
    """Numerical rank with singular values below RANK_REL_TOL * max(1, s_max) as zero."""
    A = M.toarray() if sparse.issparse(M) else np.asarray(M)
    if min(A.shape) == 0:
        return 0
    s = np.linalg.svd(A.astype(float), compute_uv=False)
    return int(np.count_nonzero(s > RANK_REL_TOL * max(1.0, s[0])))


def homology_dimension(X: SimplicialComplex, n: int) -> int:
    """Number of n-dimensional holes: dim ker of the n-th boundary map minus
    the rank of the (n+1)-th.

    Computed purely from boundary-matrix ranks, independently of any
    Laplacian; serves as the oracle for kernel-dimension checks.
    """
    if n < 0:
        raise ParameterError("homology dimension must be >= 0")
    ker = X.level_size(n) - matrix_rank(boundary_matrix(X, n))
    return ker - matrix_rank(boundary_matrix(X, n + 1))
