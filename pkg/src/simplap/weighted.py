"""Weighted chain complexes: weight maps, weighted boundaries and Laplacians.

A weight function assigns a strictly positive real to every simplex, stored
as one dense vector per dimension aligned with the complex's level ordering
(the diagonal of the per-dimension weight matrix).  The weighted boundary
conjugates the integer boundary by those diagonals; the weighted Laplacian is
assembled both from weighted-boundary products and from the explicit
diagonal-sandwich form so the two routes can cross-check each other.

The filtration condition (no simplex heavier than any of its faces) keeps the
weighted boundary entries at most one in magnitude, which bounds the
Laplacian's operator norm independently of the actual weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .chains import boundary_matrix
from .complex import SimplicialComplex, faces, intersect_complexes, union_complexes
from .errors import IncompatibleWeightsError, InvalidWeightError
from .spectral import eig_sym


@dataclass(frozen=True)
class WeightFunction:
    """Per-dimension strictly positive weight vectors."""

    by_dim: tuple[np.ndarray, ...]

    def vector(self, n: int) -> np.ndarray:
        if 0 <= n < len(self.by_dim):
            return self.by_dim[n]
        return np.zeros(0)


def weight_function(vectors: Sequence[Iterable[float]]) -> WeightFunction:
    cleaned = []
    for n, vec in enumerate(vectors):
        arr = np.asarray(list(vec), dtype=float)
        if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 0.0)):
            raise InvalidWeightError(f"dimension {n} weights must be finite and > 0")
        cleaned.append(arr)
    return WeightFunction(tuple(cleaned))


def unit_weights(X: SimplicialComplex) -> WeightFunction:
    return WeightFunction(tuple(np.ones(X.level_size(n)) for n in range(X.dim + 1)))


@dataclass(frozen=True)
class WeightedComplex:
    complex: SimplicialComplex
    weights: WeightFunction

    def __post_init__(self):
        expected = [self.complex.level_size(n) for n in range(self.complex.dim + 1)]
        got = [v.size for v in self.weights.by_dim]
        if expected != got:
            raise InvalidWeightError(f"weight vector sizes {got} do not match levels {expected}")

    def weight_vector(self, n: int) -> np.ndarray:
        return self.weights.vector(n)

    def weight_of(self, simplex: Iterable[int]) -> float:
        from .complex import as_simplex

        s = as_simplex(simplex)
        return float(self.weight_vector(len(s) - 1)[self.complex.index_of(s)])


def weighted_complex(
    X: SimplicialComplex, vectors: Sequence[Iterable[float]]
) -> WeightedComplex:
    return WeightedComplex(X, weight_function(vectors))


def check_filtration(wc: WeightedComplex) -> bool:
    """True iff every simplex weighs no more than each of its faces."""
    X = wc.complex
    for n in range(1, X.dim + 1):
        w_here = wc.weight_vector(n)
        w_below = wc.weight_vector(n - 1)
        for k, c in enumerate(X.simplices(n)):
            for f in faces(c):
                if w_here[k] > w_below[X.index_of(f)]:
                    return False
    return True


def weighted_boundary(wc: WeightedComplex, n: int) -> sparse.csr_matrix:
    """Boundary conjugated by weights: entry = sign * w_n(col) / w_{n-1}(row)."""
    B = boundary_matrix(wc.complex, n).astype(float)
    if n == 0 or B.nnz == 0:
        return B.tocsr()
    inv_rows = sparse.diags(1.0 / wc.weight_vector(n - 1))
    cols = sparse.diags(wc.weight_vector(n))
    return (inv_rows @ B @ cols).tocsr()


def weighted_down_laplacian(wc: WeightedComplex, n: int) -> sparse.csr_matrix:
    B = weighted_boundary(wc, n)
    return (B.T @ B).tocsr()


def weighted_up_laplacian(wc: WeightedComplex, n: int) -> sparse.csr_matrix:
    B = weighted_boundary(wc, n + 1)
    if B.shape[1] == 0:
        size = wc.complex.level_size(n)
        return sparse.csr_matrix((size, size))
    return (B @ B.T).tocsr()


def weighted_laplacian(wc: WeightedComplex, n: int) -> sparse.csr_matrix:
    return (weighted_down_laplacian(wc, n) + weighted_up_laplacian(wc, n)).tocsr()


def weighted_laplacian_sandwich(wc: WeightedComplex, n: int) -> sparse.csr_matrix:
    """Independent assembly route: diagonal weight matrices around the raw boundaries.

    Down part: W_n B_n^T W_{n-1}^{-2} B_n W_n; up part: W_n^{-1} B_{n+1}
    W_{n+1}^2 B_{n+1}^T W_n^{-1}.  Used to cross-check weighted_laplacian.
    """
    X = wc.complex
    size = X.level_size(n)
    total = sparse.csr_matrix((size, size))
    w_n = wc.weight_vector(n)
    if n >= 1 and X.level_size(n - 1):
        B = boundary_matrix(X, n).astype(float)
        mid = sparse.diags(1.0 / wc.weight_vector(n - 1) ** 2)
        Wn = sparse.diags(w_n)
        total = total + Wn @ B.T @ mid @ B @ Wn
    if X.level_size(n + 1):
        B_up = boundary_matrix(X, n + 1).astype(float)
        mid_up = sparse.diags(wc.weight_vector(n + 1) ** 2)
        inv = sparse.diags(1.0 / w_n)
        total = total + inv @ B_up @ mid_up @ B_up.T @ inv
    return total.tocsr()


def up_laplacian_entry(wc: WeightedComplex, n: int, i: int, j: int) -> float:
    """Single entry of the weighted up-Laplacian from the coface sum formula.

    Deliberately avoids matrix products: sums sign(c_i, f) * sign(c_j, f) *
    w(f)^2 / (w(c_i) w(c_j)) over the cofaces f shared by both simplices.
    """
    X = wc.complex
    level = X.simplices(n)
    if not (0 <= i < len(level) and 0 <= j < len(level)):
        raise IndexError(f"indices ({i}, {j}) out of range for {len(level)} simplices")
    c_i, c_j = level[i], level[j]
    w_n = wc.weight_vector(n)
    w_up = wc.weight_vector(n + 1)
    total = 0.0
    from .complex import orientation_sign

    for f in X.cofaces(c_i):
        s_j = orientation_sign(c_j, f)
        if s_j == 0:
            continue
        s_i = orientation_sign(c_i, f)
        total += s_i * s_j * w_up[X.index_of(f)] ** 2 / (w_n[i] * w_n[j])
    return total


def operator_norm(wc: WeightedComplex, n: int) -> float:
    """2-norm (largest eigenvalue) of the weighted Laplacian at dimension n."""
    L = weighted_laplacian(wc, n)
    if L.shape[0] == 0:
        return 0.0
    vals = eig_sym(L).eigenvalues
    return float(max(vals[-1], 0.0))


def norm_bound(wc: WeightedComplex, n: int) -> float:
    """Weight-independent norm bound valid under the filtration condition."""
    return (n + 2) * wc.complex.level_size(n)


def _check_overlap_weights(a: WeightedComplex, b: WeightedComplex) -> None:
    shared_dim = min(a.complex.dim, b.complex.dim)
    for n in range(shared_dim + 1):
        w_b = b.weight_vector(n)
        for s in a.complex.simplices(n):
            if s in b.complex:
                if a.weight_vector(n)[a.complex.index_of(s)] != w_b[b.complex.index_of(s)]:
                    raise IncompatibleWeightsError(f"weights differ on shared simplex {s}")


def weighted_union(a: WeightedComplex, b: WeightedComplex) -> WeightedComplex:
    """Union complex, taking each simplex's weight from `a` when present there."""
    _check_overlap_weights(a, b)
    X = union_complexes(a.complex, b.complex)
    vectors = []
    for n in range(X.dim + 1):
        w = np.empty(X.level_size(n))
        for k, s in enumerate(X.simplices(n)):
            src = a if s in a.complex else b
            w[k] = src.weight_vector(n)[src.complex.index_of(s)]
        vectors.append(w)
    return WeightedComplex(X, WeightFunction(tuple(vectors)))


def weighted_intersection(a: WeightedComplex, b: WeightedComplex) -> WeightedComplex:
    """Common simplices with weights restricted from `a` (equal to `b`'s by precondition)."""
    _check_overlap_weights(a, b)
    X = intersect_complexes(a.complex, b.complex)
    vectors = [
        np.array([a.weight_vector(n)[a.complex.index_of(s)] for s in X.simplices(n)])
        for n in range(X.dim + 1)
    ]
    return WeightedComplex(X, WeightFunction(tuple(vectors)))


def weighted_to_dict(wc: WeightedComplex) -> dict:
    from .complex import complex_to_dict

    data = complex_to_dict(wc.complex)
    data["weights"] = {
        str(n): [float(x) for x in wc.weight_vector(n)] for n in range(wc.complex.dim + 1)
    }
    return data


def weighted_from_dict(data: dict) -> WeightedComplex:
    from .complex import complex_from_dict

    X = complex_from_dict(data)
    try:
        raw = data["weights"]
        vectors = [raw[str(n)] for n in range(X.dim + 1)]
    except (KeyError, TypeError) as exc:
        raise InvalidWeightError("weighted complex JSON needs weights for every dimension") from exc
    return weighted_complex(X, vectors)
