"""Finite simplicial complexes with a fixed, reproducible simplex ordering.

A simplex is a tuple of strictly increasing non-negative vertex ids; its
dimension is one less than its vertex count.  A complex stores, per dimension,
the lexicographically sorted list of its simplices plus a simplex-to-index
lookup, and is closed under taking subsets.  Ascending vertex order fixes the
default orientation used by the boundary operators; every spectrum computed
downstream is independent of that choice, so no user-supplied orientations
are accepted.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidSimplexError, NotFoundError

Simplex = tuple[int, ...]


def as_simplex(vertices: Iterable[int]) -> Simplex:
    """Canonicalize a vertex collection into a sorted tuple of distinct ids."""
    vs = tuple(sorted({int(v) for v in vertices}))
    if not vs:
        raise InvalidSimplexError("a simplex needs at least one vertex")
    if vs[0] < 0:
        raise InvalidSimplexError(f"negative vertex id in {vs}")
    return vs


def faces(simplex: Simplex) -> list[Simplex]:
    """All codimension-1 faces, in removed-vertex order (i-th face drops vertex i)."""
    return [simplex[:i] + simplex[i + 1 :] for i in range(len(simplex))]


def orientation_sign(face: Sequence[int], simplex: Sequence[int]) -> int:
    """Sign of `face` in the boundary of `simplex`.

    Returns (-1)**i when `face` equals `simplex` with its i-th vertex (0-based,
    ascending order) removed, and 0 when `face` is not a codimension-1 face.
    """
    b = as_simplex(face)
    c = as_simplex(simplex)
    if len(b) + 1 != len(c):
        return 0
    missing = set(c) - set(b)
    if len(missing) != 1:
        return 0
    i = c.index(missing.pop())
    return -1 if i % 2 else 1


class SimplicialComplex:
    """Per-dimension registries of simplices, closed under inclusion."""

    __slots__ = ("_levels", "_index")

    def __init__(self, levels: Sequence[Iterable[Simplex]]):
        cleaned: list[tuple[Simplex, ...]] = []
        for n, level in enumerate(levels):
            simplices = tuple(sorted(set(level)))
            for s in simplices:
                if len(s) != n + 1:
                    raise InvalidSimplexError(f"{s} stored at dimension {n}")
            cleaned.append(simplices)
        while cleaned and not cleaned[-1]:
            cleaned.pop()
        self._levels = tuple(cleaned)
        self._index = tuple({s: i for i, s in enumerate(level)} for level in self._levels)
        self._check_closure()

    def _check_closure(self) -> None:
        for n in range(1, len(self._levels)):
            lower = self._index[n - 1]
            for s in self._levels[n]:
                for f in faces(s):
                    if f not in lower:
                        raise InvalidSimplexError(f"face {f} of {s} missing from complex")

    @property
    def dim(self) -> int:
        """Largest simplex dimension present; -1 for the empty complex."""
        return len(self._levels) - 1

    def simplices(self, n: int) -> tuple[Simplex, ...]:
        if 0 <= n <= self.dim:
            return self._levels[n]
        return ()

    def level_size(self, n: int) -> int:
        return len(self.simplices(n))

    def index_of(self, simplex: Iterable[int]) -> int:
        s = as_simplex(simplex)
        n = len(s) - 1
        if n > self.dim or s not in self._index[n]:
            raise NotFoundError(s)
        return self._index[n][s]

    def __contains__(self, simplex: Iterable[int]) -> bool:
        try:
            s = as_simplex(simplex)
        except InvalidSimplexError:
            return False
        n = len(s) - 1
        return n <= self.dim and s in self._index[n]

    def __iter__(self) -> Iterator[Simplex]:
        for level in self._levels:
            yield from level

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SimplicialComplex) and self._levels == other._levels

    def __hash__(self) -> int:
        return hash(self._levels)

    def __repr__(self) -> str:
        sizes = ", ".join(str(len(level)) for level in self._levels)
        return f"SimplicialComplex(level sizes: [{sizes}])"

    def cofaces(self, simplex: Iterable[int]) -> list[Simplex]:
        """All simplices one dimension up that contain `simplex` (which must be stored)."""
        s = as_simplex(simplex)
        self.index_of(s)  # membership check
        target = set(s)
        return [c for c in self.simplices(len(s)) if target <= set(c)]

    def topological_boundary(self, n: int) -> tuple[Simplex, ...]:
        """The n-simplices having exactly one coface."""
        counts = {s: 0 for s in self.simplices(n)}
        for c in self.simplices(n + 1):
            for f in faces(c):
                counts[f] += 1
        return tuple(s for s in self.simplices(n) if counts[s] == 1)

    def facets(self) -> list[Simplex]:
        """Inclusion-maximal simplices; a minimal generator list for the complex."""
        out: list[Simplex] = []
        for n in range(self.dim + 1):
            covered = {f for c in self.simplices(n + 1) for f in faces(c)}
            out.extend(s for s in self.simplices(n) if s not in covered)
        return out


def build_complex(generators: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Close a list of generating vertex sets under inclusion.

    Level ordering is lexicographic on sorted vertex tuples, so the result is
    identical for any permutation of the generators.
    """
    seen: set[Simplex] = set()
    max_dim = -1
    for gen in generators:
        g = as_simplex(gen)
        max_dim = max(max_dim, len(g) - 1)
        for k in range(1, len(g) + 1):
            seen.update(combinations(g, k))
    levels: list[list[Simplex]] = [[] for _ in range(max_dim + 1)]
    for s in seen:
        levels[len(s) - 1].append(s)
    return SimplicialComplex(levels)


def union_complexes(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    levels = [set(a.simplices(n)) | set(b.simplices(n)) for n in range(max(a.dim, b.dim) + 1)]
    return SimplicialComplex(levels)


def intersect_complexes(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    levels = [set(a.simplices(n)) & set(b.simplices(n)) for n in range(min(a.dim, b.dim) + 1)]
    return SimplicialComplex(levels)


def transfer_chain(
    src: SimplicialComplex, dst: SimplicialComplex, n: int, coefficients: np.ndarray
) -> np.ndarray:
    """Move an n-chain between complexes by simplex identity, zero-filling.

    Realizes both the restriction (big to small) and the inclusion (small to
    big) of chains: coefficients of simplices absent from `dst` are dropped,
    simplices absent from `src` get coefficient zero.
    """
    vec = np.asarray(coefficients, dtype=float)
    if vec.shape != (src.level_size(n),):
        raise InvalidSimplexError(
            f"chain has {vec.shape} coefficients, expected ({src.level_size(n)},)"
        )
    out = np.zeros(dst.level_size(n))
    for j, s in enumerate(dst.simplices(n)):
        if s in src:
            out[j] = vec[src.index_of(s)]
    return out


def complex_to_dict(X: SimplicialComplex) -> dict:
    return {"generators": [list(s) for s in X.facets()]}


def complex_from_dict(data: dict) -> SimplicialComplex:
    try:
        generators = data["generators"]
    except (KeyError, TypeError) as exc:
        raise InvalidSimplexError("complex JSON needs a 'generators' list") from exc
    return build_complex(generators)
