"""Shared corpus generators for the test suite."""

from __future__ import annotations

import numpy as np

from simplap import SimplicialComplex, build_complex
from simplap.weighted import WeightFunction


def random_complex(rng: np.random.Generator) -> SimplicialComplex:
    """Random small complex: at most 8 vertices, generators of up to 4 vertices
    (dimension at most 3), closed under inclusion by construction."""
    n_vertices = int(rng.integers(1, 9))
    n_generators = int(rng.integers(1, 7))
    generators = []
    for _ in range(n_generators):
        size = int(rng.integers(1, min(4, n_vertices) + 1))
        generators.append(rng.choice(n_vertices, size=size, replace=False).tolist())
    return build_complex(generators)


def random_complexes(count: int, seed: int) -> list[SimplicialComplex]:
    rng = np.random.default_rng(seed)
    return [random_complex(rng) for _ in range(count)]


def random_positive_weights(X: SimplicialComplex, rng: np.random.Generator) -> WeightFunction:
    """Arbitrary positive weights (no filtration structure)."""
    return WeightFunction(
        tuple(rng.uniform(0.2, 3.0, X.level_size(n)) for n in range(X.dim + 1))
    )


def random_filtration_weights(X: SimplicialComplex, rng: np.random.Generator) -> WeightFunction:
    """Random weights built top-down so every simplex weighs no more than any
    of its faces."""
    from simplap.complex import faces

    vectors = [rng.uniform(0.5, 2.0, X.level_size(0))]
    for n in range(1, X.dim + 1):
        below = vectors[n - 1]
        w = np.empty(X.level_size(n))
        for k, c in enumerate(X.simplices(n)):
            cap = min(below[X.index_of(f)] for f in faces(c))
            w[k] = cap * rng.uniform(0.3, 1.0)
        vectors.append(w)
    return WeightFunction(tuple(vectors))


def paper_graph() -> SimplicialComplex:
    """Complete graph on four vertices: three independent 1-cycles."""
    return build_complex([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def paper_complex_with_face() -> SimplicialComplex:
    """The same graph with one triangle filled, closing one of the holes."""
    return build_complex([(0, 1, 2), (0, 3), (1, 3), (2, 3)])
