"""Executable checks for the small-eigenvalue bound on glued complexes, plus
the canonical demo configurations (three touching rings; annulus plus filler
disc).

The bound being exercised: glue a low-weight disc into a unit-weight annulus
along its inner cycle and the union loses its combinatorial hole, but the
first weighted Laplacian keeps an eigenvalue no larger than (n+1) times the
weight ratio between the filler interior and the gluing cycle.  Instances are
validated against all five of their stated conditions before any bound is
asserted; nothing is assumed from the construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chains import homology_dimension
from .complex import SimplicialComplex, build_complex
from .errors import ConstructionError, ParameterError
from .spectral import DEFAULT_ZERO_TOL, smallest_nonzero_eigenpairs
from .weighted import (
    WeightedComplex,
    check_filtration,
    weight_function,
    weighted_intersection,
    weighted_laplacian,
    weighted_union,
)

# ring sizes differ on purpose: equal rings give three nearly-degenerate hole
# modes whose eigenvectors mix arbitrarily, while distinct radii separate the
# eigenvalues and localize each eigenvector on its own ring
RING_RADII = np.array([0.9, 1.0, 1.1])
# centers sit a 5% margin beyond rim contact: the rings read as touching but
# sensors from neighbouring rings cannot nearly collide at the tangency points
# (which would force a huge rescale and push the hole modes into numerical zero)
_RING_MARGIN = 1.05


def _ring_centers() -> np.ndarray:
    d01 = _RING_MARGIN * (RING_RADII[0] + RING_RADII[1])
    d02 = _RING_MARGIN * (RING_RADII[0] + RING_RADII[2])
    d12 = _RING_MARGIN * (RING_RADII[1] + RING_RADII[2])
    x2 = (d01**2 + d02**2 - d12**2) / (2.0 * d01)
    y2 = np.sqrt(d02**2 - x2**2)
    return np.array([[0.0, 0.0], [d01, 0.0], [x2, y2]])


RING_CENTERS = _ring_centers()


@dataclass(frozen=True)
class TheoremInstance:
    """An (outer complex, filler, epsilon) triple at homology dimension n."""

    outer: WeightedComplex
    filler: WeightedComplex
    epsilon: float
    n: int = 1


@dataclass(frozen=True)
class BoundCheck:
    lambda_min_nonzero: float
    bound: float
    holds: bool


def annulus_complex(m: int, offset: int = 0) -> SimplicialComplex:
    """Triangulated annulus: inner cycle ids offset..offset+m-1, outer cycle
    the next m ids, two triangles per inner edge."""
    if m < 3:
        raise ParameterError("cycle length must be >= 3")
    tris = []
    for i in range(m):
        j = (i + 1) % m
        a_i, a_j = offset + i, offset + j
        b_i, b_j = offset + m + i, offset + m + j
        tris.append((a_i, a_j, b_i))
        tris.append((a_j, b_i, b_j))
    return build_complex(tris)


def disc_complex(m: int, offset: int = 0) -> SimplicialComplex:
    """Fan-triangulated disc over the cycle offset..offset+m-1 with a fresh
    center vertex at offset+2m (chosen to avoid annulus ids)."""
    if m < 3:
        raise ParameterError("cycle length must be >= 3")
    center = offset + 2 * m
    return build_complex(
        [(center, offset + i, offset + (i + 1) % m) for i in range(m)]
    )


def _annulus_weighted(m: int, offset: int = 0) -> WeightedComplex:
    X = annulus_complex(m, offset)
    return WeightedComplex(
        X, weight_function([np.ones(X.level_size(n)) for n in range(3)])
    )


def _disc_weighted(m: int, epsilon: float, offset: int = 0) -> WeightedComplex:
    """Filler disc: unit weights on the shared cycle, epsilon on the interior
    vertex and spokes, epsilon**2 on the triangles (keeps the filtration
    condition for epsilon <= 1)."""
    Y = disc_complex(m, offset)
    center = offset + 2 * m
    w0 = np.array([epsilon if s == (center,) else 1.0 for s in Y.simplices(0)])
    w1 = np.array([epsilon if center in s else 1.0 for s in Y.simplices(1)])
    w2 = np.full(Y.level_size(2), epsilon**2)
    return WeightedComplex(Y, weight_function([w0, w1, w2]))


def instance_conditions(inst: TheoremInstance) -> dict[str, bool]:
    """Evaluate the five gluing conditions; all must hold for the bound."""
    X, Y, n = inst.outer, inst.filler, inst.n
    union = weighted_union(X, Y)
    overlap = weighted_intersection(X, Y)
    filtration = check_filtration(X) and check_filtration(Y)
    filler_trivial = homology_dimension(Y.complex, n) == 0
    hole_filled = homology_dimension(union.complex, n) == homology_dimension(X.complex, n) - 1
    glued_along_boundary = overlap.complex == build_complex(
        Y.complex.topological_boundary(n)
    )
    interior = [
        s
        for level in range(Y.complex.dim + 1)
        for s in Y.complex.simplices(level)
        if s not in X.complex
    ]
    shared = [
        s
        for level in range(overlap.complex.dim + 1)
        for s in overlap.complex.simplices(level)
    ]
    if interior and shared:
        ratio = max(Y.weight_of(s) for s in interior) / min(X.weight_of(s) for s in shared)
        weight_ratio = bool(ratio <= inst.epsilon * (1.0 + 1e-12))
    else:
        weight_ratio = False
    return {
        "filtration": filtration,
        "filler_trivial_homology": filler_trivial,
        "hole_filled": hole_filled,
        "glued_along_boundary": glued_along_boundary,
        "weight_ratio": weight_ratio,
    }


def _require_conditions(inst: TheoremInstance) -> None:
    conditions = instance_conditions(inst)
    failed = [name for name, ok in conditions.items() if not ok]
    if failed:
        raise ConstructionError(f"instance violates conditions: {', '.join(failed)}")


def annulus_disc_instance(m: int, epsilon: float, offset: int = 0) -> TheoremInstance:
    """Unit-weight annulus with its hole filled by an epsilon-weight disc."""
    if epsilon <= 0:
        raise ParameterError("epsilon must be positive")
    inst = TheoremInstance(
        _annulus_weighted(m, offset), _disc_weighted(m, epsilon, offset), epsilon, 1
    )
    _require_conditions(inst)
    return inst


def verify_eigenvalue_bound(
    inst: TheoremInstance, zero_tol: float = DEFAULT_ZERO_TOL
) -> BoundCheck:
    """Smallest nonzero eigenvalue of the union's weighted Laplacian versus
    epsilon * (n + 1)."""
    _require_conditions(inst)
    union = weighted_union(inst.outer, inst.filler)
    L = weighted_laplacian(union, inst.n)
    lam = smallest_nonzero_eigenpairs(L, 1, zero_tol)[0][0]
    bound = inst.epsilon * (inst.n + 1)
    return BoundCheck(lam, bound, bool(lam <= bound + 1e-10))


def multi_disc_instance(
    k: int, epsilons, m: int = 6
) -> tuple[list[TheoremInstance], WeightedComplex]:
    """k disjoint annuli, each hole filled by its own small-weight disc.

    Returns one instance per successive gluing step (outer complex grows by
    one filler each time) together with the fully glued complex.
    """
    eps = [float(e) for e in np.atleast_1d(epsilons)]
    if k < 1:
        raise ParameterError("k must be >= 1")
    if len(eps) != k:
        raise ParameterError(f"need {k} epsilon values, got {len(eps)}")
    block = 2 * m + 1
    annuli = [_annulus_weighted(m, i * block) for i in range(k)]
    fillers = [_disc_weighted(m, eps[i], i * block) for i in range(k)]
    outer = annuli[0]
    for extra in annuli[1:]:
        outer = weighted_union(outer, extra)
    instances = []
    current = outer
    for i in range(k):
        inst = TheoremInstance(current, fillers[i], eps[i], 1)
        _require_conditions(inst)
        instances.append(inst)
        current = weighted_union(current, fillers[i])
    return instances, current


def three_rings_configuration(n_sensors: int, seed: int) -> np.ndarray:
    """Sensors along three touching circular rings with small radial and
    angular jitter; deterministic for a given seed.

    The Delaunay complex of the result has no combinatorial hole, but the
    three ring interiors are spanned by long (hence low-weight) edges, which
    is what the small-eigenvalue analysis is meant to pick out.
    """
    if n_sensors < 30:
        raise ParameterError("need at least 30 sensors for three rings")
    rng = np.random.default_rng(seed)
    # sensor counts proportional to circumference keep the rim spacing uniform
    shares = RING_RADII / RING_RADII.sum()
    counts = [int(np.floor(n_sensors * share)) for share in shares]
    for i in range(n_sensors - sum(counts)):
        counts[i % 3] += 1
    points = []
    for ring, (center, count) in enumerate(zip(RING_CENTERS, counts)):
        spacing = 2.0 * np.pi / count
        base = ring * spacing / 3.0  # stagger rings so touch points do not collide
        angles = base + spacing * np.arange(count)
        angles = angles + rng.normal(0.0, 0.1 * spacing, count)
        radii = RING_RADII[ring] * (1.0 + rng.normal(0.0, 0.01, count))
        points.append(
            center + np.column_stack((radii * np.cos(angles), radii * np.sin(angles)))
        )
    return np.vstack(points)


def ring_membership(points: np.ndarray, radius_fraction: float = 1.1) -> np.ndarray:
    """Ring index (0..2) for each point's nearest ring center, used to label
    edges when reporting eigenvector localization; -1 when outside every ring
    at the given fraction of that ring's radius.  The default fraction covers
    the rim itself: the hole-circulation modes run along the rim edges."""
    pts = np.asarray(points, dtype=float)
    dist = np.linalg.norm(pts[:, None, :] - RING_CENTERS[None, :, :], axis=2)
    nearest = np.argmin(dist, axis=1)
    inside = dist[np.arange(len(pts)), nearest] <= radius_fraction * RING_RADII[nearest]
    return np.where(inside, nearest, -1)
