"""Eigenvalue gradients through the Delaunay weight pipeline, and the two
position-update loops built on them.

Hole repair runs gradient ASCENT on the smallest nonzero eigenvalue of the
first weighted up-Laplacian (raising the eigenvalue closes the almost-hole);
caging runs gradient DESCENT on the k-th smallest nonzero eigenvalue to carve
k almost-holes.  Within a step the triangulation combinatorics are held fixed
and the objective is differentiated through edge lengths only; between steps
the complex is rebuilt from scratch (normalize, Delaunay, weights), so
combinatorial flips happen between steps and are flagged in the trajectory.

Eigenvalues are only piecewise smooth in the weights: near a degeneracy the
gradient is replaced by the average over the eigenspace basis returned by the
solver, and the iteration is flagged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .complex import SimplicialComplex
from .errors import (
    DegenerateInputError,
    FlipDetectedError,
    MultiplicityError,
    ParameterError,
)
from .geometry import check_points, delaunay, geometric_weights, normalize_scale
from .spectral import DEFAULT_ZERO_TOL, Spectrum, canonical_sign, eig_sym
from .errors import InsufficientSpectrumError
from .weighted import WeightedComplex, weighted_laplacian, weighted_up_laplacian

GAP_REL_TOL = 1e-6
DEFAULT_STEP_SIZE = 0.25
MAX_HALVINGS = 20
MAX_DOUBLINGS = 2


@dataclass(frozen=True)
class IterationRecord:
    step: int
    objective: float
    positions: np.ndarray
    accepted: bool
    step_size: float
    combinatorics_changed: bool
    degenerate: bool = False


@dataclass
class Trajectory:
    records: list[IterationRecord] = field(default_factory=list)

    def objectives(self) -> np.ndarray:
        return np.array([r.objective for r in self.records])

    @property
    def initial(self) -> IterationRecord:
        return self.records[0]

    @property
    def final(self) -> IterationRecord:
        return self.records[-1]

    def to_jsonl(self) -> str:
        lines = []
        for r in self.records:
            lines.append(
                json.dumps(
                    {
                        "step": r.step,
                        "lambda": r.objective,
                        "positions": [[float(x), float(y)] for x, y in r.positions],
                        "accepted": r.accepted,
                        "step_size": r.step_size,
                        "combinatorics_changed": r.combinatorics_changed,
                        "degenerate": r.degenerate,
                    },
                    sort_keys=True,
                )
            )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class StateEval:
    """Objective value at one configuration, with its eigenvector cluster."""

    objective: float
    vector: np.ndarray
    cluster_vectors: list[np.ndarray]
    spectrum: Spectrum
    degenerate: bool
    wc: WeightedComplex


def edge_laplacian(wc: WeightedComplex, full: bool = False):
    """The operator the dynamics acts on: the first up-Laplacian, or the full
    first Laplacian when `full` is set."""
    return weighted_laplacian(wc, 1) if full else weighted_up_laplacian(wc, 1)


def evaluate_state(
    points: np.ndarray,
    X: SimplicialComplex,
    k: int = 1,
    *,
    full: bool = False,
    zero_tol: float = DEFAULT_ZERO_TOL,
    gap_tol: float = GAP_REL_TOL,
) -> StateEval:
    """k-th smallest nonzero eigenvalue of the edge Laplacian at fixed combinatorics."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    wc = WeightedComplex(X, geometric_weights(points, X))
    spec = eig_sym(edge_laplacian(wc, full), zero_tol)
    idx = spec.nonzero_indices()
    if idx.size < k:
        raise InsufficientSpectrumError(
            f"requested eigenvalue {k}, only {idx.size} nonzero available"
        )
    target = int(idx[k - 1])
    lam = float(spec.eigenvalues[target])
    scale = max(1.0, float(spec.eigenvalues[-1]))
    # degeneracy only matters among the nonzero eigenvalues: the kernel has
    # fixed combinatorial dimension and cannot cross the tracked branch
    cluster = [int(i) for i in idx if abs(spec.eigenvalues[i] - lam) <= gap_tol * scale]
    vectors = [canonical_sign(spec.eigenvectors[:, i]) for i in cluster]
    tracked = canonical_sign(spec.eigenvectors[:, target])
    return StateEval(lam, tracked, vectors, spec, len(cluster) > 1, wc)


def _up_quadratic_weight_gradient(wc: WeightedComplex, v: np.ndarray) -> np.ndarray:
    """d(v^T L_up v)/d(edge weights), with triangle weights chained through the
    product rule.  Uses the per-triangle collapsed form of the quadratic:
    sum over triangles of (triangle weight)^2 * (signed sum of v_e / w_e)^2."""
    X = wc.complex
    w1 = wc.weight_vector(1)
    w2 = wc.weight_vector(2)
    u = v / w1
    grad = np.zeros_like(w1)
    from .complex import faces as _faces
    from .complex import orientation_sign

    for t_idx, t in enumerate(X.simplices(2)):
        edge_ids = []
        signs = []
        for i, f in enumerate(_faces(t)):
            edge_ids.append(X.index_of(f))
            signs.append(-1 if i % 2 else 1)
        g = sum(s * u[e] for s, e in zip(signs, edge_ids))
        w2sq = w2[t_idx] ** 2
        for s, e in zip(signs, edge_ids):
            grad[e] += -2.0 * v[e] / w1[e] ** 2 * w2sq * g * s  # direct
            grad[e] += 2.0 / w1[e] * w2sq * g * g  # through the product rule
    return grad


def _down_quadratic_weight_gradient(wc: WeightedComplex, v: np.ndarray) -> np.ndarray:
    """d(v^T L_down v)/d(edge weights); vertex weights (max of incident edge
    weights) are chained through their active edge."""
    X = wc.complex
    w1 = wc.weight_vector(1)
    w0 = wc.weight_vector(0)
    n_vertices = X.level_size(0)
    h = np.zeros(n_vertices)
    incident: list[list[tuple[int, int]]] = [[] for _ in range(n_vertices)]
    for e_idx, (a, b) in enumerate(X.simplices(1)):
        ia, ib = X.index_of((a,)), X.index_of((b,))
        h[ia] -= w1[e_idx] * v[e_idx]
        h[ib] += w1[e_idx] * v[e_idx]
        incident[ia].append((e_idx, -1))
        incident[ib].append((e_idx, +1))
    h /= w0
    grad = np.zeros_like(w1)
    for vert in range(n_vertices):
        if not incident[vert]:
            continue
        for e_idx, sign in incident[vert]:
            grad[e_idx] += 2.0 * h[vert] * sign * v[e_idx] / w0[vert]
        active = max(incident[vert], key=lambda item: w1[item[0]])[0]
        if abs(w1[active] - w0[vert]) <= 1e-12 * w0[vert]:
            grad[active] += -2.0 * h[vert] ** 2 / w0[vert]
    return grad


def eigenvalue_position_gradient(
    points: np.ndarray,
    wc: WeightedComplex,
    pair: tuple[float, np.ndarray],
    *,
    full: bool = False,
    eigenvalues: np.ndarray | None = None,
    gap_tol: float = GAP_REL_TOL,
) -> np.ndarray:
    """Gradient of a simple eigenvalue of the edge Laplacian w.r.t. positions.

    For a unit eigenvector v the derivative of the eigenvalue equals the
    derivative of the quadratic form v^T L v at fixed v; that is differentiated
    through edge weights (inverse lengths) and then through the endpoints.
    When `eigenvalues` is supplied the eigengap is checked first and a
    MultiplicityError raised if the eigenvalue is too close to a neighbour.
    """
    lam, v = pair
    pts = np.asarray(points, dtype=float)
    if eigenvalues is not None:
        vals = np.asarray(eigenvalues, dtype=float)
        dist = np.sort(np.abs(vals - lam))
        gap = dist[1] if dist.size > 1 else np.inf
        if gap < gap_tol * max(1.0, float(np.max(np.abs(vals)))):
            raise MultiplicityError(f"eigengap {gap:.3e} below threshold")
    X = wc.complex
    w1 = wc.weight_vector(1)
    dw1 = _up_quadratic_weight_gradient(wc, v)
    if full:
        dw1 = dw1 + _down_quadratic_weight_gradient(wc, v)
    grad = np.zeros_like(pts)
    for e_idx, (a, b) in enumerate(X.simplices(1)):
        diff = pts[a] - pts[b]
        length = 1.0 / w1[e_idx]
        dlam_dlength = dw1[e_idx] * (-(w1[e_idx] ** 2))
        direction = diff / length
        grad[a] += dlam_dlength * direction
        grad[b] -= dlam_dlength * direction
    return grad


def fixed_complex_objective(
    X: SimplicialComplex,
    k: int = 1,
    *,
    full: bool = False,
    zero_tol: float = DEFAULT_ZERO_TOL,
) -> Callable[[np.ndarray], float]:
    """Objective callable for finite differencing: weights recomputed from the
    perturbed points, triangulation combinatorics frozen."""

    def objective(points: np.ndarray) -> float:
        return evaluate_state(points, X, k, full=full, zero_tol=zero_tol).objective

    return objective


def finite_difference_gradient(
    points: np.ndarray,
    objective: Callable[[np.ndarray], float],
    h: float,
    *,
    flip_complex: SimplicialComplex | None = None,
) -> np.ndarray:
    """Central-difference gradient of a scalar objective over point coordinates.

    When `flip_complex` is given, each probe retriangulates and raises
    FlipDetectedError if the combinatorics differ from it (the caller should
    shrink h).
    """
    if h <= 0:
        raise ParameterError("h must be positive")
    pts = np.asarray(points, dtype=float)
    grad = np.zeros_like(pts)
    for i in range(pts.shape[0]):
        for c in range(2):
            plus = pts.copy()
            minus = pts.copy()
            plus[i, c] += h
            minus[i, c] -= h
            if flip_complex is not None:
                for probe in (plus, minus):
                    probe_complex = delaunay(probe)
                    if probe_complex != flip_complex:
                        raise FlipDetectedError(
                            f"triangulation changed within +-{h} of point {i}"
                        )
            grad[i, c] = (objective(plus) - objective(minus)) / (2.0 * h)
    return grad


def _state_gradient(points: np.ndarray, state: StateEval, full: bool) -> np.ndarray:
    """Gradient of the tracked eigenvalue branch.

    Near a degeneracy this is a subgradient of the piecewise-smooth objective;
    the tracked branch is used rather than an average over the cluster because
    averaging demonstrably trades the tracked extreme away against the rest of
    the cluster (the line search then stalls).  The iteration stays flagged.
    """
    return eigenvalue_position_gradient(
        points, state.wc, (state.objective, state.vector), full=full
    )


def _levels_key(X: SimplicialComplex):
    return (X.simplices(1), X.simplices(2))


def _prepare(points) -> tuple[np.ndarray, SimplicialComplex]:
    """Triangulate and rescale in one pass; the triangulation survives the
    uniform rescale, so one Delaunay call covers both."""
    from .geometry import MAX_EDGE_WEIGHT, edge_lengths

    pts = check_points(points)
    X = delaunay(pts)
    shortest = float(edge_lengths(pts, X).min())
    target = 1.0 / MAX_EDGE_WEIGHT
    if shortest < target:
        centroid = pts.mean(axis=0)
        pts = centroid + (pts - centroid) * (target / shortest)
    return pts, X


MIN_BASE_STEP = 1e-10
MAX_BASE_STEP = 1.0


def _run_dynamics(
    points,
    steps: int,
    step_size: float,
    line_search: bool,
    k: int,
    ascend: bool,
    full: bool,
    zero_tol: float,
) -> Trajectory:
    if steps < 0:
        raise ParameterError("steps must be >= 0")
    if step_size <= 0:
        raise ParameterError("step_size must be positive")
    if k < 1:
        raise ParameterError("k must be >= 1")
    pts, X = _prepare(points)
    state = evaluate_state(pts, X, k, full=full, zero_tol=zero_tol)
    traj = Trajectory(
        [IterationRecord(0, state.objective, pts.copy(), True, 0.0, False, state.degenerate)]
    )
    sign = 1.0 if ascend else -1.0
    base_step = step_size
    prev_key = _levels_key(X)
    stalled = False
    for step in range(1, steps + 1):
        if stalled:
            # a rejected iteration at the base scale recurs identically, so
            # the remaining records can be emitted without re-evaluation
            traj.records.append(
                IterationRecord(
                    step, state.objective, pts.copy(), False, 0.0, False, state.degenerate
                )
            )
            continue
        ladder_start = base_step
        gradient = _state_gradient(pts, state, full)
        top = float(np.max(np.abs(gradient)))
        if top > 0.0:
            # step sizes are displacements: the update direction is the
            # max-normalized gradient, which keeps the loop usable across the
            # many orders of magnitude the eigenvalue scale can span
            direction = sign * gradient / top
        else:
            direction = np.zeros_like(gradient)
        accepted = False
        used = 0.0
        new_pts, new_X, new_state = pts, X, state

        def _try(eta):
            try:
                cand, cand_X = _prepare(pts + eta * direction)
                cand_state = evaluate_state(cand, cand_X, k, full=full, zero_tol=zero_tol)
            except (DegenerateInputError, InsufficientSpectrumError):
                return None
            return cand, cand_X, cand_state

        eta = base_step
        tries = MAX_HALVINGS + 1 if line_search else 1
        flip_fallback = None
        if top > 0.0:
            for attempt in range(tries):
                if np.array_equal(pts + eta * direction, pts):
                    break  # below float resolution; a tie here is not progress
                result = _try(eta)
                if result is None:
                    eta /= 2.0
                    continue
                gain = sign * (result[2].objective - state.objective)
                # strict improvement required: exact ties are no-ops and
                # accepting them lets the loop idle at vanishing step sizes
                if not line_search or gain > 0.0:
                    accepted = True
                    used = eta
                    new_pts, new_X, new_state = result
                    if line_search and attempt == 0:
                        # greedy upward probe: a larger step often pays off and
                        # keeps the loop from creeping when the base is small
                        for _ in range(MAX_DOUBLINGS):
                            bigger = _try(2.0 * used)
                            if bigger is None:
                                break
                            if sign * (bigger[2].objective - new_state.objective) < 0.0:
                                break
                            used *= 2.0
                            new_pts, new_X, new_state = bigger
                    break
                if (
                    flip_fallback is None
                    and result[1] != X
                    and eta >= step_size / 256.0
                ):
                    flip_fallback = (eta, result)
                eta /= 2.0
        if not accepted and flip_fallback is not None:
            # the objective is discontinuous across triangulation changes and a
            # step can be blocked by a flip boundary in every monotone
            # direction; crossing it (by a non-negligible displacement) is the
            # only way forward, and such steps are exactly the flagged
            # combinatorics changes in the trajectory
            accepted = True
            used, (new_pts, new_X, new_state) = flip_fallback
        if accepted:
            if line_search:
                # exemplar-style adaptation: grow after success, so the loop
                # recovers quickly from conservative halvings
                base_step = min(max(2.0 * used, MIN_BASE_STEP), MAX_BASE_STEP)
            pts, X, state = new_pts, new_X, new_state
        elif line_search:
            # the ladder already explored everything below base_step, so a
            # rejected iteration restarts from the configured scale; if it was
            # already there, nothing can change and the run has stalled
            stalled = ladder_start == step_size
            base_step = step_size
        key = _levels_key(X)
        traj.records.append(
            IterationRecord(
                step,
                state.objective,
                pts.copy(),
                accepted,
                used,
                key != prev_key,
                state.degenerate,
            )
        )
        prev_key = key
    return traj


def repair_run(
    points,
    steps: int,
    step_size: float = DEFAULT_STEP_SIZE,
    line_search: bool = True,
    *,
    full: bool = False,
    zero_tol: float = DEFAULT_ZERO_TOL,
) -> Trajectory:
    """Coverage repair: ascent on the smallest nonzero eigenvalue of the first
    up-Laplacian, re-triangulating every iteration."""
    return _run_dynamics(points, steps, step_size, line_search, 1, True, full, zero_tol)


def caging_run(
    points,
    k: int,
    steps: int,
    step_size: float = DEFAULT_STEP_SIZE,
    line_search: bool = True,
    *,
    full: bool = False,
    zero_tol: float = DEFAULT_ZERO_TOL,
) -> Trajectory:
    """Hole creation: descent on the k-th smallest nonzero eigenvalue."""
    return _run_dynamics(points, steps, step_size, line_search, k, False, full, zero_tol)
