"""Planar Delaunay complexes with inverse-length weights.

Every triangle of the triangulation is filled by a 2-simplex, so the complex
is pure 2-dimensional and contractible (no combinatorial holes).  Edge weights
are inverse Euclidean lengths; a triangle's weight is the product of its three
edge weights; a vertex weight is the largest weight among its incident edges.

Weights must not grow with dimension (the filtration condition), and a product
of three factors only stays below each factor when every factor is below one.
normalize_scale therefore rescales the embedding so the shortest Delaunay edge
is longer than one, pinning the largest edge weight at MAX_EDGE_WEIGHT, which
keeps the condition satisfied with a strict margin under floating point.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np
from scipy.spatial import Delaunay as _SciPyDelaunay
from scipy.spatial import QhullError

from .complex import SimplicialComplex, build_complex
from .errors import DegenerateInputError
from .weighted import WeightedComplex, WeightFunction

MAX_EDGE_WEIGHT = 0.9
COCIRCULAR_TOL = 1e-12


def check_points(points) -> np.ndarray:
    """Validate and return an (N, 2) float array of distinct finite points."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DegenerateInputError(f"expected (N, 2) planar points, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise DegenerateInputError("points contain non-finite coordinates")
    if pts.shape[0] < 3:
        raise DegenerateInputError("need at least 3 points to triangulate")
    if len({(x, y) for x, y in pts}) != len(pts):
        raise DegenerateInputError("points must be pairwise distinct")
    return pts


def orient2d(pa, pb, pc) -> float:
    """Twice the signed area of triangle (pa, pb, pc); positive = counterclockwise."""
    return (pa[0] - pc[0]) * (pb[1] - pc[1]) - (pa[1] - pc[1]) * (pb[0] - pc[0])


def incircle(pa, pb, pc, pd) -> float:
    """Positive when pd lies inside the circle through pa, pb, pc (ccw order)."""
    adx, ady = pa[0] - pd[0], pa[1] - pd[1]
    bdx, bdy = pb[0] - pd[0], pb[1] - pd[1]
    cdx, cdy = pc[0] - pd[0], pc[1] - pd[1]
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    return (
        alift * (bdx * cdy - cdx * bdy)
        + blift * (cdx * ady - adx * cdy)
        + clift * (adx * bdy - bdx * ady)
    )


def _incircle_abs(pts, tri, d) -> float:
    a, b, c = tri
    if orient2d(pts[a], pts[b], pts[c]) < 0:
        b, c = c, b
    return incircle(pts[a], pts[b], pts[c], pts[d])


def _cocircular_threshold(pts) -> float:
    extent = max(1.0, float(np.max(pts.max(axis=0) - pts.min(axis=0))))
    return COCIRCULAR_TOL * extent**4


def _canonicalize_cocircular(pts: np.ndarray, triangles: set[tuple[int, int, int]]):
    """Resolve exactly-cocircular diagonal ties toward the lexicographically
    smaller diagonal, so the triangulation is deterministic regardless of the
    underlying solver's choices."""
    thr = _cocircular_threshold(pts)
    for _ in range(len(triangles) + 1):
        edge_tris: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
        for t in triangles:
            for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
                edge_tris.setdefault(e, []).append(t)
        flipped = False
        for e in sorted(edge_tris):
            pair = edge_tris[e]
            if len(pair) != 2:
                continue
            t1, t2 = sorted(pair)
            a = next(v for v in t1 if v not in e)
            b = next(v for v in t2 if v not in e)
            alt = (min(a, b), max(a, b))
            if alt >= e:
                continue
            p, q = e
            # the flip is only valid when the quad is strictly convex
            if orient2d(pts[p], pts[q], pts[a]) * orient2d(pts[p], pts[q], pts[b]) >= 0:
                continue
            if orient2d(pts[a], pts[b], pts[p]) * orient2d(pts[a], pts[b], pts[q]) >= 0:
                continue
            if abs(_incircle_abs(pts, t1, b)) > thr:
                continue
            triangles.discard(t1)
            triangles.discard(t2)
            triangles.add(tuple(sorted((a, b, p))))
            triangles.add(tuple(sorted((a, b, q))))
            flipped = True
            break
        if not flipped:
            break
    return triangles


def delaunay(points) -> SimplicialComplex:
    """Delaunay triangulation as a 2-complex with every triangle filled.

    Cocircular ties are broken toward the lexicographically smallest diagonal.
    """
    pts = check_points(points)
    try:
        tri = _SciPyDelaunay(pts)
    except QhullError as exc:
        raise DegenerateInputError(f"triangulation failed: {exc}") from exc
    if tri.coplanar.size:
        raise DegenerateInputError("triangulation dropped nearly-coincident points")
    triangles = {tuple(sorted(int(v) for v in simplex)) for simplex in tri.simplices}
    used = {v for t in triangles for v in t}
    if used != set(range(len(pts))):
        raise DegenerateInputError("triangulation does not cover every input point")
    triangles = _canonicalize_cocircular(pts, triangles)
    return build_complex(triangles)


def edge_lengths(points: np.ndarray, X: SimplicialComplex) -> np.ndarray:
    out = np.empty(X.level_size(1))
    for k, (u, v) in enumerate(X.simplices(1)):
        out[k] = float(np.linalg.norm(points[u] - points[v]))
    return out


def geometric_weights(points, X: SimplicialComplex) -> WeightFunction:
    """Inverse-length edge weights, product triangle weights, max-incident vertex weights.

    The vertex rule is the minimal choice keeping the filtration condition at
    dimension one; it does not enter the first up-Laplacian.
    """
    pts = np.asarray(points, dtype=float)
    if X.dim > 2:
        raise DegenerateInputError("geometric weights are defined for 2-complexes only")
    lengths = edge_lengths(pts, X)
    if np.any(lengths <= 0.0):
        raise DegenerateInputError("zero-length edge")
    w1 = 1.0 / lengths
    w2 = np.empty(X.level_size(2))
    for k, t in enumerate(X.simplices(2)):
        u, v, z = t
        w2[k] = (
            w1[X.index_of((u, v))] * w1[X.index_of((u, z))] * w1[X.index_of((v, z))]
        )
    w0 = np.zeros(X.level_size(0))
    for k, (u, v) in enumerate(X.simplices(1)):
        for vertex in (u, v):
            i = X.index_of((vertex,))
            w0[i] = max(w0[i], w1[k])
    w0[w0 == 0.0] = 1.0  # isolated vertices face no filtration constraint
    vectors = [w0, w1, w2][: X.dim + 1]
    return WeightFunction(tuple(vectors))


def normalize_scale(points) -> np.ndarray:
    """Uniformly rescale (about the centroid) so the shortest Delaunay edge has
    length 1 / MAX_EDGE_WEIGHT; inputs already satisfying that are returned
    unchanged.  Relative geometry, and hence the triangulation, is preserved."""
    pts = check_points(points)
    X = delaunay(pts)
    shortest = float(edge_lengths(pts, X).min())
    target = 1.0 / MAX_EDGE_WEIGHT
    if shortest >= target:
        return pts.copy()
    scale = target / shortest
    centroid = pts.mean(axis=0)
    return centroid + (pts - centroid) * scale


def build_weighted_complex(points) -> WeightedComplex:
    """Normalize, triangulate, and weight a sensor configuration.

    The result satisfies the filtration condition by construction.
    """
    pts = normalize_scale(points)
    X = delaunay(pts)
    return WeightedComplex(X, geometric_weights(pts, X))


def circumcircle_violations(points, X: SimplicialComplex, tol: float = 1e-12) -> int:
    """Brute-force check of the empty-circumcircle property; returns the number
    of (triangle, point) pairs with the point strictly inside."""
    pts = np.asarray(points, dtype=float)
    thr = tol * max(1.0, float(np.max(pts.max(axis=0) - pts.min(axis=0)))) ** 4
    count = 0
    for t in X.simplices(2):
        for d in range(len(pts)):
            if d in t:
                continue
            if _incircle_abs(pts, t, d) > thr:
                count += 1
    return count


def load_points(path) -> np.ndarray:
    """Read sensor points from CSV (header id,x,y) or JSON ({"points": [[x, y], ...]})."""
    p = Path(path)
    text = p.read_text()
    if p.suffix.lower() == ".json":
        data = json.loads(text)
        try:
            return np.asarray(data["points"], dtype=float).reshape(-1, 2)
        except (KeyError, TypeError, ValueError) as exc:
            raise DegenerateInputError(f"bad points JSON in {p}: {exc}") from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows or [c.strip() for c in rows[0]] != ["id", "x", "y"]:
        raise DegenerateInputError(f"{p}: expected CSV header 'id,x,y'")
    try:
        pts = [(float(r[1]), float(r[2])) for r in rows[1:] if r]
    except (IndexError, ValueError) as exc:
        raise DegenerateInputError(f"bad CSV row in {p}: {exc}") from exc
    return np.asarray(pts, dtype=float).reshape(-1, 2)


def save_points_csv(path, points) -> None:
    pts = np.asarray(points, dtype=float)
    lines = ["id,x,y"]
    lines += [f"{i},{float(x)!r},{float(y)!r}" for i, (x, y) in enumerate(pts)]
    Path(path).write_text("\n".join(lines) + "\n")
