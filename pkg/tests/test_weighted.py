import numpy as np
import pytest
from scipy import sparse

from simplap import (
    annulus_disc_instance,
    boundary_matrix,
    build_complex,
    check_filtration,
    eig_sym,
    homology_dimension,
    laplacian,
    norm_bound,
    nullity,
    operator_norm,
    smallest_nonzero_eigenpairs,
    transfer_chain,
    unit_weights,
    up_laplacian_entry,
    weighted_boundary,
    weighted_complex,
    weighted_down_laplacian,
    weighted_from_dict,
    weighted_intersection,
    weighted_laplacian,
    weighted_laplacian_sandwich,
    weighted_to_dict,
    weighted_union,
    weighted_up_laplacian,
)
from simplap.errors import IncompatibleWeightsError, InvalidWeightError
from simplap.weighted import WeightedComplex

from util import random_complexes, random_filtration_weights, random_positive_weights


def _random_weighted(X, rng, filtration=False):
    w = random_filtration_weights(X, rng) if filtration else random_positive_weights(X, rng)
    return WeightedComplex(X, w)


def test_weight_validation():
    tri = build_complex([(0, 1, 2)])
    with pytest.raises(InvalidWeightError):
        weighted_complex(tri, [[1, 1, 1], [1, -2, 1], [1]])
    with pytest.raises(InvalidWeightError):
        weighted_complex(tri, [[1, 1, 1], [1, 1], [1]])


def test_filtration_examples():
    tri = build_complex([(0, 1, 2)])
    assert check_filtration(WeightedComplex(tri, unit_weights(tri)))
    heavy_face = weighted_complex(tri, [[1, 1, 1], [1, 1, 1], [2]])
    assert not check_filtration(heavy_face)


def test_filtration_random_construction():
    rng = np.random.default_rng(3)
    for X in random_complexes(20, seed=5):
        assert check_filtration(_random_weighted(X, rng, filtration=True))


def test_weighted_boundary_unit_weights():
    X = build_complex([(0, 1, 2), (2, 3)])
    wc = WeightedComplex(X, unit_weights(X))
    for n in range(X.dim + 1):
        assert np.array_equal(
            weighted_boundary(wc, n).toarray(), boundary_matrix(X, n).toarray()
        )


def test_weighted_boundary_single_edge_scaling():
    X = build_complex([(0, 1)])
    m = 7.5
    wc = weighted_complex(X, [[1.0, 1.0], [m]])
    assert np.allclose(weighted_boundary(wc, 1).toarray(), m * boundary_matrix(X, 1).toarray())


def test_weighted_boundary_composes_to_zero():
    rng = np.random.default_rng(13)
    for X in random_complexes(20, seed=17):
        wc = _random_weighted(X, rng)
        for n in range(1, X.dim + 1):
            prod = weighted_boundary(wc, n - 1) @ weighted_boundary(wc, n)
            if prod.nnz:
                assert np.abs(prod.data).max() <= 1e-12


def test_weighted_laplacian_single_edge():
    X = build_complex([(0, 1)])
    m = 3.0
    wc = weighted_complex(X, [[1.0, 1.0], [m]])
    L = weighted_laplacian(wc, 0).toarray()
    assert np.allclose(L, m**2 * np.array([[1.0, -1.0], [-1.0, 1.0]]))
    # computed from the definitions this is 2*m^2, not the 2*m sometimes quoted
    assert operator_norm(wc, 0) == pytest.approx(2 * m**2, rel=1e-12)


def test_weighted_laplacian_unit_weights_matches_unweighted():
    for X in random_complexes(10, seed=19):
        wc = WeightedComplex(X, unit_weights(X))
        for n in range(X.dim + 1):
            assert np.allclose(
                weighted_laplacian(wc, n).toarray(),
                laplacian(X, n).toarray().astype(float),
            )


def test_assembly_routes_agree():
    rng = np.random.default_rng(23)
    for X in random_complexes(20, seed=29):
        wc = _random_weighted(X, rng)
        for n in range(X.dim + 1):
            a = weighted_laplacian(wc, n).toarray()
            b = weighted_laplacian_sandwich(wc, n).toarray()
            if a.size:
                assert np.abs(a - b).max() <= 1e-12


def test_weighted_kernel_matches_unweighted():
    rng = np.random.default_rng(31)
    for X in random_complexes(20, seed=37):
        wc = _random_weighted(X, rng)
        for n in range(X.dim + 1):
            if X.level_size(n) == 0:
                continue
            assert nullity(weighted_laplacian(wc, n)) == nullity(laplacian(X, n))
            assert nullity(weighted_laplacian(wc, n)) == homology_dimension(X, n)


def test_commuting_square():
    rng = np.random.default_rng(41)
    for X in random_complexes(15, seed=43):
        wc = _random_weighted(X, rng)
        for n in range(1, X.dim + 1):
            B = boundary_matrix(X, n).astype(float)
            lhs = (B @ sparse.diags(wc.weight_vector(n))).toarray()
            rhs = (sparse.diags(wc.weight_vector(n - 1)) @ weighted_boundary(wc, n)).toarray()
            assert np.abs(lhs - rhs).max() <= 1e-12


def test_up_entry_formula():
    tri = build_complex([(0, 1, 2)])
    wc = WeightedComplex(tri, unit_weights(tri))
    assert up_laplacian_entry(wc, 1, 0, 0) == pytest.approx(1.0)
    lone = build_complex([(0, 1)])
    wc_lone = WeightedComplex(lone, unit_weights(lone))
    assert up_laplacian_entry(wc_lone, 1, 0, 0) == 0.0
    with pytest.raises(IndexError):
        up_laplacian_entry(wc, 1, 0, 5)

    rng = np.random.default_rng(47)
    for X in random_complexes(10, seed=53):
        wc_r = _random_weighted(X, rng)
        for n in range(X.dim + 1):
            U = weighted_up_laplacian(wc_r, n).toarray()
            for i in range(min(U.shape[0], 6)):
                for j in range(min(U.shape[1], 6)):
                    assert up_laplacian_entry(wc_r, n, i, j) == pytest.approx(
                        U[i, j], abs=1e-12
                    )


def test_weighted_fundamentals():
    rng = np.random.default_rng(59)
    for X in random_complexes(12, seed=61):
        wc = _random_weighted(X, rng)
        for n in range(X.dim + 1):
            down = weighted_down_laplacian(wc, n).toarray()
            up = weighted_up_laplacian(wc, n).toarray()
            if not down.size:
                continue
            # (c) the two parts annihilate each other
            assert np.abs(down @ up).max() <= 1e-10
            assert np.abs(up @ down).max() <= 1e-10
            # (a) kernel of the down part = kernel of the weighted boundary
            B = weighted_boundary(wc, n).toarray()
            vals, vecs = np.linalg.eigh(down)
            kernel = vecs[:, vals <= 1e-8 * max(1.0, vals[-1])]
            if B.size and kernel.size:
                assert np.abs(B @ kernel).max() <= 1e-10
            # (b) kernel of the sum is the intersection of the two kernels
            both = np.vstack([down, up])
            s = np.linalg.svd(both, compute_uv=False)
            rank = int((s > 1e-9 * max(1.0, s[0])).sum()) if s.size else 0
            assert nullity(weighted_laplacian(wc, n)) == down.shape[0] - rank


def test_norm_bound_under_filtration():
    rng = np.random.default_rng(67)
    edge = build_complex([(0, 1)])
    wc_edge = WeightedComplex(edge, unit_weights(edge))
    assert operator_norm(wc_edge, 0) == pytest.approx(2.0)
    assert norm_bound(wc_edge, 0) == 4.0

    vertices_only = build_complex([(0,), (1,), (2,)])
    wc_v = WeightedComplex(vertices_only, unit_weights(vertices_only))
    assert operator_norm(wc_v, 0) == 0.0

    for X in random_complexes(25, seed=71):
        wc = WeightedComplex(X, random_filtration_weights(X, rng))
        for n in range(X.dim + 1):
            assert operator_norm(wc, n) <= norm_bound(wc, n) + 1e-9


def test_union_idempotent():
    X = build_complex([(0, 1, 2), (2, 3)])
    rng = np.random.default_rng(73)
    wc = _random_weighted(X, rng)
    again = weighted_union(wc, wc)
    assert again.complex == wc.complex
    for n in range(X.dim + 1):
        assert np.array_equal(again.weight_vector(n), wc.weight_vector(n))


def test_union_weight_mismatch_rejected():
    X = build_complex([(0, 1)])
    a = weighted_complex(X, [[1.0, 1.0], [1.0]])
    b = weighted_complex(X, [[1.0, 1.0], [2.0]])
    with pytest.raises(IncompatibleWeightsError):
        weighted_union(a, b)
    with pytest.raises(IncompatibleWeightsError):
        weighted_intersection(a, b)


def test_disjoint_union_block_diagonal():
    a = weighted_complex(build_complex([(0, 1, 2)]), [[1, 1, 1], [1, 1, 1], [0.5]])
    b = weighted_complex(build_complex([(3, 4, 5)]), [[1, 1, 1], [1, 1, 1], [0.25]])
    inter = weighted_intersection(a, b)
    assert inter.complex.dim == -1
    union = weighted_union(a, b)
    L = weighted_laplacian(union, 1).toarray()
    edges = union.complex.simplices(1)
    for i, e in enumerate(edges):
        for j, f in enumerate(edges):
            if (e[0] < 3) != (f[0] < 3):
                assert L[i, j] == 0.0
    expected = sorted(
        np.concatenate(
            [
                eig_sym(weighted_laplacian(a, 1)).eigenvalues,
                eig_sym(weighted_laplacian(b, 1)).eigenvalues,
            ]
        )
    )
    assert np.allclose(eig_sym(L).eigenvalues, expected, atol=1e-12)


def test_union_fills_hole():
    inst = annulus_disc_instance(6, 1e-2)
    union = weighted_union(inst.outer, inst.filler)
    assert homology_dimension(inst.outer.complex, 1) == 1
    assert homology_dimension(union.complex, 1) == 0


def test_norm_of_union_inequality():
    rng = np.random.default_rng(79)
    for m, eps in [(4, 1e-1), (6, 1e-2), (6, 1.0)]:
        inst = annulus_disc_instance(m, eps)
        union = weighted_union(inst.outer, inst.filler)
        L_union = weighted_up_laplacian(union, 1).toarray()
        L_x = weighted_up_laplacian(inst.outer, 1).toarray()
        L_y = weighted_up_laplacian(inst.filler, 1).toarray()
        for _ in range(40):
            v = rng.normal(size=union.complex.level_size(1))
            vx = transfer_chain(union.complex, inst.outer.complex, 1, v)
            vy = transfer_chain(union.complex, inst.filler.complex, 1, v)
            lhs = np.linalg.norm(L_union @ v)
            rhs = np.linalg.norm(L_x @ vx) + np.linalg.norm(L_y @ vy)
            assert lhs <= rhs + 1e-10


def test_weighted_json_round_trip():
    X = build_complex([(0, 1, 2), (2, 3)])
    rng = np.random.default_rng(83)
    wc = _random_weighted(X, rng)
    data = weighted_to_dict(wc)
    back = weighted_from_dict(data)
    assert back.complex == wc.complex
    for n in range(X.dim + 1):
        assert np.allclose(back.weight_vector(n), wc.weight_vector(n))
    with pytest.raises(InvalidWeightError):
        weighted_from_dict({"generators": [[0, 1]]})
