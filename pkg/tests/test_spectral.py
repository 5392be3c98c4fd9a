import numpy as np
import pytest

from simplap import (
    build_complex,
    eig_sym,
    laplacian,
    nullity,
    smallest_nonzero_eigenpairs,
    weighted_complex,
    weighted_laplacian,
)
from simplap.errors import InsufficientSpectrumError, NumericError, ParameterError

from util import paper_graph, random_complexes, random_positive_weights


def test_eig_single_edge():
    spec = eig_sym(np.array([[1.0, -1.0], [-1.0, 1.0]]))
    assert np.allclose(spec.eigenvalues, [0.0, 2.0], atol=1e-12)


def test_eig_triangle_graph():
    K3 = build_complex([(0, 1), (0, 2), (1, 2)])
    spec = eig_sym(laplacian(K3, 0))
    assert np.allclose(spec.eigenvalues, [0.0, 3.0, 3.0], atol=1e-12)


def test_eig_zero_matrix():
    spec = eig_sym(np.zeros((4, 4)))
    assert np.allclose(spec.eigenvalues, 0.0)
    assert spec.nullity == 4


def test_eig_invariants_residual_orthonormal():
    rng = np.random.default_rng(7)
    A = rng.normal(size=(12, 12))
    M = A + A.T
    spec = eig_sym(M)
    scale = max(1.0, np.abs(M).max())
    for i in range(12):
        res = M @ spec.eigenvectors[:, i] - spec.eigenvalues[i] * spec.eigenvectors[:, i]
        assert np.linalg.norm(res) <= 1e-8 * scale
    gram = spec.eigenvectors.T @ spec.eigenvectors
    assert np.abs(gram - np.eye(12)).max() <= 1e-8


def test_eig_rejects_bad_input():
    with pytest.raises(NumericError):
        eig_sym(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NumericError):
        eig_sym(np.array([[np.nan, 0.0], [0.0, 1.0]]))
    with pytest.raises(NumericError):
        eig_sym(np.zeros((2, 3)))


def test_nullity_examples():
    two_components = build_complex([(0, 1), (2, 3)])
    assert nullity(laplacian(two_components, 0)) == 2
    assert nullity(laplacian(paper_graph(), 1)) == 3
    assert nullity(np.eye(5)) == 0


def test_smallest_nonzero_examples():
    K3 = build_complex([(0, 1), (0, 2), (1, 2)])
    pairs = smallest_nonzero_eigenpairs(laplacian(K3, 0), 1)
    assert pairs[0][0] == pytest.approx(3.0, abs=1e-12)

    edge = build_complex([(0, 1)])
    lam, v = smallest_nonzero_eigenpairs(laplacian(edge, 0), 1)[0]
    assert lam == pytest.approx(2.0, abs=1e-12)
    assert np.allclose(v, [1 / np.sqrt(2), -1 / np.sqrt(2)])  # first component positive


def test_smallest_nonzero_errors():
    edge = build_complex([(0, 1)])
    with pytest.raises(InsufficientSpectrumError):
        smallest_nonzero_eigenpairs(laplacian(edge, 0), 2)
    with pytest.raises(ParameterError):
        smallest_nonzero_eigenpairs(laplacian(edge, 0), 0)


def test_spectrum_invariant_under_relabeling():
    rng = np.random.default_rng(19)
    gens = [(0, 1, 2), (1, 2, 3), (3, 4), (2, 4, 5)]
    X = build_complex(gens)
    w = random_positive_weights(X, rng)
    wc = weighted_complex(X, [v.tolist() for v in w.by_dim])

    perm = {old: new for new, old in enumerate(rng.permutation(6))}
    Y = build_complex([[perm[v] for v in g] for g in gens])
    vectors = []
    for n in range(Y.dim + 1):
        wv = np.empty(Y.level_size(n))
        for k, s in enumerate(Y.simplices(n)):
            original = tuple(sorted(old for old in perm if perm[old] in s))
            wv[k] = w.vector(n)[X.index_of(original)]
        vectors.append(wv)
    wc_perm = weighted_complex(Y, vectors)

    for n in range(X.dim + 1):
        a = eig_sym(weighted_laplacian(wc, n)).eigenvalues
        b = eig_sym(weighted_laplacian(wc_perm, n)).eigenvalues
        assert np.abs(a - b).max() <= 1e-10


def test_psd_up_to_roundoff_on_random_weighted():
    rng = np.random.default_rng(29)
    for X in random_complexes(15, seed=59):
        w = random_positive_weights(X, rng)
        wc = weighted_complex(X, [v.tolist() for v in w.by_dim])
        for n in range(X.dim + 1):
            vals = eig_sym(weighted_laplacian(wc, n)).eigenvalues
            if vals.size:
                assert vals.min() >= -1e-9


def test_nullity_stable_under_small_weight_perturbation():
    rng = np.random.default_rng(31)
    for X in random_complexes(15, seed=61):
        w = random_positive_weights(X, rng)
        wc = weighted_complex(X, [v.tolist() for v in w.by_dim])
        bumped = weighted_complex(
            X, [(v * (1.0 + 0.01 * rng.uniform(-1, 1, v.size))).tolist() for v in w.by_dim]
        )
        for n in range(X.dim + 1):
            if X.level_size(n) == 0:
                continue
            assert nullity(weighted_laplacian(wc, n)) == nullity(
                weighted_laplacian(bumped, n)
            )
