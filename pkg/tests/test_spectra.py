"""Spectral summaries against an independent characteristic-polynomial oracle,
plus the closed-form ER / BA asymptotics."""

import math

import numpy as np
import pytest

from syncpersist import graphs, spectra
from syncpersist.graphs import Graph, GraphRecipe, generate, laplacian
from syncpersist.spectra import (
    SpectraError,
    eigenvalues_symmetric,
    er_a_of_p0,
    opnorm,
    predicted_delta_scale_ba,
    predicted_ratio_er,
    summarize,
)


def charpoly_eigenvalues(M):
    """Oracle: eigenvalues as roots of the characteristic polynomial computed
    by the Faddeev-LeVerrier recursion. Independent of any eigensolver."""
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    coeffs = np.zeros(n + 1)
    coeffs[0] = 1.0
    A = np.zeros_like(M)
    for k in range(1, n + 1):
        A = M @ A + coeffs[k - 1] * np.eye(n)
        coeffs[k] = -np.trace(M @ A) / k
    roots = np.roots(coeffs)
    # repeated roots split into tiny conjugate pairs; tolerate that
    assert np.abs(roots.imag).max() < 1e-3
    return np.sort(roots.real)


def test_single_edge_spectrum():
    ev = eigenvalues_symmetric(laplacian(Graph(n=2, edges=((0, 1),))))
    assert np.allclose(ev, [0.0, 2.0], atol=1e-12)


def test_path3_spectrum():
    # roots of lambda (lambda - 1)(lambda - 3)
    ev = eigenvalues_symmetric(laplacian(generate(GraphRecipe(kind="path", n=3))))
    assert np.allclose(ev, [0.0, 1.0, 3.0], atol=1e-10)


def test_complete_graph_spectrum():
    for n in (3, 5, 8):
        ev = eigenvalues_symmetric(laplacian(generate(GraphRecipe(kind="complete", n=n))))
        expect = [0.0] + [float(n)] * (n - 1)
        assert np.allclose(ev, expect, atol=1e-10)


def test_jacobi_matches_charpoly_oracle():
    rng = np.random.default_rng(0)
    for n in (2, 3, 4):
        for _ in range(20):
            G = rng.standard_normal((n, n))
            M = G + G.T
            assert np.allclose(
                eigenvalues_symmetric(M), charpoly_eigenvalues(M), atol=1e-8
            )


def test_jacobi_matches_charpoly_on_laplacians():
    rng = np.random.default_rng(1)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        g = generate(GraphRecipe(kind="er", n=n, p=0.9, seed=int(rng.integers(1e6))))
        L = laplacian(g)
        # repeated Laplacian eigenvalues cost the root-finding oracle accuracy
        assert np.allclose(
            eigenvalues_symmetric(L), charpoly_eigenvalues(L), atol=1e-3
        )


def test_asymmetric_input_rejected():
    with pytest.raises(SpectraError):
        eigenvalues_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(SpectraError):
        eigenvalues_symmetric(np.zeros((2, 3)))


def test_zero_matrix():
    assert np.array_equal(eigenvalues_symmetric(np.zeros((4, 4))), np.zeros(4))


def test_opnorm_examples():
    assert opnorm(np.array([[1.0, -1.0], [-1.0, 1.0]])) == 2.0
    assert opnorm(np.eye(3)) == 1.0
    assert opnorm(np.array([[1.0, 2.0], [-4.0, 0.5]])) == 4.5


def test_summarize_star5():
    # star spectrum {0, 1, 1, 1, 5}; hub degree 4 so opnorm 8
    s = summarize(generate(GraphRecipe(kind="star", n=5)))
    assert abs(s.lambda2 - 1.0) < 1e-10
    assert s.opnorm == 8.0
    assert (s.g_min, s.g_max) == (1, 4)
    assert np.allclose(s.eigenvalues, [0, 1, 1, 1, 5], atol=1e-10)


def test_summarize_k10():
    s = summarize(generate(GraphRecipe(kind="complete", n=10)))
    assert abs(s.lambda2 - 10.0) < 1e-9
    assert s.opnorm == 18.0


def test_summarize_single_edge():
    s = summarize(Graph(n=2, edges=((0, 1),)))
    assert abs(s.lambda2 - 2.0) < 1e-12
    assert s.opnorm == 2.0


def test_summarize_disconnected_raises():
    with pytest.raises(SpectraError):
        summarize(Graph(n=4, edges=((0, 1), (2, 3))))


def test_spectral_identities_random_graphs():
    # trace identity, opnorm = 2 g_max, Fiedler bound lambda2 <= n/(n-1) g_min
    rng = np.random.default_rng(2)
    for _ in range(25):
        n = int(rng.integers(4, 20))
        g = generate(GraphRecipe(kind="er", n=n, p=0.6, seed=int(rng.integers(1e6))))
        s = summarize(g)
        assert abs(s.eigenvalues.sum() - g.degrees.sum()) < 1e-8 * max(1, n)
        assert s.opnorm == 2.0 * s.g_max
        assert s.lambda2 <= n / (n - 1.0) * s.g_min + 1e-8


def test_er_a_large_p0():
    # a increases towards 1 as p0 grows
    assert er_a_of_p0(100.0) > 0.85
    assert er_a_of_p0(1e6) > 0.99
    assert er_a_of_p0(1e6) > er_a_of_p0(100.0) > er_a_of_p0(10.0)


def test_er_a_near_one():
    assert er_a_of_p0(1.0 + 1e-6) < 0.01


def test_er_a_residual():
    for p0 in (1.01, 2.0, 10.0, 100.0):
        a = er_a_of_p0(p0)
        resid = a * p0 * (1.0 - math.log(a)) - (p0 - 1.0)
        assert abs(resid) <= 1e-10


def test_er_a_domain():
    with pytest.raises(SpectraError):
        er_a_of_p0(1.0)


def test_ba_scale_values():
    assert predicted_delta_scale_ba(100) == pytest.approx(0.1)
    assert predicted_delta_scale_ba(10000) == pytest.approx(0.01)


def test_predicted_ratio_er_against_measurement():
    # measured lambda2/(n p) on one ER sample vs the asymptotic prediction
    n, p = 1000, 0.3
    g = generate(GraphRecipe(kind="er", n=n, p=p, seed=9))
    s = summarize(g)
    measured = s.lambda2 / (n * p)
    predicted = predicted_ratio_er(n, p)
    assert abs(measured - predicted) / predicted < 0.25


def test_mori_gmax_sqrt_n_ba():
    # max degree of BA trees grows like sqrt(n): the normalized ratio is
    # stable (within a factor ~3) across a decade of n
    ratios = []
    for n in (200, 800, 2000):
        g = generate(GraphRecipe(kind="ba", n=n, m0=1, seed=13))
        ratios.append(g.degrees.max() / math.sqrt(n))
    assert max(ratios) / min(ratios) < 3.0
