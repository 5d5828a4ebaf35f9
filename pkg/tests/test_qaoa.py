import itertools

import numpy as np
import pytest
from scipy.optimize import minimize

from shiftkit.circuit import expectation
from shiftkit.errors import EmptyGraph, InvalidGraph
from shiftkit.qaoa import (
    Graph, analytic_bound, bound_spectra, cut_values, frequency_bound, maxcut_hamiltonian, maxcut_value,
    qaoa_circuit, qaoa_eval_counts, true_problem_spectrum,
)
from shiftkit.spectrum import param_spectrum


def brute_force_maxcut(g):
    best = 0
    for bits in itertools.product([0, 1], repeat=g.n_vertices):
        best = max(best, sum(bits[a] != bits[b] for a, b in g.edges))
    return best


def test_single_edge():
    g = Graph(2, ((0, 1),))
    ev = np.linalg.eigvalsh(maxcut_hamiltonian(g).matrix())
    assert set(np.round(ev, 12)) == {0.0, 1.0}
    assert maxcut_value(g) == 1


def test_triangle_and_square():
    tri, sq = Graph.complete(3), Graph.cycle(4)
    assert np.linalg.eigvalsh(maxcut_hamiltonian(tri).matrix()).max() == pytest.approx(2)
    assert maxcut_value(tri) == brute_force_maxcut(tri) == 2
    assert maxcut_value(sq) == brute_force_maxcut(sq) == 4


def test_hamiltonian_diagonal_equals_cut_values(rng):
    g = Graph.random_edges(5, 6, seed=3)
    assert np.allclose(np.diag(maxcut_hamiltonian(g).matrix()).real, cut_values(g))


def test_triangle_circuit_mixer_spectrum():
    c = qaoa_circuit(Graph.complete(3), 1)
    assert c.n_params == 2
    assert np.allclose(param_spectrum(c, 1).frequencies, [2, 4, 6])


def test_single_edge_reaches_maxcut():
    g = Graph(2, ((0, 1),))
    c, obs = qaoa_circuit(g, 1), maxcut_hamiltonian(g)
    grid = np.linspace(-np.pi, np.pi, 121)
    start = max(((a, b) for a in grid for b in grid), key=lambda p: expectation(c, p, obs))
    res = minimize(lambda p: -expectation(c, p, obs), start, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14})
    assert -res.fun == pytest.approx(1.0, abs=1e-6)


def test_decomposed_circuit_is_equivalent(rng):
    g = Graph.random_edges(4, 4, seed=5)
    x = rng.uniform(-2, 2, 4)
    obs = maxcut_hamiltonian(g)
    a = expectation(qaoa_circuit(g, 2), x, obs)
    b = expectation(qaoa_circuit(g, 2, decompose=True), x, obs)
    assert a == pytest.approx(b, abs=1e-12)


def test_analytic_bounds():
    assert analytic_bound(Graph.complete(6)) == 9
    reg = Graph.random_regular(8, 4, seed=1)
    b = frequency_bound(reg)
    assert b.phi == 16 and b.even and b.r_max == 8
    assert analytic_bound(Graph.random_edges(7, 12, seed=2)) == 12
    assert frequency_bound(Graph.random_regular(6, 3, seed=1)).phi == 9


def test_bound_spectra_cover_true_spectra(rng):
    for seed in range(6):
        g = Graph.random_edges(6, int(rng.integers(3, 12)), seed=seed)
        true = true_problem_spectrum(g)
        bound = bound_spectra(g, 2)[0]
        assert set(np.round(true.frequencies, 9)) <= set(np.round(bound.frequencies, 9))


def test_table_counts():
    k10 = Graph.complete(10)
    assert qaoa_eval_counts(k10, 6, "grad", "decomposition") == 330
    assert qaoa_eval_counts(k10, 6, "grad", "gen_shift") == 210
    reg = Graph.random_regular(8, 4, seed=0)
    assert qaoa_eval_counts(reg, 6, "grad", "gen_shift") == 96
    assert qaoa_eval_counts(reg, 6, "grad", "decomposition") == 144


def test_graph_validation():
    with pytest.raises(InvalidGraph):
        Graph(3, ((0, 0),))
    with pytest.raises(InvalidGraph):
        Graph(3, ((0, 5),))
    with pytest.raises(InvalidGraph):
        Graph(4, ((0, 1),), "k_regular", 3)
    with pytest.raises(EmptyGraph):
        maxcut_hamiltonian(Graph(3, ()))


def test_edge_list_round_trip():
    g = Graph.random_regular(6, 3, seed=4)
    g2 = Graph.from_edge_list(g.to_edge_list())
    assert g2.edges == g.edges and g2.kind == "k_regular" and g2.degree == 3
    assert Graph.from_edge_list("4\n0 1\n1 2\n2 3\n3 0\n0 2\n1 3\n2 0\n").kind == "complete"
