import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clustnet import oracle, theory
from clustnet.graph_state import complete_graph, new_empty
from clustnet.triadic import TriadicParams


def test_state_space_roundtrip():
    space = oracle.StateSpace(4)
    assert space.size == 64
    for s in range(space.size):
        assert space.encode(space.decode(s)) == s
    assert space.encode(complete_graph(4)) == 63
    assert space.encode(new_empty(4)) == 0


def test_state_space_cap():
    with pytest.raises(ValueError):
        oracle.StateSpace(6)


def test_generator_rows_sum_to_zero():
    Q = oracle.generator(TriadicParams("simplified", alpha=1, beta=1, lam=3, mu=2, mu0=5), 4)
    assert np.allclose(Q.sum(axis=1), 0, atol=1e-12)
    assert np.all(Q - np.diag(np.diag(Q)) >= 0)


def test_uniform_law_n3():
    dist = oracle.stationary(TriadicParams("independent", lambda0=1, mu0=1), 3)
    assert np.allclose(dist.pi, 1 / 8, atol=1e-14)
    assert dist.expectation(lambda g: 1.0) == pytest.approx(1.0, abs=1e-14)
    assert dist.expectation(oracle.edge_density) == pytest.approx(0.5, abs=1e-14)


def test_two_state_balance():
    dist = oracle.stationary(TriadicParams("independent", lambda0=1, mu0=3), 2)
    assert dist.pi[1] == pytest.approx(0.25, abs=1e-14)


def test_simplified_n3_solves():
    dist = oracle.stationary(TriadicParams("simplified", alpha=1, beta=1, lam=2, mu=1, mu0=2), 3)
    assert dist.residual < 1e-12
    assert abs(dist.pi.sum() - 1) < 1e-14


def test_reducible_is_reported():
    Q = np.zeros((4, 4))
    Q[0, 1] = 1.0
    Q[0, 0] = -1.0
    with pytest.raises(oracle.ReducibleChainError):
        oracle.solve_stationary(Q, 2)


def test_absorbing_config_is_reducible():
    # the complete graph traps the chain when protection exceeds mu0
    p = TriadicParams("simplified", alpha=0, beta=0, lam=1, mu=5, mu0=1)
    with pytest.raises(oracle.ReducibleChainError):
        oracle.stationary(p, 4)


def test_corrected_closed_form_exact():
    p = TriadicParams("corrected", lam=3.0, lambda0=1.0, mu0=4.0)
    dist = oracle.stationary(p, 4)
    e = dist.expectation(oracle.edge_density)
    cl = dist.expectation(oracle.mean_local_clustering)
    assert abs(e - theory.density_closed_form_alpha2(1.0, 4.0, 3.0, 4, cl)) < 1e-10


params_strategy = st.builds(
    lambda v, a, b, lam, mu, l0, m0: TriadicParams(v, alpha=a, beta=b, lam=lam, mu=mu,
                                                   lambda0=l0, mu0=m0),
    st.just("simplified"), st.floats(0, 3), st.floats(0, 3), st.floats(0, 10),
    st.floats(0, 10), st.floats(0.2, 5), st.floats(0.2, 5))


@settings(max_examples=100, deadline=None)
@given(params_strategy)
def test_exact_balance_and_bounds(p):
    try:
        dist = oracle.stationary(p, 4)
    except oracle.ReducibleChainError:
        return
    assert abs(dist.expectation(oracle.rate_balance(p))) < 1e-10
    e = dist.expectation(oracle.edge_density)
    assert theory.density_bounds(p, 4).contains(e, slack=1e-10)
    if 0 < p.alpha <= 2:
        tri = dist.expectation(oracle.mean_triangles)
        p2 = dist.expectation(oracle.frac_degree_ge2)
        assert tri >= theory.triangle_lower_bound(p.lambda0, p.mu0, p.lam, p2) - 1e-10


def test_simulation_converges_to_exact_law():
    p = TriadicParams("general", alpha=1, beta=1, lam=2, mu=1, lambda0=1, mu0=3)
    dist = oracle.stationary(p, 4)
    emp = oracle.empirical_occupancy(p, 4, 300_000, seed=3)
    assert oracle.total_variation(emp, dist.pi) < 0.02


def test_exact_expectation_observables():
    dist = oracle.stationary(TriadicParams("independent", lambda0=1, mu0=1), 3)
    # uniform over graphs on 3 vertices: one triangle graph of eight
    assert dist.expectation(oracle.mean_triangles) == pytest.approx(1 / 8, abs=1e-14)
    expected_ge2 = sum(sum(1 for v in range(3)
                           if sum(1 for e in edges if v in e) >= 2) / 3
                       for r in range(4)
                       for edges in itertools.combinations([(0, 1), (0, 2), (1, 2)], r)) / 8
    assert dist.expectation(oracle.frac_degree_ge2) == pytest.approx(expected_ge2, abs=1e-14)
