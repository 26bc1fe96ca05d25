import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from clustnet import backend
from clustnet.errors import AbsorbedError
from clustnet.graph_state import GraphState, complete_graph, from_edges, new_empty
from clustnet.stats import time_average
from clustnet.triadic import (Chain, TriadicParams, affected_pairs, all_intensities,
                              clustering_weight, correction_term, derive_seed, pair_intensity,
                              reference_step, run, star_weight)

HAVE_CORE = True
try:
    from clustnet import _core  # noqa: F401
except ImportError:
    HAVE_CORE = False

BACKENDS = ["python"] + (["cython"] if HAVE_CORE else [])


def star(n_leaves):
    return from_edges(n_leaves + 1, [(0, k) for k in range(1, n_leaves + 1)])


# hand-evaluated intensities -------------------------------------------------

def test_clustering_weight_examples():
    assert clustering_weight(new_empty(4), 0, 1, 1.3) == 0
    k3 = complete_graph(3)
    assert clustering_weight(k3, 0, 1, 0) == 1
    assert clustering_weight(k3, 0, 1, 1) == 0.5
    assert clustering_weight(complete_graph(4), 0, 1, 2) == pytest.approx(2 / 9, rel=1e-15)


def test_star_weight_examples():
    assert star_weight(new_empty(3), 0, 1) == 0
    assert star_weight(complete_graph(3), 0, 1) == 1
    assert star_weight(complete_graph(4), 0, 1) == pytest.approx(2 / 3, rel=1e-15)


def test_correction_term_examples():
    assert correction_term(complete_graph(5), 0, 1) == 0
    assert correction_term(new_empty(5), 0, 1) == 0.5
    g = from_edges(5, [(1, 2)])
    assert correction_term(g, 0, 1) == pytest.approx(1 / 4 + 1 / 3, rel=1e-15)
    with pytest.raises(ValueError):
        correction_term(new_empty(2), 0, 1)


def test_pair_intensity_examples():
    lam_v = (2.0, 3.0, 5.0)
    p = TriadicParams("general", alpha=1, beta=1, lam=7, mu=1, lambda_v=lam_v, mu_v=(1, 1, 1))
    assert pair_intensity(new_empty(3), p, 0, 2) == 10.0

    k3 = complete_graph(3)
    p = TriadicParams("simplified", beta=1, mu=4, mu0=5)
    assert pair_intensity(k3, p, 0, 1) == 3.0
    p = TriadicParams("simplified", beta=1, mu=4, mu0=1)
    assert pair_intensity(k3, p, 0, 1) == 0.0

    p = TriadicParams("corrected", lam=2, lambda0=1, mu0=3)
    assert pair_intensity(new_empty(5), p, 0, 1) == 2.0
    assert pair_intensity(complete_graph(5), p, 0, 1) == 3.0


def test_pair_intensity_symmetric():
    g = from_edges(5, [(0, 2), (1, 2), (2, 3), (0, 3)])
    p = TriadicParams("simplified", alpha=1.5, beta=0.5, lam=2, mu=0.3, mu0=2)
    for i, j in itertools.permutations(range(5), 2):
        assert pair_intensity(g, p, i, j) == pair_intensity(g, p, j, i)


@pytest.mark.parametrize("kw", [
    dict(variant="bogus"),
    dict(variant="independent", lam=1.0),
    dict(variant="corrected", mu=1.0),
    dict(alpha=-1.0),
    dict(mu0=0.0),
    dict(variant="general", lambda_v=(1.0, 0.0), mu_v=(1.0, 1.0)),
    dict(variant="simplified", lambda_v=(1.0, 1.0), mu_v=(1.0, 1.0)),
    dict(variant="general", lambda_v=(1.0, 1.0)),
])
def test_params_validation(kw):
    with pytest.raises(ValueError):
        TriadicParams(**kw)


def test_vertex_weight_count_checked():
    p = TriadicParams("general", lambda_v=(1.0, 1.0), mu_v=(1.0, 1.0))
    with pytest.raises(ValueError):
        Chain(3, p)


# affected pairs ---------------------------------------------------------------

def test_affected_pairs_examples():
    assert affected_pairs(new_empty(4), 0, 1) == set()
    assert affected_pairs(complete_graph(3), 0, 1) == {(0, 2), (1, 2)}
    assert affected_pairs(star(3), 0, 1) == {(1, 2), (1, 3), (2, 3)}


PARAM_CHOICES = [
    TriadicParams("simplified", alpha=1.0, beta=1.0, lam=3.0, mu=2.0, mu0=5.0),
    TriadicParams("simplified", alpha=0.0, beta=0.0, lam=1.0, mu=0.2, mu0=3.0),
    TriadicParams("general", alpha=2.75, beta=2.5, lam=4.0, mu=3.0, mu0=2.0),
    TriadicParams("corrected", lam=2.0, lambda0=0.5, mu0=3.0),
]

graphs = st.integers(3, 9).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1]),
             max_size=3 * n),
    st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1]),
    st.sampled_from(PARAM_CHOICES)))


@settings(max_examples=300, deadline=None)
@given(graphs)
def test_affected_pairs_cover_every_changed_rate(case):
    n, edges, (i, j), params = case
    g = from_edges(n, edges)
    before = all_intensities(g, params)
    pre = affected_pairs(g, i, j, params)
    g.toggle_edge(i, j)
    post = affected_pairs(g, i, j, params)
    after = all_intensities(g, params)
    changed = {p for p in before if before[p] != after[p]} - {(min(i, j), max(i, j))}
    assert changed <= pre
    assert changed <= post


# engine -----------------------------------------------------------------------

@pytest.mark.parametrize("name", BACKENDS)
@pytest.mark.parametrize("params", PARAM_CHOICES, ids=lambda p: p.variant)
def test_rate_cache_matches_recomputation(name, params):
    n = 14
    chain = Chain(n, params, seed=11, backend_name=name)
    for _ in range(10):
        chain.advance(1000)
        g = chain.graph()
        cached = chain.cached_rates()
        assert cached == all_intensities(g, params)
        assert min(cached.values()) >= 0
        assert math.isclose(chain.total_rate, sum(cached.values()), rel_tol=1e-9)


@pytest.mark.parametrize("name", BACKENDS)
def test_rate_cache_with_vertex_weights(name):
    rng = np.random.default_rng(3)
    n = 12
    p = TriadicParams("general", alpha=1.5, beta=2.0, lam=2.0, mu=1.0,
                      lambda_v=tuple(rng.uniform(0.5, 1.5, n)),
                      mu_v=tuple(rng.uniform(1.0, 2.0, n)))
    chain = Chain(n, p, seed=5, backend_name=name)
    chain.advance(5000)
    assert chain.cached_rates() == all_intensities(chain.graph(), p)


@pytest.mark.skipif(not HAVE_CORE, reason="compiled core not built")
@pytest.mark.parametrize("params", PARAM_CHOICES, ids=lambda p: p.variant)
def test_backends_bit_identical(params):
    a = Chain(15, params, seed=99, backend_name="python")
    b = Chain(15, params, seed=99, backend_name="cython")
    for _ in range(3000):
        assert a.step() == b.step()
    assert a.sim_time == b.sim_time
    assert a.cached_rates() == b.cached_rates()


def test_toggle_keeps_cache_coherent():
    p = PARAM_CHOICES[0]
    chain = Chain(8, p, seed=1)
    for i, j in [(0, 1), (1, 2), (0, 2), (2, 3), (0, 1)]:
        chain.toggle(i, j)
        assert chain.cached_rates() == all_intensities(chain.graph(), p)


def test_same_seed_same_trajectory():
    p = PARAM_CHOICES[2]
    a = run(Chain(30, p, seed=4), n_samples=5)
    b = run(Chain(30, p, seed=4), n_samples=5)
    assert [(s.sim_time, s.jumps, s.weight, s.stats) for s in a] == \
           [(s.sim_time, s.jumps, s.weight, s.stats) for s in b]
    c = run(Chain(30, p, seed=5), n_samples=5)
    assert [s.sim_time for s in a] != [s.sim_time for s in c]


def test_run_defaults():
    chain = Chain(10, PARAM_CHOICES[0], seed=0)
    samples = run(chain, n_samples=3)
    assert [s.jumps for s in samples] == [300, 310, 320]
    assert all(s.weight > 0 for s in samples)


def test_absorption_is_signalled():
    # every edge of K4 is protected below zero, so the complete graph is a trap
    p = TriadicParams("simplified", alpha=0, beta=0, lam=1.0, mu=5.0, mu0=1.0, lambda0=1.0)
    chain = Chain(4, p, seed=0)
    with pytest.raises(AbsorbedError):
        chain.advance(10_000)


def test_mean_holding_time_two_vertices():
    chain = Chain(2, TriadicParams("independent", lambda0=1.0, mu0=1.0), seed=2)
    dts = [chain.step()[0] for _ in range(100_000)]
    assert abs(np.mean(dts) - 1.0) < 3 / math.sqrt(len(dts))

    chain = Chain(2, TriadicParams("independent", lambda0=4.0, mu0=1.0), seed=3)
    from_empty = []
    for _ in range(100_000):
        empty = chain.engine.edge_count == 0
        dt, _ = chain.step()
        if empty:
            from_empty.append(dt)
    assert abs(np.mean(from_empty) - 0.25) < 3 * 0.25 / math.sqrt(len(from_empty))


def test_pair_selection_is_proportional_to_rates():
    p = TriadicParams("simplified", alpha=1.0, beta=1.0, lam=3.0, mu=2.0, mu0=5.0)
    chain = Chain(7, p, seed=8)
    for i, j in [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (5, 6), (4, 6)]:
        chain.toggle(i, j)
    rates = chain.cached_rates()
    pairs = sorted(rates)
    counts = dict.fromkeys(pairs, 0)
    draws = 40_000
    for _ in range(draws):
        _, (i, j) = chain.step()
        counts[(i, j)] += 1
        chain.toggle(i, j)
    assert chain.cached_rates() == rates
    total = sum(rates.values())
    expected = np.array([rates[q] / total * draws for q in pairs])
    observed = np.array([counts[q] for q in pairs])
    assert sps.chisquare(observed, expected).pvalue > 1e-3


def test_reference_stepper_agrees():
    p = TriadicParams("simplified", alpha=1.0, beta=1.0, lam=3.0, mu=2.0, mu0=5.0)
    n, steps = 6, 6000
    rng = np.random.default_rng(0)
    g = GraphState(n)
    ref_dt, ref_pairs = [], []
    for _ in range(steps):
        dt, pair = reference_step(g, p, rng)
        ref_dt.append(dt)
        ref_pairs.append(pair)
    chain = Chain(n, p, seed=0)
    sim = [chain.step() for _ in range(steps)]
    assert sps.ks_2samp(ref_dt, [dt for dt, _ in sim]).pvalue > 1e-3
    pairs = list(itertools.combinations(range(n), 2))
    table = np.array([[ref_pairs.count(q) for q in pairs],
                      [sum(1 for _, r in sim if r == q) for q in pairs]])
    assert sps.chi2_contingency(table).pvalue > 1e-3


def test_independent_pairs_are_bernoulli_and_uncorrelated():
    from clustnet.oracle import StateSpace, empirical_occupancy
    p = TriadicParams("independent", lambda0=1.0, mu0=2.0)
    occ = empirical_occupancy(p, 4, 300_000, seed=1)
    space = StateSpace(4)
    bits = np.array([[(s >> k) & 1 for k in range(6)] for s in range(space.size)], dtype=float)
    marg = occ @ bits
    assert np.allclose(marg, 1 / 3, atol=0.01)
    cov = (bits * occ[:, None]).T @ bits - np.outer(marg, marg)
    off = cov[~np.eye(6, dtype=bool)]
    assert np.max(np.abs(off)) < 0.01


def test_derive_seed():
    assert derive_seed(10, 0) == 10
    assert derive_seed(10, 3) == 9
    assert len({derive_seed(1234, k) for k in range(100)}) == 100


@pytest.mark.slow
def test_large_graph_regime_is_sparse_and_clustered():
    n = 1000
    p = TriadicParams("general", alpha=2.75, beta=2.5, lam=20000.0, mu=15000.0,
                      lambda0=1.0, mu0=float(n))
    samples = run(Chain(n, p, seed=1), n_samples=20, sample_interval_jumps=5 * n)
    e = time_average("edge_density", samples).mean
    cl = time_average("avg_local_clustering", samples).mean
    assert 1e-3 <= e < 1e-2
    assert 0.05 < cl < 0.5


def test_backend_is_selected():
    assert backend.NAME in ("python", "cython")


@pytest.mark.parametrize("forced", ["python"] + (["cython"] if HAVE_CORE else []))
def test_backend_env_selects_engine(forced):
    import os
    import subprocess
    import sys
    env = dict(os.environ, CLUSTNET_BACKEND=forced)
    out = subprocess.run([sys.executable, "-c", "import clustnet; print(clustnet.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == forced
