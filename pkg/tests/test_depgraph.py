import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import ALL_PROBLEMS, random_instances
from qdp.core import Op, RecurrenceSpec, Target, ValueKind
from qdp.depgraph import (
    DependencyDigraph, bucket_bound_check, build_depgraph, cauchy_schwarz_holds, degree_stats, delta_of,
    expected_charge, verify_simple,
)
from qdp.engine import run
from qdp.problems import (
    CoinChange, Graph, Knapsack, PointSeries, coin_change_spec, sls_spec, sssp_spec, ukp_spec,
)
from qdp.problems.generators import scaled_sssp
from qdp.problems.registry import get


def _chain_spec(n, f_C, gamma, h=1):
    return RecurrenceSpec(
        dims=(n,), op=Op.MIN, h=h, f_init=lambda idx: 0 if idx[0] == 0 else None, f_C=f_C, gamma=gamma,
        f_P=lambda idx, X, read: 0, kind=ValueKind.EXT_INT, target=Target((n - 1,)))


def test_sssp_node_count():
    g = build_depgraph(sssp_spec(Graph(3, [(0, 1, 1), (1, 2, 2)], 0)))
    assert g.node_count == 9
    assert delta_of(g) == Fraction(8, 9)


def test_coin_change_out_degree():
    g = build_depgraph(coin_change_spec(CoinChange([1, 4, 5], 6)))
    assert g.degree_of((6,)) == 3


def test_single_cell_graph():
    spec = RecurrenceSpec(dims=(1,), op=Op.MIN, h=1, f_init=lambda idx: 0, f_C=lambda idx: 0,
                          gamma=lambda idx, u: (), f_P=lambda idx, X, r: 0, kind=ValueKind.EXT_INT,
                          target=Target((0,)))
    g = build_depgraph(spec)
    assert (g.node_count, g.arc_count) == (1, 0)
    stats = degree_stats(g)
    assert stats.delta == 0 and bucket_bound_check(stats, g)


def test_table_and_fresh_construction_agree():
    spec = sssp_spec(scaled_sssp(np.random.default_rng(1), 12))
    a = build_depgraph(spec)
    b = build_depgraph(spec, run(spec, "exact").table)
    assert (a.node_count, a.arc_count) == (b.node_count, b.arc_count)
    assert np.array_equal(a.out_degree, b.out_degree)


def test_sssp_delta_formula():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 30))
        inst = scaled_sssp(rng, n, density=float(rng.uniform(0.05, 0.9)))
        m = len(inst.min_arcs())
        assert delta_of(build_depgraph(sssp_spec(inst))) == Fraction(2 * m * (n - 1), n * n)


def test_ukp_all_cells_full_degree():
    n, W = 4, 10
    g = build_depgraph(ukp_spec(Knapsack(W, [(w, 1) for w in range(1, n + 1)])))
    arcs = sum(min(i, n) for i in range(1, W + 1))
    assert delta_of(g) == Fraction(2 * arcs, W + 1)
    assert delta_of(g) <= 2 * n


def test_sls_one_point():
    g = build_depgraph(sls_spec(PointSeries([(0.0, 0.0)], 1.0)))
    assert (g.node_count, g.arc_count) == (2, 1)


def test_verify_simple_shared_dependency():
    spec = _chain_spec(4, lambda idx: min(2, idx[0]), lambda idx, u: ((idx[0] - 1,),))
    assert not verify_simple(spec)


def test_verify_simple_odd_dependency_count():
    # Each element names the same cell twice, so the h=2 tuples hold fewer distinct cells.
    spec = _chain_spec(4, lambda idx: 1, lambda idx, u: ((idx[0] - 1,), (idx[0] - 1,)), h=2)
    assert not verify_simple(spec)


def test_verify_simple_wrong_arity():
    spec = _chain_spec(4, lambda idx: 1, lambda idx, u: ((idx[0] - 1,),), h=2)
    assert not verify_simple(spec)


def test_star_graph_buckets():
    n = 50
    spec = RecurrenceSpec(
        dims=(n,), op=Op.MIN, h=1, f_init=lambda idx: None if idx[0] == n - 1 else 0,
        f_C=lambda idx: n - 1, gamma=lambda idx, u: ((u,),), f_P=lambda idx, X, read: 0,
        kind=ValueKind.EXT_INT, target=Target((n - 1,)))
    g = build_depgraph(spec)
    stats = degree_stats(g)
    assert stats.delta == Fraction(2 * (n - 1), n)
    assert bucket_bound_check(stats, g)
    v1 = dict(stats.buckets).get(1, 0)
    assert v1 in (0, 1)
    assert sum(c for _, c in stats.buckets) == n


@given(st.lists(st.integers(0, 200), min_size=1, max_size=200), st.integers(1, 3), st.randoms())
def test_buckets_partition_and_bound(lams, h, rnd):
    lam = np.array(lams, dtype=np.int64)
    g = DependencyDigraph((lam.size,), h, lam > 0, lam)
    stats = degree_stats(g)
    assert sum(c for _, c in stats.buckets) == g.node_count
    assert bucket_bound_check(stats, g)
    perm = list(range(lam.size))
    rnd.shuffle(perm)
    shuffled = DependencyDigraph((lam.size,), h, lam[perm] > 0, lam[perm])
    assert delta_of(shuffled) == stats.delta
    assert degree_stats(shuffled).buckets == stats.buckets


@given(st.integers(0, 10**6), st.integers(1, 10**4), st.integers(0, 10**6))
def test_cauchy_schwarz_integer_decision(q, nodes, arcs):
    # For integer q, q ≤ N + √(N·A) exactly when q ≤ N + ⌊√(N·A)⌋.
    assert cauchy_schwarz_holds(q, nodes, arcs) == (q <= nodes + math.isqrt(nodes * arcs))


@pytest.mark.parametrize("problem", ALL_PROBLEMS)
def test_adapters_simple_and_bucketed(problem):
    adapter = get(problem)
    for inst in random_instances(problem, 30, seed=500):
        spec = adapter.build(inst)
        g = build_depgraph(spec)
        assert verify_simple(spec, g)
        assert bucket_bound_check(degree_stats(g), g)


@pytest.mark.parametrize("problem", [p for p in ALL_PROBLEMS if p != "cyk"])
def test_charge_from_out_degrees(problem):
    adapter = get(problem)
    for inst in random_instances(problem, 10, seed=600):
        spec = adapter.build(inst)
        res = run(spec, "exact")
        g = build_depgraph(spec, res.table)
        lam = g.out_degree[g.recursive] // g.h
        assert res.ledger.oracle_queries == sum(int(np.ceil(np.sqrt(x) - 1e-12)) for x in lam)
        assert res.ledger.oracle_queries == expected_charge(spec, g)
