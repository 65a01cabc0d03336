import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdp.qsearch import (
    ChargePolicy, EmptyDomainError, ceil_sqrt, mc_qmin_trial_stats, mc_round_charge, qfind, qfind_all,
    qfind_all_bits, qmax, qmin, search_charge,
)

EXACT = ChargePolicy("exact")


def test_qmin_singleton():
    out = qmin(1, lambda u: 7)
    assert (out.result, out.queries) == (7, 1)


def test_qmin_nine_values():
    vals = [5, 3, 8, 1, 9, 2, 7, 4, 6]
    out = qmin(9, lambda u: vals[u], EXACT)
    assert (out.result, out.witness, out.queries) == (1, 3, 3)
    top = qmax(9, vals, EXACT)
    assert (top.result, top.witness, top.queries) == (9, 4, 3)


def test_ties_go_to_smallest_index():
    assert qmin(4, [2, 1, 1, 3]).witness == 1
    assert qmax(4, [3, 1, 3, 0]).witness == 0
    assert qmin(4, np.array([2.0, 1.0, 1.0, 3.0])).witness == 1


def test_qfind_examples():
    hit = qfind(4, lambda u: u == 2)
    assert (hit.result, hit.witness, hit.queries) == (True, 2, 2)
    miss = qfind(16, lambda u: False)
    assert (miss.result, miss.queries) == (False, 4)
    one = qfind(1, lambda u: True)
    assert (one.result, one.queries) == (True, 1)


def test_qfind_all_examples():
    syms = {0: "A", 5: "B", 7: "A"}
    out = qfind_all(9, lambda u: syms.get(u))
    assert out.result == {"A", "B"} and out.queries == 5
    none = qfind_all(9, lambda u: None)
    assert none.result == frozenset() and none.queries == 3
    single = qfind_all(1, lambda u: "A")
    assert single.result == {"A"} and single.queries == 1


def test_qfind_all_bits_matches_sets():
    masks = [0b01, 0, 0b10, 0b01]
    out = qfind_all_bits(4, masks)
    assert out.result == 0b11 and out.queries == search_charge(4, 1, 2)


def test_empty_domain_rejected():
    with pytest.raises(EmptyDomainError):
        qmin(0, [])
    with pytest.raises(EmptyDomainError):
        qfind(0, [])


def test_policy_validation():
    with pytest.raises(ValueError):
        ChargePolicy("quantum")
    with pytest.raises(ValueError):
        ChargePolicy("exact", 0)


@given(st.fractions(min_value=0, max_value=10**6))
def test_ceil_sqrt_exact(x):
    k = ceil_sqrt(x)
    assert k * k >= x
    assert k == 0 or (k - 1) ** 2 < x


@given(st.integers(1, 10**6), st.integers(0, 100))
def test_charge_formula(lam, marked):
    q = search_charge(lam, 1, marked)
    n = lam * max(marked, 1)
    assert q * q >= n and (q - 1) ** 2 < n


@given(st.integers(1, 10**5), st.fractions(min_value=Fraction(1, 10), max_value=10))
def test_scaled_charge_formula(lam, c):
    q = search_charge(lam, c)
    assert Fraction(q * q) >= c * c * lam
    assert q == 0 or Fraction((q - 1) ** 2) < c * c * lam


@given(st.integers(1, 5000))
def test_charge_monotone(lam):
    assert search_charge(lam) <= search_charge(lam + 1)


@settings(max_examples=60)
@given(st.lists(st.integers(-50, 50), min_size=1, max_size=300), st.integers(0, 2**32))
def test_answers_match_linear_scan(vals, seed):
    lam = len(vals)
    for policy in (ChargePolicy("exact"), ChargePolicy("mc", seed=seed)):
        rng = np.random.default_rng(seed)
        assert qmin(lam, vals, policy, rng=rng).result == min(vals)
        assert qmax(lam, vals, policy, rng=rng).result == max(vals)
        assert qmin(lam, np.array(vals, dtype=float), policy, rng=rng).result == min(vals)
        assert qmin(lam, vals, policy, key=lambda v: -v, rng=rng).result == max(vals)
    assert qfind(lam, [v > 40 for v in vals]).result == any(v > 40 for v in vals)
    assert qfind_all(lam, [v % 5 for v in vals]).result == {v % 5 for v in vals}


@settings(max_examples=50)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=500), st.integers(0, 2**32))
def test_mc_charge_at_least_verification(vals, seed):
    out = qmin(len(vals), np.array(vals), ChargePolicy("mc"), rng=np.random.default_rng(seed))
    assert out.queries >= search_charge(len(vals))


def test_mc_round_charge():
    assert mc_round_charge(16, 1) == 9  # ceil(9/4 * 4)
    assert mc_round_charge(16, 16) == 3  # ceil(9/4)


def test_mc_trials_n2_lower_bound():
    for seed in range(20):
        assert min(mc_qmin_trial_stats(2, 50, seed)) >= 2


def test_mc_trials_deterministic():
    assert mc_qmin_trial_stats(1024, 50, 7) == mc_qmin_trial_stats(1024, 50, 7)
    assert mc_qmin_trial_stats(1024, 50, 7) != mc_qmin_trial_stats(1024, 50, 8)


def test_mc_trials_n4096_budget():
    counts = mc_qmin_trial_stats(4096, 200, 0)
    assert 1 <= np.mean(counts) / 64 <= 23


def test_mc_trials_rejects_small_n():
    with pytest.raises(ValueError):
        mc_qmin_trial_stats(1, 10)
