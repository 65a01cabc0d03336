"""Simulated quantum search primitives.

Every primitive returns the exact classical answer; only the number of
oracle queries it is charged follows the quantum cost model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence, Union

import numpy as np

from .core import SYMBOL_CAPACITY, CapacityError, QDPError, natural

ROUND_CONSTANT = Fraction(9, 4)


class EmptyDomainError(QDPError, ValueError):
    """A search primitive was asked to search over zero candidates."""


@dataclass(frozen=True)
class ChargePolicy:
    mode: str = "exact"
    c_search: Fraction = Fraction(1)
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exact", "mc"):
            raise ValueError(f"unknown charge mode {self.mode!r}")
        c = Fraction(self.c_search)
        if c <= 0:
            raise ValueError("c_search must be positive")
        object.__setattr__(self, "c_search", c)


@dataclass
class SearchOutcome:
    result: Any
    witness: Optional[int]
    queries: int
    evaluations: int


def ceil_sqrt(x: Fraction) -> int:
    """Exact ceiling of the square root of a non-negative rational."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    n = math.ceil(x)  # k*k >= x  <=>  k*k >= ceil(x) for integer k
    if n == 0:
        return 0
    return math.isqrt(n - 1) + 1


def search_charge(lam: int, c_search=1, marked: int = 1) -> int:
    """⌈c·√(λ·max(M,1))⌉; with the default M this is the min/max/find charge."""
    n = lam * max(marked, 1)
    if c_search == 1:
        return math.isqrt(n - 1) + 1 if n > 0 else 0
    c = Fraction(c_search)
    return ceil_sqrt(c * c * n)


def mc_round_charge(lam: int, improving: int, c_search=1) -> int:
    c = Fraction(c_search) * ROUND_CONSTANT
    return ceil_sqrt(c * c * Fraction(lam, improving))


def _values(lam: int, evaluate) -> list:
    if lam < 1:
        raise EmptyDomainError("search over an empty candidate set")
    if callable(evaluate):
        return [evaluate(u) for u in range(lam)]
    if len(evaluate) != lam:
        raise ValueError(f"expected {lam} candidate values, got {len(evaluate)}")
    return evaluate


def _mc_charge(keys: np.ndarray, rng: np.random.Generator, c_search) -> int:
    """Charge of one Monte-Carlo minimum-finding run over ``keys``.

    Keys need not be distinct; an improving candidate is one whose key is
    strictly below the current threshold.
    """
    lam = keys.size
    ordered = np.sort(keys, kind="stable")
    threshold = keys[rng.integers(lam)]
    total = 0
    while True:
        improving = int(np.searchsorted(ordered, threshold, side="left"))
        if improving == 0:
            return total + search_charge(lam, c_search)
        total += mc_round_charge(lam, improving, c_search)
        threshold = ordered[rng.integers(improving)]


def _extremum(lam, evaluate, policy, key, rng, sign) -> SearchOutcome:
    policy = policy or ChargePolicy()
    values = _values(lam, evaluate)
    key = key or natural
    if isinstance(values, np.ndarray) and key is natural:
        keys = values.astype(np.float64) * sign
        best = int(np.argmin(keys))
    else:
        keys = [key(v) for v in values]
        best = 0
        for u in range(1, lam):
            if (keys[u] < keys[best]) if sign > 0 else (keys[u] > keys[best]):
                best = u
        if policy.mode == "mc":
            # Rank-transform so the schedule only sees an order, not the values.
            order = sorted(range(lam), key=lambda u: keys[u], reverse=sign < 0)
            ranks = np.empty(lam, dtype=np.int64)
            r = -1
            prev = object()
            for u in order:
                if r < 0 or keys[u] != prev:
                    r += 1
                    prev = keys[u]
                ranks[u] = r
            keys = ranks
    if policy.mode == "mc":
        rng = rng if rng is not None else np.random.default_rng(policy.seed)
        queries = _mc_charge(np.asarray(keys), rng, policy.c_search)
    else:
        queries = search_charge(lam, policy.c_search)
    return SearchOutcome(values[best], best, queries, lam)


def qmin(lam: int, evaluate: Union[Callable[[int], Any], Sequence], policy: Optional[ChargePolicy] = None,
         key: Optional[Callable] = None, rng: Optional[np.random.Generator] = None) -> SearchOutcome:
    """Minimum of ``evaluate`` over ``range(lam)``; ties go to the smallest u."""
    return _extremum(lam, evaluate, policy, key, rng, 1)


def qmax(lam: int, evaluate: Union[Callable[[int], Any], Sequence], policy: Optional[ChargePolicy] = None,
         key: Optional[Callable] = None, rng: Optional[np.random.Generator] = None) -> SearchOutcome:
    """Maximum of ``evaluate`` over ``range(lam)``; ties go to the smallest u."""
    return _extremum(lam, evaluate, policy, key, rng, -1)


def qfind(lam: int, pred, policy: Optional[ChargePolicy] = None) -> SearchOutcome:
    """Whether any candidate satisfies ``pred``, with the smallest witness."""
    policy = policy or ChargePolicy()
    values = _values(lam, pred)
    if isinstance(values, np.ndarray):
        hits = np.flatnonzero(values)
        witness = int(hits[0]) if hits.size else None
    else:
        witness = next((u for u in range(lam) if values[u]), None)
    return SearchOutcome(witness is not None, witness, search_charge(lam, policy.c_search), lam)


def qfind_all(lam: int, evaluate, policy: Optional[ChargePolicy] = None) -> SearchOutcome:
    """Union of the symbols produced over ``range(lam)``.

    A candidate may produce ``None``, a single symbol, or an iterable of
    symbols. The result is a frozenset of symbols.
    """
    policy = policy or ChargePolicy()
    found = set()
    for v in _values(lam, evaluate):
        if v is None:
            continue
        if isinstance(v, (set, frozenset, list, tuple)):
            found.update(v)
        else:
            found.add(v)
    if len(found) > SYMBOL_CAPACITY:
        raise CapacityError(f"{len(found)} symbols exceed the alphabet capacity {SYMBOL_CAPACITY}")
    return SearchOutcome(frozenset(found), None, search_charge(lam, policy.c_search, len(found)), lam)


def qfind_all_bits(lam: int, masks, policy: Optional[ChargePolicy] = None) -> SearchOutcome:
    """``qfind_all`` over candidates already encoded as 64-bit symbol masks."""
    policy = policy or ChargePolicy()
    masks = np.asarray(_values(lam, masks), dtype=np.uint64)
    union = int(np.bitwise_or.reduce(masks)) if masks.size else 0
    return SearchOutcome(union, None, search_charge(lam, policy.c_search, union.bit_count()), lam)


def mc_qmin_trial_stats(n: int, trials: int, seed: int = 0, c_search=1) -> list:
    """Query counts of ``trials`` independent Monte-Carlo minimum searches over n random values."""
    if n < 2:
        raise ValueError("need at least 2 candidates")
    if trials < 1:
        raise ValueError("need at least 1 trial")
    rng = np.random.default_rng(seed)
    counts = []
    for _ in range(trials):
        values = rng.random(n)
        counts.append(_mc_charge(values, rng, c_search))
    return counts


__all__ = [
    "ChargePolicy", "SearchOutcome", "EmptyDomainError", "ceil_sqrt", "search_charge",
    "mc_round_charge", "qmin", "qmax", "qfind", "qfind_all", "qfind_all_bits",
    "mc_qmin_trial_stats",
]
