"""Dependency digraph of a recurrence: sizes, degrees, simplicity and degree buckets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .core import Op, QTable, RecurrenceSpec, SpecValidationError, lex_iter
from .qsearch import search_charge


@dataclass
class DependencyDigraph:
    """Out-degree view of the digraph; explicit arcs are kept only on request.

    Arrays are indexed by flat (C-order) cell position.
    """

    dims: Tuple[int, ...]
    h: int
    recursive: np.ndarray
    lam: np.ndarray
    arcs: Optional[List[Tuple[tuple, tuple]]] = None

    @property
    def node_count(self) -> int:
        return int(self.recursive.size)

    @property
    def out_degree(self) -> np.ndarray:
        return self.lam * self.h

    @property
    def arc_count(self) -> int:
        return int(self.lam.sum()) * self.h

    @property
    def recursive_count(self) -> int:
        return int(self.recursive.sum())

    def base_nodes(self) -> List[tuple]:
        coords = np.unravel_index(np.flatnonzero(~self.recursive), self.dims)
        return list(zip(*(c.tolist() for c in coords)))

    def degree_of(self, idx) -> int:
        return int(self.out_degree[np.ravel_multi_index(tuple(idx), self.dims)])


@dataclass
class DegreeStats:
    delta: Fraction
    max_out_degree: int
    buckets: List[Tuple[int, int]] = field(default_factory=list)


def build_depgraph(spec: RecurrenceSpec, table: Optional[QTable] = None, explicit: bool = False) -> DependencyDigraph:
    """Digraph of ``spec``; pass a finished run's table to reuse its base/recursive split.

    With ``explicit`` every arc is enumerated through ``gamma`` (anchors are
    not arcs) and checked to point at a lexicographically smaller cell.
    """
    size = math.prod(spec.dims)
    if table is not None:
        recursive = table.updated_mask()
        cells = table.updated_cells()
    else:
        recursive = np.zeros(size, dtype=bool)
        cells = []
        for pos, idx in enumerate(lex_iter(spec.dims)):
            if spec.f_init(idx) is None:
                recursive[pos] = True
                cells.append(idx)
    lam = np.zeros(size, dtype=np.int64)
    lam[recursive] = [spec.f_C(idx) for idx in cells]
    if (lam < 0).any():
        raise SpecValidationError("negative generating-set size")
    arcs = None
    if explicit:
        arcs = []
        for idx in cells:
            for u in range(spec.f_C(idx)):
                for dep in spec.gamma(idx, u):
                    dep = tuple(dep)
                    if not dep < idx:
                        raise SpecValidationError(f"arc {idx} -> {dep} does not point to a smaller cell")
                    arcs.append((idx, dep))
    return DependencyDigraph(spec.dims, spec.h, recursive, lam, arcs)


def delta_of(g: DependencyDigraph) -> Fraction:
    return Fraction(2 * g.arc_count, g.node_count)


def _threshold(i: int, delta: Fraction) -> Fraction:
    return 2 ** (2 ** (i - 1)) * delta


def degree_stats(g: DependencyDigraph) -> DegreeStats:
    """Average degree and the doubly-exponential degree buckets V_0, V_1, ...

    V_0 holds out-degrees below 2δ and V_i (i ≥ 1) those in
    [2^(2^(i-1))·δ, 2^(2^i)·δ).
    """
    if g.node_count < 1:
        raise ValueError("empty digraph")
    delta = delta_of(g)
    deg = g.out_degree
    max_deg = int(deg.max())
    if delta == 0:
        return DegreeStats(delta, max_deg, [(0, g.node_count)])
    ordered = np.sort(deg)

    def count_below(t: Fraction) -> int:
        # Degrees are integers, so deg < t  <=>  deg < ceil(t).
        return int(np.searchsorted(ordered, math.ceil(t), side="left"))

    buckets = [(0, count_below(2 * delta))]
    i = 1
    while _threshold(i, delta) <= max_deg:
        lo, hi = _threshold(i, delta), _threshold(i + 1, delta)
        buckets.append((i, count_below(hi) - count_below(lo)))
        i += 1
    return DegreeStats(delta, max_deg, buckets)


def bucket_bound_check(stats: DegreeStats, g: DependencyDigraph) -> bool:
    """Markov-form check: for each i ≥ 1, #{deg ≥ t_i}·t_i ≤ arcs with t_i = 2^(2^(i-1))·δ."""
    if stats.delta == 0:
        return True
    ordered = np.sort(g.out_degree)
    i = 1
    while True:
        t = _threshold(i, stats.delta)
        heavy = ordered.size - int(np.searchsorted(ordered, math.ceil(t), side="left"))
        if heavy * t > g.arc_count:
            return False
        if heavy == 0:
            return True
        i += 1


def verify_simple(spec: RecurrenceSpec, g: Optional[DependencyDigraph] = None) -> bool:
    """True iff no dependency tuple is shared by two generating elements of a cell."""
    cells = (
        [tuple(int(c) for c in p) for p in zip(*np.unravel_index(np.flatnonzero(g.recursive), g.dims))]
        if g is not None
        else [idx for idx in lex_iter(spec.dims) if spec.f_init(idx) is None]
    )
    for idx in cells:
        lam = spec.f_C(idx)
        deps = set()
        for u in range(lam):
            X = spec.gamma(idx, u)
            if len(X) != spec.h:
                return False
            deps.update(tuple(d) for d in X)
        if len(deps) != spec.h * lam:
            return False
    return True


def expected_charge(spec: RecurrenceSpec, g: DependencyDigraph, table: Optional[QTable] = None,
                    c_search=1) -> int:
    """Exact-mode oracle total recomputed from out-degrees (and findAll set sizes)."""
    lam = g.out_degree // g.h
    positions = np.flatnonzero(g.recursive & (lam > 0))
    if spec.op is Op.FIND_ALL:
        if table is None:
            raise ValueError("findAll charges depend on the computed sets; pass the table")
        marked = [int(table.values[p]).bit_count() for p in positions]
    else:
        marked = [1] * positions.size
    return sum(search_charge(int(lam[p]), c_search, m) for p, m in zip(positions, marked))


def cauchy_schwarz_holds(queries: int, nodes: int, arcs: int) -> bool:
    """queries ≤ nodes + √(nodes·arcs), decided in exact integer arithmetic."""
    excess = queries - nodes
    return excess <= 0 or excess * excess <= nodes * arcs
