"""Seeded random instance generators.

``random_*`` functions draw small instances for oracle cross-checks (sizes up
to ``max_size``). ``scaled_*`` functions draw an instance of a given size for
scaling sweeps. All take a ``numpy.random.Generator``.
"""
from __future__ import annotations

import itertools
import math
from typing import List, Tuple

import numpy as np

from .instances import (
    Cnf, CoinChange, Graph, Hmm, Knapsack, MatrixChain, PointSeries, Polygon, RnaString, Rod,
    SortedArray, TextSeg,
)


def _int(rng, lo, hi) -> int:
    """Uniform integer in [lo, hi]."""
    return int(rng.integers(lo, hi + 1))


def _size(rng, lo, max_size) -> int:
    return _int(rng, lo, max(lo, max_size))


# ---- graphs -------------------------------------------------------------

def erdos_renyi(rng, n: int, density: float, w_lo: int = 0, w_hi: int = 63) -> List[Tuple[int, int, int]]:
    """Each ordered pair u ≠ v is an arc with probability ``density``."""
    if n < 2:
        return []
    mask = rng.random((n, n)) < density
    np.fill_diagonal(mask, False)
    us, vs = np.nonzero(mask)
    ws = rng.integers(w_lo, w_hi + 1, size=us.size)
    return [(int(u), int(v), int(w)) for u, v, w in zip(us, vs, ws)]


def has_negative_cycle(n: int, edges) -> bool:
    """Any negative cycle at all (every vertex treated as a source)."""
    dist = [0] * n
    for _ in range(n):
        changed = False
        for u, v, w in edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            return False
    return True


def _random_graph(rng, max_size, with_source):
    n = _size(rng, 1, max_size)
    density = float(rng.uniform(0.1, 0.9))
    negative = bool(rng.random() < 0.5)
    while True:
        edges = erdos_renyi(rng, n, density, -8 if negative else 0, 63)
        if rng.random() < 0.2 and edges:
            u, v, _ = edges[_int(rng, 0, len(edges) - 1)]
            edges.append((u, v, _int(rng, 0, 63)))  # a parallel arc
        if not negative or not has_negative_cycle(n, edges):
            break
    source = _int(rng, 0, n - 1) if with_source else None
    return Graph(n, edges, source)


def random_sssp(rng, max_size=8) -> Graph:
    return _random_graph(rng, max_size, True)


def random_apsp(rng, max_size=8) -> Graph:
    return _random_graph(rng, max_size, False)


def planted_negative_cycle(rng, n: int, density: float = 0.3) -> Graph:
    """Non-negative random digraph plus a negative cycle reachable from vertex 0."""
    edges = erdos_renyi(rng, n, density, 0, 63)
    length = _int(rng, 2, max(2, min(n - 1, 5)))
    cycle = [int(v) for v in rng.choice(np.arange(1, n), size=length, replace=False)]
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        edges.append((a, b, _int(rng, -20, -1)))
    edges.append((0, cycle[0], _int(rng, 0, 63)))
    return Graph(n, edges, 0)


def no_negative_cycle(rng, n: int, density: float = 0.3) -> Graph:
    """Random digraph with some negative arcs but no negative cycle."""
    while True:
        edges = erdos_renyi(rng, n, density, -8, 63)
        if not has_negative_cycle(n, edges):
            return Graph(n, edges, 0)


# ---- other problems -----------------------------------------------------

def random_coinchange(rng, max_size=20) -> CoinChange:
    target = _size(rng, 0, max_size)
    pool = np.arange(1, max(target, 1) + 3)
    k = _int(rng, 1, min(4, pool.size))
    coins = sorted(int(c) for c in rng.choice(pool, size=k, replace=False))
    return CoinChange(coins, target)


def random_matrixchain(rng, max_size=9) -> MatrixChain:
    n = _size(rng, 2, max_size)
    return MatrixChain([_int(rng, 1, 30) for _ in range(n + 1)])


def convex_polygon(rng, n: int) -> Polygon:
    """Vertices at sorted random angles on a circle, listed clockwise."""
    while True:
        angles = np.sort(rng.uniform(0, 2 * math.pi, size=n))[::-1]
        if n < 3 or np.min(np.abs(np.diff(angles))) > 1e-3:
            break
    radius = float(rng.uniform(1, 10))
    return Polygon([(radius * math.cos(a), radius * math.sin(a)) for a in angles])


def random_mwt(rng, max_size=10) -> Polygon:
    return convex_polygon(rng, _size(rng, 3, max_size))


def random_sls(rng, max_size=12) -> PointSeries:
    n = _size(rng, 0, max_size)
    xs = sorted(int(x) for x in rng.choice(np.arange(0, 3 * n + 3), size=n, replace=False))
    pts = [(x, _int(rng, 0, 20)) for x in xs]
    return PointSeries(pts, round(float(rng.uniform(0.1, 10)), 3))


def random_rna(rng, max_size=14) -> RnaString:
    n = _size(rng, 0, max_size)
    return RnaString("".join(rng.choice(list("ACGU"), size=n)))


def random_rod(rng, max_size=20) -> Rod:
    n = _size(rng, 0, max_size)
    return Rod(n, [_int(rng, 1, 30) for _ in range(n)])


def random_lds(rng, max_size=14) -> SortedArray:
    n = _size(rng, 1, max_size)
    return SortedArray(sorted(_int(rng, 1, 40) for _ in range(n)))


def random_ukp(rng, max_size=20) -> Knapsack:
    cap = _size(rng, 0, max_size)
    items = [(_int(rng, 1, max(cap, 1) + 2), _int(rng, 0, 50)) for _ in range(_int(rng, 1, 4))]
    return Knapsack(cap, items)


def random_hmm(rng, states: int, symbols: int, length: int, sparse: bool = False) -> Hmm:
    def dist(k):
        p = rng.random(k)
        if sparse:
            p[rng.random(k) < 0.3] = 0
            if p.sum() == 0:
                p[_int(rng, 0, k - 1)] = 1
        p = p / p.sum()
        return [float(x) for x in p]

    return Hmm(dist(states), [dist(states) for _ in range(states)], [dist(symbols) for _ in range(states)],
               [_int(rng, 0, symbols - 1) for _ in range(length)])


def random_viterbi(rng, max_size=6) -> Hmm:
    return random_hmm(rng, _int(rng, 1, 3), _int(rng, 1, 3), _size(rng, 1, max_size), sparse=rng.random() < 0.3)


def random_textseg(rng, max_size=14) -> TextSeg:
    n = _size(rng, 0, max_size)
    text = "".join(rng.choice(list("ab"), size=n))
    words = ["".join(w) for l in (1, 2, 3) for w in itertools.product("ab", repeat=l)]
    k = _int(rng, 0, 5)
    dictionary = sorted(str(w) for w in rng.choice(words, size=k, replace=False)) if k else []
    return TextSeg(text, dictionary)


def random_cnf(rng, nonterminals: int, length: int, alphabet="ab") -> Cnf:
    names = ["S"] + [f"N{i}" for i in range(1, nonterminals)]
    triples = list(itertools.product(names, repeat=3))
    k = _int(rng, 1, min(len(triples), 3 * nonterminals))
    binary = [tuple(triples[i]) for i in sorted(rng.choice(len(triples), size=k, replace=False))]
    terminal = []
    for ch in alphabet:
        for a in names:
            if rng.random() < 0.4:
                terminal.append((a, ch))
    text = "".join(rng.choice(list(alphabet), size=length))
    return Cnf(names, "S", binary, terminal, text)


def random_cyk(rng, max_size=8) -> Cnf:
    return random_cnf(rng, _int(rng, 1, 5), _size(rng, 1, max_size))


# ---- scaling sweeps -----------------------------------------------------

# A fixed grammar over {a, b} with three nonterminals.
SWEEP_GRAMMAR = dict(
    nonterminals=["S", "A", "B"],
    start="S",
    binary=[("S", "A", "B"), ("S", "B", "A"), ("S", "S", "S"), ("A", "A", "S"), ("B", "S", "B")],
    terminal=[("A", "a"), ("B", "b"), ("S", "a")],
)


def scaled_sssp(rng, n, density=0.25):
    return Graph(n, erdos_renyi(rng, n, density), 0)


def scaled_apsp(rng, n, density=0.25):
    return Graph(n, erdos_renyi(rng, n, density))


def scaled_cyk(rng, n):
    return Cnf(input="".join(rng.choice(list("ab"), size=n)), **SWEEP_GRAMMAR)


def scaled_coinchange(rng, n):
    """Target n with about n/2 denominations, so generating sets grow linearly."""
    pool = np.arange(2, n + 1)
    picked = pool[rng.random(pool.size) < 0.5]
    return CoinChange([1] + [int(c) for c in picked], n)


def scaled_rodcutting(rng, n):
    return Rod(n, [_int(rng, 1, 3 * n) for _ in range(n)])


def scaled_sls(rng, n):
    return PointSeries([(x, _int(rng, 0, 100)) for x in range(n)], 10.0)


def scaled_textseg(rng, n):
    return TextSeg("".join(rng.choice(list("ab"), size=n)), ["a", "b", "ab", "ba", "aab"])


def scaled_lds(rng, n):
    return SortedArray(sorted(int(v) for v in rng.choice(np.arange(1, 10 * n + 1), size=n, replace=False)))


def scaled_ukp(rng, n):
    items = [(_int(rng, 1, n), _int(rng, 1, 100)) for _ in range(max(1, n // 2))]
    return Knapsack(n, items)


def scaled_matrixchain(rng, n):
    return MatrixChain([_int(rng, 1, 30) for _ in range(n + 1)])


def scaled_mwt(rng, n):
    return convex_polygon(rng, n)


def scaled_rna(rng, n):
    return RnaString("".join(rng.choice(list("ACGU"), size=n)))


def scaled_viterbi(rng, n, states=4, symbols=3):
    return random_hmm(rng, states, symbols, n)
