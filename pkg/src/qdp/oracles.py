"""Reference solvers used as ground truth.

Nothing here touches the recurrence engine. ``classical_reference`` runs
textbook algorithms; ``brute_force`` enumerates whole solution spaces and
refuses instances above its size caps.
"""
from __future__ import annotations

import hashlib
import heapq
import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List

import numpy as np

from .core import QDPError
from .problems.instances import RNA_PAIRS

INF = math.inf


class RefusalError(QDPError):
    """The instance is larger than the brute-force enumerator accepts."""


@dataclass(frozen=True)
class OracleReport:
    value: Any
    method: str
    fingerprint: str


def fingerprint(problem: str, inst) -> str:
    blob = json.dumps({"problem": problem, "instance": inst.to_json()}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


# Brute-force caps, keyed by problem, as (size attribute description, limit).
CAPS: Dict[str, int] = {
    "mwt": 12, "rna": 14, "rodcutting": 20, "coinchange": 20, "ukp": 20, "lds": 16, "textseg": 16,
    "cyk": 12, "matrixchain": 10, "sssp": 8, "apsp": 8, "sls": 16, "viterbi": 10**6,
}


def _brute_size(problem: str, inst) -> int:
    if problem == "viterbi":
        return len(inst.pi) ** len(inst.obs)
    from .problems.registry import get
    return get(problem).size(inst)


# ---- classical references -----------------------------------------------

def _dijkstra(n, adj, s):
    dist = [INF] * n
    dist[s] = 0
    heap = [(0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            if d + w < dist[v]:
                dist[v] = d + w
                heapq.heappush(heap, (dist[v], v))
    return dist


def bellman_ford(n, edges, s):
    """Distances from ``s`` and whether a reachable negative cycle exists."""
    dist = [INF] * n
    dist[s] = 0
    for _ in range(n - 1):
        for u, v, w in edges:
            if dist[u] != INF and dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
    cycle = any(dist[u] != INF and dist[u] + w < dist[v] for u, v, w in edges)
    return dist, cycle


def _sssp_classical(inst):
    if all(w >= 0 for _, _, w in inst.edges):
        adj = [[] for _ in range(inst.n)]
        for u, v, w in inst.edges:
            adj[u].append((v, w))
        return _dijkstra(inst.n, adj, inst.source)
    return bellman_ford(inst.n, inst.edges, inst.source)[0]


def _floyd_warshall(inst):
    n = inst.n
    d = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v, w in inst.edges:
        if u != v and w < d[u][v]:
            d[u][v] = w
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def _coin_classical(inst):
    best = [0] + [INF] * inst.target
    for amount in range(1, inst.target + 1):
        for c in inst.denominations:
            if c <= amount and best[amount - c] + 1 < best[amount]:
                best[amount] = best[amount - c] + 1
    return best[inst.target]


def _chain_classical(inst):
    p = inst.dims
    n = len(p) - 1
    m = [[0] * n for _ in range(n)]
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            j = i + length - 1
            m[i][j] = min(m[i][k] + m[k + 1][j] + p[i] * p[k + 1] * p[j + 1] for k in range(i, j))
    return m[0][n - 1]


def _dist(a, b):
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _perimeter(pts):
    return sum(_dist(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts)))


def _mwt_classical(inst):
    # Minimum total triangle perimeter; each diagonal is shared by two triangles,
    # so perimeter plus diagonals is (triangles + perimeter) / 2.
    pts = inst.points
    n = len(pts)
    t = [[0.0] * n for _ in range(n)]
    for gap in range(2, n):
        for i in range(n - gap):
            j = i + gap
            t[i][j] = min(t[i][k] + t[k][j] + _dist(pts[i], pts[k]) + _dist(pts[k], pts[j]) + _dist(pts[i], pts[j])
                          for k in range(i + 1, j))
    return (t[0][n - 1] + _perimeter(pts)) / 2


def _fit_error(pts) -> float:
    if len(pts) <= 2:
        return 0.0
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=float)
    design = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(np.sum((y - design @ coef) ** 2))


def _sls_classical(inst):
    pts = inst.points
    n = len(pts)
    opt = [0.0] + [INF] * n
    for j in range(1, n + 1):
        opt[j] = min(_fit_error(pts[i:j]) + inst.penalty + opt[i] for i in range(j))
    return opt[n]


def _rna_classical(inst):
    s = inst.bases
    n = len(s)
    if n == 0:
        return 0
    opt = [[0] * (n + 1) for _ in range(n + 1)]  # opt[i][j] for 0-based i..j; j = i-1 means empty
    for span in range(6, n + 1):
        for i in range(n - span + 1):
            j = i + span - 1
            best = opt[i][j - 1]
            for t in range(i, j - 3):
                if (s[t], s[j]) in RNA_PAIRS:
                    left = opt[i][t - 1] if t > i else 0
                    best = max(best, 1 + left + opt[t + 1][j - 1])
            opt[i][j] = best
    return opt[0][n - 1]


def _rod_classical(inst):
    r = [0] * (inst.n + 1)
    for j in range(1, inst.n + 1):
        r[j] = max(inst.prices[i - 1] + r[j - i] for i in range(1, j + 1))
    return r[inst.n]


def _lds_classical(inst):
    a = inst.values
    size = [1] * len(a)
    for j in range(len(a)):
        for i in range(j):
            if a[j] % a[i] == 0:
                size[j] = max(size[j], size[i] + 1)
    return max(size)


def _ukp_classical(inst):
    dp = [0] * (inst.capacity + 1)
    for c in range(1, inst.capacity + 1):
        for w, v in inst.items:
            if w <= c:
                dp[c] = max(dp[c], dp[c - w] + v)
    return dp[inst.capacity]


def _viterbi_classical(inst):
    k = len(inst.pi)
    prob = [inst.pi[j] * inst.b[j][inst.obs[0]] for j in range(k)]
    for o in inst.obs[1:]:
        prob = [max(prob[i] * inst.a[i][j] for i in range(k)) * inst.b[j][o] for j in range(k)]
    return max(prob)


def _textseg_classical(inst):
    text, words = inst.text, set(inst.dictionary)
    n = len(text)
    ok = [True] + [False] * n  # ok[i]: prefix of length i splits into words
    for i in range(1, n + 1):
        ok[i] = any(ok[j] and text[j:i] in words for j in range(i))
    return ok[n]


def _cyk_classical(inst):
    w = inst.input
    n = len(w)
    table = [[set() for _ in range(n)] for _ in range(n)]  # table[i][j]: span w[i..j]
    for i, ch in enumerate(w):
        table[i][i] = {a for a, t in inst.terminal if t == ch}
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            j = i + span - 1
            for k in range(i, j):
                for a, b, c in inst.binary:
                    if b in table[i][k] and c in table[k + 1][j]:
                        table[i][j].add(a)
    return inst.start in table[0][n - 1]


_CLASSICAL = {
    "coinchange": _coin_classical, "matrixchain": _chain_classical, "sssp": _sssp_classical,
    "apsp": _floyd_warshall, "mwt": _mwt_classical, "sls": _sls_classical, "rna": _rna_classical,
    "rodcutting": _rod_classical, "lds": _lds_classical, "ukp": _ukp_classical,
    "viterbi": _viterbi_classical, "textseg": _textseg_classical, "cyk": _cyk_classical,
}


def classical_reference(problem: str, inst) -> OracleReport:
    return OracleReport(_CLASSICAL[problem](inst), "classical-reference", fingerprint(problem, inst))


# ---- brute force --------------------------------------------------------

def _multisets(weights, limit):
    """Yield count vectors over ``weights`` whose weighted total is ≤ ``limit``."""
    def rec(i, room):
        if i == len(weights):
            yield ()
            return
        for c in range(room // weights[i] + 1):
            for rest in rec(i + 1, room - c * weights[i]):
                yield (c,) + rest
    yield from rec(0, limit)


def _coin_brute(inst):
    coins = inst.denominations
    best = INF
    for counts in _multisets(coins, inst.target):
        if sum(c * d for c, d in zip(counts, coins)) == inst.target:
            best = min(best, sum(counts))
    return best


def _rod_brute(inst):
    lengths = list(range(1, inst.n + 1))
    best = 0
    for counts in _multisets(lengths, inst.n):
        if sum(c * l for c, l in zip(counts, lengths)) == inst.n:
            best = max(best, sum(c * inst.prices[l - 1] for c, l in zip(counts, lengths)))
    return best


def _ukp_brute(inst):
    weights = [w for w, _ in inst.items]
    return max(sum(c * v for c, (_, v) in zip(counts, inst.items))
               for counts in _multisets(weights, inst.capacity))


def _parenthesizations(i, j, p):
    """Costs of every full parenthesization of matrices i..j."""
    if i == j:
        yield 0
        return
    for k in range(i, j):
        for left in _parenthesizations(i, k, p):
            for right in _parenthesizations(k + 1, j, p):
                yield left + right + p[i] * p[k + 1] * p[j + 1]


def _chain_brute(inst):
    return min(_parenthesizations(0, len(inst.dims) - 2, inst.dims))


def _triangulations(i, j):
    """Every triangulation of polygon i..j as a list of diagonals."""
    if j - i < 2:
        yield []
        return
    for k in range(i + 1, j):
        for left in _triangulations(i, k):
            for right in _triangulations(k, j):
                chords = [(a, b) for a, b in ((i, k), (k, j)) if b - a > 1]
                yield left + right + chords


def _mwt_brute(inst):
    pts = inst.points
    n = len(pts)
    perim = _perimeter(pts)
    return min(perim + sum(_dist(pts[a], pts[b]) for a, b in tri) for tri in _triangulations(0, n - 1))


def _compositions(n):
    """Every way to cut range(n) into consecutive non-empty runs, as boundary lists."""
    for cuts in itertools.product((False, True), repeat=max(n - 1, 0)):
        bounds = [0] + [i + 1 for i, c in enumerate(cuts) if c] + [n]
        yield list(zip(bounds, bounds[1:]))


def _sls_brute(inst):
    pts = inst.points
    if not pts:
        return 0.0
    errs = {}
    best = INF
    for runs in _compositions(len(pts)):
        total = 0.0
        for a, b in runs:
            if (a, b) not in errs:
                errs[a, b] = _fit_error(pts[a:b])
            total += errs[a, b] + inst.penalty
        best = min(best, total)
    return best


def rna_pair_legal(pairs) -> bool:
    """Legality of a set of base-pair positions beyond base complementarity.

    Pairs must be non-crossing and at least 4 apart. A pair exactly 4 apart
    must not sit at the very start of its enclosing region: the region is the
    interior of the innermost enclosing pair, or the whole string.
    """
    pairs = sorted(pairs)
    for t, j in pairs:
        if j - t < 4:
            return False
    for (a, b), (c, d) in itertools.combinations(pairs, 2):
        if a < c < b < d or c < a < d < b:
            return False
    for t, j in pairs:
        if j - t != 4:
            continue
        enclosing = [(a, b) for a, b in pairs if a < t and j < b]
        left_end = max(enclosing)[0] + 1 if enclosing else 0
        if t <= left_end:
            return False
    return True


def _rna_matchings(s):
    """Every non-crossing set of complementary pairs at least 4 apart."""
    n = len(s)

    def rec(i, end):
        # structures within positions i..end-1
        if i >= end:
            yield []
            return
        yield from rec(i + 1, end)
        for j in range(i + 4, end):
            if (s[i], s[j]) in RNA_PAIRS:
                for inner in rec(i + 1, j):
                    for outer in rec(j + 1, end):
                        yield [(i, j)] + inner + outer
    return rec(0, n)


def _rna_brute(inst):
    return max(len(m) for m in _rna_matchings(inst.bases) if rna_pair_legal(m))


def _lds_brute(inst):
    a = inst.values
    best = 1
    for r in range(2, len(a) + 1):
        for sub in itertools.combinations(a, r):
            if all(y % x == 0 for x, y in itertools.combinations(sub, 2)):
                best = max(best, r)
    return best


def _viterbi_brute(inst):
    k = len(inst.pi)
    best = 0.0
    for path in itertools.product(range(k), repeat=len(inst.obs)):
        p = inst.pi[path[0]] * inst.b[path[0]][inst.obs[0]]
        for t in range(1, len(path)):
            p *= inst.a[path[t - 1]][path[t]] * inst.b[path[t]][inst.obs[t]]
        best = max(best, p)
    return best


def _textseg_brute(inst):
    words = set(inst.dictionary)
    return any(all(inst.text[a:b] in words for a, b in runs) for runs in _compositions(len(inst.text))) \
        if inst.text else True


def _cyk_brute(inst):
    """Leftmost-derivation search over sentential forms, pruned by the input."""
    w = inst.input
    n = len(w)
    names = set(inst.nonterminals)
    rules: Dict[str, List[tuple]] = {a: [] for a in inst.nonterminals}
    for a, b, c in inst.binary:
        rules[a].append((b, c))
    for a, ch in inst.terminal:
        rules[a].append((ch,))
    seen = set()
    stack = [(inst.start,)]
    while stack:
        form = stack.pop()
        if form in seen:
            continue
        seen.add(form)
        k = 0
        while k < len(form) and form[k] not in names:
            k += 1
        if k == len(form):
            if "".join(form) == w:
                return True
            continue
        for body in rules[form[k]]:
            new = form[:k] + body + form[k + 1:]
            # every symbol yields at least one character, and the terminal prefix is fixed
            if len(new) > n:
                continue
            prefix = 0
            while prefix < len(new) and new[prefix] not in names:
                prefix += 1
            if "".join(new[:prefix]) != w[:prefix]:
                continue
            stack.append(new)
    return False


def _simple_paths(n, arcs, s):
    """Minimum weight over all simple paths from ``s`` to each vertex."""
    adj = [[] for _ in range(n)]
    for (u, v), w in arcs.items():
        adj[u].append((v, w))
    best = [INF] * n
    on_path = [False] * n

    def dfs(u, d):
        best[u] = min(best[u], d)
        on_path[u] = True
        for v, w in adj[u]:
            if not on_path[v]:
                dfs(v, d + w)
        on_path[u] = False

    dfs(s, 0)
    return best


def _min_arcs(inst):
    arcs = {}
    for u, v, w in inst.edges:
        if u != v and ((u, v) not in arcs or w < arcs[u, v]):
            arcs[u, v] = w
    return arcs


def _sssp_brute(inst):
    return _simple_paths(inst.n, _min_arcs(inst), inst.source)


def _apsp_brute(inst):
    arcs = _min_arcs(inst)
    return [_simple_paths(inst.n, arcs, s) for s in range(inst.n)]


_BRUTE = {
    "coinchange": _coin_brute, "matrixchain": _chain_brute, "sssp": _sssp_brute, "apsp": _apsp_brute,
    "mwt": _mwt_brute, "sls": _sls_brute, "rna": _rna_brute, "rodcutting": _rod_brute, "lds": _lds_brute,
    "ukp": _ukp_brute, "viterbi": _viterbi_brute, "textseg": _textseg_brute, "cyk": _cyk_brute,
}


def brute_force(problem: str, inst) -> OracleReport:
    size = _brute_size(problem, inst)
    if size > CAPS[problem]:
        raise RefusalError(f"{problem} instance of size {size} exceeds the brute-force cap {CAPS[problem]}")
    return OracleReport(_BRUTE[problem](inst), "brute-force", fingerprint(problem, inst))


def values_agree(a, b, real: bool = False, rel: float = 1e-9) -> bool:
    """Exact equality, or relative closeness for real-valued answers; recurses into lists."""
    if isinstance(a, (list, tuple)) or isinstance(b, (list, tuple)):
        return len(a) == len(b) and all(values_agree(x, y, real, rel) for x, y in zip(a, b))
    if real:
        if math.isinf(a) or math.isinf(b):
            return a == b
        return math.isclose(a, b, rel_tol=rel, abs_tol=0.0)
    return a == b
