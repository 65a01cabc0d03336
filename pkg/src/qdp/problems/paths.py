"""Path adapters: single-source shortest paths, all-pairs shortest paths and Viterbi."""
from __future__ import annotations

import math
from typing import Dict, List, Tuple

import numpy as np

from ..core import POS_INF, Op, RecurrenceSpec, Target, ValueKind, ext_add
from .instances import Graph, Hmm, safe_log


def _predecessors(g: Graph) -> Tuple[List[List[int]], List[List[int]]]:
    arcs = g.min_arcs()
    preds: List[List[int]] = [[] for _ in range(g.n)]
    weights: List[List[int]] = [[] for _ in range(g.n)]
    for (u, v), w in sorted(arcs.items()):
        preds[v].append(u)
        weights[v].append(w)
    return preds, weights


def sssp_spec(inst: Graph) -> RecurrenceSpec:
    """Row i holds shortest distances using at most i arcs.

    D[i][j] = min over in-arcs k → j of min(D[i-1][j], D[i-1][k] + w). The
    carried term D[i-1][j] is an anchor, and a vertex without in-arcs simply
    copies it.
    """
    if inst.source is None:
        raise ValueError("single-source shortest paths needs a source vertex")
    n, s = inst.n, inst.source
    preds, weights = _predecessors(inst)
    # Column j's carried cell followed by its predecessors, for one gather per cell.
    reads = [np.array([j] + p, dtype=np.intp) for j, p in enumerate(preds)]
    w_arr = [np.array(w, dtype=np.float64) for w in weights]

    def f_init(idx):
        i, j = idx
        if i == 0:
            return 0 if j == s else POS_INF
        return None

    def f_C(idx):
        return len(preds[idx[1]])

    def gamma(idx, u):
        i, j = idx
        return ((i - 1, preds[j][u]),)

    def anchors(idx):
        i, j = idx
        return ((i - 1, j),)

    def f_P(idx, X, read):
        i, j = idx
        k = X[0][1]
        via = ext_add(read(X[0]), weights[j][preds[j].index(k)])
        return min(read((i - 1, j)), via)

    def batch(idx, table):
        i, j = idx
        got = table.gather((i - 1) * n + reads[j])
        return np.minimum(got[0], got[1:] + w_arr[j])

    return RecurrenceSpec(
        dims=(n, n), op=Op.MIN, h=1, f_init=f_init, f_C=f_C, gamma=gamma, f_P=f_P,
        kind=ValueKind.EXT_INT, target=Target((n - 1,)), anchors=anchors,
        empty_value=lambda idx, read: read((idx[0] - 1, idx[1])), batch=batch, name="sssp",
    )


def detect_negative_cycle(distances, inst: Graph) -> bool:
    """True iff some arc still relaxes the final distance row."""
    for (k, j), w in inst.min_arcs().items():
        dk, dj = distances[k], distances[j]
        if math.isinf(dk) and dk > 0:
            continue
        if dk + w < dj:
            return True
    return False


def apsp_stages(n: int) -> int:
    """Number of squaring stages so that 2**stages ≥ n - 1."""
    return math.ceil(math.log2(n - 1)) if n > 2 else 0


def apsp_spec(inst: Graph) -> RecurrenceSpec:
    """Stage s holds distances over paths of at most 2**s arcs.

    D[s][i][j] = min over intermediate k of min(D[s-1][i][j], D[s-1][i][k] + D[s-1][k][j]).
    Intermediates exclude i and j themselves (k ≠ i on the diagonal): those
    choices only reproduce the carried term D[s-1][i][j], which is an anchor.
    """
    n = inst.n
    L = apsp_stages(n)
    base = np.full((n, n), POS_INF)
    for (u, v), w in inst.min_arcs().items():
        if u != v:
            base[u, v] = min(base[u, v], w)
    np.fill_diagonal(base, 0)
    every = np.arange(n)
    mids = {}
    for i in range(n):
        for j in range(n):
            mids[i, j] = every[(every != i) & (every != j)]

    def f_init(idx):
        s, i, j = idx
        if s == 0:
            v = base[i, j]
            return v if math.isinf(v) else int(v)
        return None

    def f_C(idx):
        return len(mids[idx[1], idx[2]])

    def gamma(idx, u):
        s, i, j = idx
        k = int(mids[i, j][u])
        return ((s - 1, i, k), (s - 1, k, j))

    def anchors(idx):
        s, i, j = idx
        return ((s - 1, i, j),)

    def f_P(idx, X, read):
        s, i, j = idx
        return min(read((s - 1, i, j)), ext_add(read(X[0]), read(X[1])))

    def batch(idx, table):
        s, i, j = idx
        off = (s - 1) * n * n
        ks = mids[i, j]
        carry = table.gather([off + i * n + j])[0]
        return np.minimum(carry, table.gather(off + i * n + ks) + table.gather(off + ks * n + j))

    return RecurrenceSpec(
        dims=(L + 1, n, n), op=Op.MIN, h=2, f_init=f_init, f_C=f_C, gamma=gamma, f_P=f_P,
        kind=ValueKind.EXT_INT, target=Target((L,)), anchors=anchors,
        empty_value=lambda idx, read: read((idx[0] - 1, idx[1], idx[2])), batch=batch, name="apsp",
    )


def viterbi_spec(inst: Hmm) -> RecurrenceSpec:
    """D[t][j] is the best log-probability of a state path ending in j after t+1 observations."""
    k = len(inst.pi)
    T = len(inst.obs)
    log_pi = [safe_log(p) for p in inst.pi]
    log_a = np.array([[safe_log(p) for p in row] for row in inst.a])
    log_b = np.array([[safe_log(p) for p in row] for row in inst.b])
    o0 = inst.obs[0]

    def f_init(idx):
        t, j = idx
        if t == 0:
            return log_pi[j] + log_b[j, o0]
        return None

    def f_C(idx):
        return k

    def gamma(idx, u):
        return ((idx[0] - 1, u),)

    def f_P(idx, X, read):
        t, j = idx
        i = X[0][1]
        return read(X[0]) + log_a[i, j] + log_b[j, inst.obs[t]]

    def batch(idx, table):
        t, j = idx
        row = table.gather(np.arange((t - 1) * k, t * k))
        return row + log_a[:, j] + log_b[j, inst.obs[t]]

    return RecurrenceSpec(
        dims=(T, k), op=Op.MAX, h=1, f_init=f_init, f_C=f_C, gamma=gamma, f_P=f_P,
        kind=ValueKind.REAL, target=Target((T - 1,)), batch=batch, name="viterbi",
    )
