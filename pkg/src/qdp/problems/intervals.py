"""Interval adapters: matrix chain, polygon triangulation, RNA folding and CYK.

All four index a cell by (span, start) so that lexicographic order processes
shorter spans first. Cells whose span runs past the end of the input are
padding: they are base cells holding a neutral filler and are never read.
"""
from __future__ import annotations

import math

import numpy as np

from ..core import INT_BOUND, ArithmeticOverflow, Op, RecurrenceSpec, Target, ValueKind, ext_add
from .instances import RNA_PAIRS, Cnf, MatrixChain, Polygon, RnaString


def _flat2(dims):
    cols = dims[1]
    return lambda a, b: a * cols + b


def matrix_chain_spec(inst: MatrixChain) -> RecurrenceSpec:
    """Cell (l, i) is the product of matrices i..i+l.

    Candidate u splits after matrix k = i+u and costs
    D[u][i] + D[l-u-1][k+1] + p[i]·p[k+1]·p[i+l+1].
    """
    p = list(inst.dims)
    n = inst.matrices
    p_arr = np.array(p, dtype=np.float64)
    pos = _flat2((n, n))

    def f_init(idx):
        l, i = idx
        if l == 0 or i + l >= n:
            return 0
        return None

    def f_C(idx):
        return idx[0]

    def gamma(idx, u):
        l, i = idx
        return ((u, i), (l - u - 1, i + u + 1))

    def f_P(idx, X, read):
        l, i = idx
        k = i + X[0][0]
        return ext_add(read(X[0]), read(X[1]), p[i] * p[k + 1] * p[i + l + 1])

    def batch(idx, table):
        l, i = idx
        u = np.arange(l)
        left = table.gather(pos(u, i))
        right = table.gather(pos(l - u - 1, i + u + 1))
        vals = left + right + p_arr[i] * p_arr[i + u + 1] * p_arr[i + l + 1]
        if vals.size and vals.max() > INT_BOUND:
            raise ArithmeticOverflow("matrix chain cost exceeds the exact integer range")
        return vals

    return RecurrenceSpec(
        dims=(n, n), op=Op.MIN, h=2, f_init=f_init, f_C=f_C, gamma=gamma, f_P=f_P,
        kind=ValueKind.EXT_INT, target=Target((n - 1, 0)), batch=batch, name="matrixchain",
    )


def mwt_spec(inst: Polygon) -> RecurrenceSpec:
    """Cell (g, i) is the sub-polygon on vertices i..i+g.

    D = 0 for g = 0, the edge length for g = 1, and otherwise the minimum over
    apex r = i+1+u of d(i, i+g) + D[u+1][i] + D[g-u-1][r].
    """
    pts = np.array(inst.points, dtype=np.float64)
    n = len(pts)
    dist = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
    pos = _flat2((n, n))

    def f_init(idx):
        g, i = idx
        if g == 0 or i + g >= n:
            return 0.0
        if g == 1:
            return float(dist[i, i + 1])
        return None

    def f_C(idx):
        return idx[0] - 1

    def gamma(idx, u):
        g, i = idx
        return ((u + 1, i), (g - u - 1, i + u + 1))

    def f_P(idx, X, read):
        g, i = idx
        return float(dist[i, i + g]) + read(X[0]) + read(X[1])

    def batch(idx, table):
        g, i = idx
        u = np.arange(g - 1)
        return dist[i, i + g] + table.gather(pos(u + 1, i)) + table.gather(pos(g - u - 1, i + u + 1))

    return RecurrenceSpec(
        dims=(n, n), op=Op.MIN, h=2, f_init=f_init, f_C=f_C, gamma=gamma, f_P=f_P,
        kind=ValueKind.REAL, target=Target((n - 1, 0)), batch=batch, name="mwt",
    )


def rna_pairable(bases: str) -> np.ndarray:
    n = len(bases)
    ok = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            ok[i, j] = (bases[i], bases[j]) in RNA_PAIRS
    return ok


def rna_spec(inst: RnaString) -> RecurrenceSpec:
    """Cell (s, p) is the substring of length s starting at p (positions i = p, j = p+s-1).

    Spans of length ≤ 5 are 0. Otherwise candidate u pairs t = i+u with j when
    that pair is valid, worth 1 + D[i..t-1] + D[t+1..j-1]. Every candidate
    also folds in the three neighbouring spans D[i+1..j], D[i..j-1] and
    D[i+1..j-1] (+1 if i and j pair), which are read as anchors.
    """
    bases = inst.bases
    n = len(bases)
    pair = rna_pairable(bases)
    size = n + 1
    pos = _flat2((size, size))

    def f_init(idx):
        s, p = idx
        if s <= 5 or p + s > n:
            return 0
        return None

    def f_C(idx):
        return idx[0] - 4

    def gamma(idx, u):
        s, p = idx
        return ((u, p), (s - 2 - u, p + u + 1))

    def anchors(idx):
        s, p = idx
        return ((s - 2, p + 1), (s - 1, p + 1), (s - 1, p))

    def unary(idx, read):
        s, p = idx
        inner, drop_left, drop_right = (read(a) for a in anchors(idx))
        return max(drop_left, drop_right, inner + 1 if pair[p, p + s - 1] else inner)

    def f_P(idx, X, read):
        s, p = idx
        t = p + X[0][0]
        left, right = read(X[0]), read(X[1])
        best = unary(idx, read)
        if pair[t, p + s - 1]:
            best = max(best, 1 + left + right)
        return best

    def batch(idx, table):
        s, p = idx
        j = p + s - 1
        u = np.arange(s - 4)
        left = table.gather(pos(u, p))
        right = table.gather(pos(s - 2 - u, p + u + 1))
        base = unary(idx, table.peek)
        return np.where(pair[p + u, j], np.maximum(base, 1 + left + right), base)

    return RecurrenceSpec(
        dims=(size, size), op=Op.MAX, h=2, f_init=f_init, f_C=f_C, gamma=gamma, f_P=f_P,
        kind=ValueKind.EXT_INT, target=Target((n, 0)), anchors=anchors, batch=batch, name="rna",
    )


def cyk_spec(inst: Cnf) -> RecurrenceSpec:
    """Cell (l-1, j) holds the set of nonterminals deriving the length-l substring at j.

    Candidate u is the split after k = u+1 characters; it yields every A with a
    production A → BC such that B derives the left part and C the right part.
    Sets are 64-bit masks over the nonterminal order.
    """
    ix = inst.index()
    w = inst.input
    n = len(w)
    prods = [(ix[a], ix[b], ix[c]) for a, b, c in inst.binary]
    first = {}
    for a, ch in inst.terminal:
        first[ch] = first.get(ch, 0) | (1 << ix[a])
    pos = _flat2((n, n))

    def f_init(idx):
        r, j = idx
        if j + r + 1 > n:
            return 0
        if r == 0:
            return first.get(w[j], 0)
        return None

    def f_C(idx):
        return idx[0]

    def gamma(idx, u):
        r, j = idx
        k = u + 1
        return ((k - 1, j), (r - k, j + k))

    def combine(left, right):
        out = 0
        for a, b, c in prods:
            if (left >> b) & 1 and (right >> c) & 1:
                out |= 1 << a
        return out

    def f_P(idx, X, read):
        return combine(read(X[0]), read(X[1]))

    def batch(idx, table):
        r, j = idx
        u = np.arange(r)
        left = table.gather(pos(u, j))
        right = table.gather(pos(r - 1 - u, j + u + 1))
        out = np.zeros(r, dtype=np.uint64)
        one = np.uint64(1)
        for a, b, c in prods:
            hit = ((left >> np.uint64(b)) & one) & ((right >> np.uint64(c)) & one)
            out |= hit << np.uint64(a)
        return out

    return RecurrenceSpec(
        dims=(n, n), op=Op.FIND_ALL, h=2, f_init=f_init, f_C=f_C, gamma=gamma, f_P=f_P,
        kind=ValueKind.SYMBOLS, target=Target((n - 1, 0)), comparator=None, batch=batch, name="cyk",
    )


def cyk_accepts(inst: Cnf, mask: int) -> bool:
    return bool((int(mask) >> inst.index()[inst.start]) & 1)
