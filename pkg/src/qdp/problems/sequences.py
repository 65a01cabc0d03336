"""Adapters whose table is a single row: coin change, rod cutting, divisible
subsets, unbounded knapsack, segmented least squares and text segmentation."""
from __future__ import annotations

import bisect

import numpy as np

from ..core import Op, RecurrenceSpec, Target, ValueKind, ext_add
from .instances import CoinChange, Knapsack, PointSeries, Rod, SortedArray, TextSeg


def _base_zero(idx):
    return 0 if idx[0] == 0 else None


def coin_change_spec(inst: CoinChange) -> RecurrenceSpec:
    """D[i] = min over coins c ≤ i of 1 + D[i - c], D[0] = 0."""
    coins = list(inst.denominations)
    coin_arr = np.array(coins, dtype=np.intp)

    def f_C(idx):
        return bisect.bisect_right(coins, idx[0])

    def gamma(idx, u):
        return ((idx[0] - coins[u],),)

    def f_P(idx, X, read):
        return ext_add(1, read(X[0]))

    def batch(idx, table):
        i = idx[0]
        return table.gather(i - coin_arr[:f_C(idx)]) + 1

    return RecurrenceSpec(
        dims=(inst.target + 1,), op=Op.MIN, h=1, f_init=_base_zero, f_C=f_C, gamma=gamma, f_P=f_P,
        kind=ValueKind.EXT_INT, target=Target((inst.target,)), batch=batch, name="coinchange",
    )


def rod_cutting_spec(inst: Rod) -> RecurrenceSpec:
    """D[j] = max over first-piece length i ≤ j of price(i) + D[j - i]."""
    n = inst.n
    prices = np.array(inst.prices[:n], dtype=np.float64)

    def f_C(idx):
        return idx[0]

    def gamma(idx, u):
        return ((idx[0] - (u + 1),),)

    def f_P(idx, X, read):
        piece = idx[0] - X[0][0]
        return ext_add(inst.prices[piece - 1], read(X[0]))

    def batch(idx, table):
        j = idx[0]
        return prices[:j] + table.gather(np.arange(j - 1, -1, -1))

    return RecurrenceSpec(
        dims=(n + 1,), op=Op.MAX, h=1, f_init=_base_zero, f_C=f_C, gamma=gamma, f_P=f_P,
        kind=ValueKind.EXT_INT, target=Target((n,)), batch=batch, name="rodcutting",
    )


def lds_spec(inst: SortedArray) -> RecurrenceSpec:
    """D[j] = max over i < j of (D[i] + 1 if A[i] divides A[j] else 1), D[0] = 1.

    Every predecessor is a candidate; the divisibility test lives in f_P so
    that the candidate count stays trivially computable.
    """
    values = list(inst.values)
    arr = np.array(values, dtype=np.int64)

    def f_init(idx):
        return 1 if idx[0] == 0 else None

    def f_C(idx):
        return idx[0]

    def gamma(idx, u):
        return ((u,),)

    def f_P(idx, X, read):
        prev = read(X[0])
        return prev + 1 if values[idx[0]] % values[X[0][0]] == 0 else 1

    def batch(idx, table):
        j = idx[0]
        prev = table.gather(np.arange(j))
        return np.where(arr[j] % arr[:j] == 0, prev + 1, 1.0)

    return RecurrenceSpec(
        dims=(len(values),), op=Op.MAX, h=1, f_init=f_init, f_C=f_C, gamma=gamma, f_P=f_P,
        kind=ValueKind.EXT_INT, target=Target(()), batch=batch, name="lds",
    )


def knapsack_items(inst: Knapsack):
    """Items by ascending weight; equal weights keep only the most valuable item."""
    best = {}
    for w, v in inst.items:
        best[w] = max(best.get(w, v), v)
    return sorted(best.items())


def ukp_spec(inst: Knapsack) -> RecurrenceSpec:
    """D[i] = max over items with weight ≤ i of D[i - w] + v; D[i] = 0 when nothing fits."""
    items = knapsack_items(inst)
    weights = [w for w, _ in items]
    w_arr = np.array(weights, dtype=np.intp)
    v_arr = np.array([v for _, v in items], dtype=np.float64)

    def f_C(idx):
        return bisect.bisect_right(weights, idx[0])

    def gamma(idx, u):
        return ((idx[0] - weights[u],),)

    def f_P(idx, X, read):
        u = weights.index(idx[0] - X[0][0])
        return ext_add(read(X[0]), items[u][1])

    def batch(idx, table):
        lam = f_C(idx)
        return table.gather(idx[0] - w_arr[:lam]) + v_arr[:lam]

    return RecurrenceSpec(
        dims=(inst.capacity + 1,), op=Op.MAX, h=1, f_init=_base_zero, f_C=f_C, gamma=gamma, f_P=f_P,
        kind=ValueKind.EXT_INT, target=Target((inst.capacity,)), empty_value=lambda idx, read: 0,
        batch=batch, name="ukp",
    )


class SegmentErrors:
    """Least-squares line-fit error of any run of consecutive points in O(1).

    Sums are kept in n-scaled form (n·Σxx − (Σx)² and so on) so integer data
    stays exact until the single final division.
    """

    def __init__(self, points):
        xs = np.array([p[0] for p in points], dtype=np.float64)
        ys = np.array([p[1] for p in points], dtype=np.float64)
        zero = np.zeros(1)
        self.sx = np.concatenate([zero, np.cumsum(xs)])
        self.sy = np.concatenate([zero, np.cumsum(ys)])
        self.sxx = np.concatenate([zero, np.cumsum(xs * xs)])
        self.sxy = np.concatenate([zero, np.cumsum(xs * ys)])
        self.syy = np.concatenate([zero, np.cumsum(ys * ys)])

    def error(self, start, stop):
        """Error of points[start:stop]; ``start`` may be an array."""
        start = np.asarray(start)
        k = stop - start
        sx = self.sx[stop] - self.sx[start]
        sy = self.sy[stop] - self.sy[start]
        dxx = k * (self.sxx[stop] - self.sxx[start]) - sx * sx
        dxy = k * (self.sxy[stop] - self.sxy[start]) - sx * sy
        dyy = k * (self.syy[stop] - self.syy[start]) - sy * sy
        with np.errstate(divide="ignore", invalid="ignore"):
            sse = (dyy - np.where(dxx > 0, dxy * dxy / dxx, 0.0)) / k
        return np.where(k <= 2, 0.0, np.maximum(sse, 0.0))


def sls_spec(inst: PointSeries) -> RecurrenceSpec:
    """D[j] = min over u < j of e(points u..j-1) + C + D[u], D[0] = 0."""
    n = len(inst.points)
    errs = SegmentErrors(inst.points)
    penalty = float(inst.penalty)

    def f_C(idx):
        return idx[0]

    def gamma(idx, u):
        return ((u,),)

    def f_P(idx, X, read):
        u = X[0][0]
        return float(errs.error(u, idx[0])) + penalty + read(X[0])

    def batch(idx, table):
        j = idx[0]
        starts = np.arange(j)
        return errs.error(starts, j) + penalty + table.gather(starts)

    return RecurrenceSpec(
        dims=(n + 1,), op=Op.MIN, h=1, f_init=lambda idx: 0.0 if idx[0] == 0 else None, f_C=f_C,
        gamma=gamma, f_P=f_P, kind=ValueKind.REAL, target=Target((n,)), batch=batch, name="sls",
    )


def textseg_spec(inst: TextSeg) -> RecurrenceSpec:
    """Cell c is the suffix of length c; D[0] (the empty suffix) is True.

    Candidate u takes the first u+1 characters of the suffix as a word and
    depends on the shorter suffix that follows it, so lexicographic order on
    c is dependency order.
    """
    text = inst.text
    n = len(text)
    words = set(inst.dictionary)
    longest = max((len(w) for w in words), default=0)
    # is_word[i][l-1]: text[i:i+l] is a dictionary word, for l up to the longest word.
    is_word = np.zeros((n + 1, max(longest, 1)), dtype=bool)
    for i in range(n):
        for l in range(1, min(longest, n - i) + 1):
            is_word[i, l - 1] = text[i:i + l] in words

    def f_C(idx):
        return idx[0]

    def gamma(idx, u):
        return ((idx[0] - u - 1,),)

    def f_P(idx, X, read):
        c = idx[0]
        start = n - c
        rest = read(X[0])
        return text[start:start + c - X[0][0]] in words and rest

    def batch(idx, table):
        c = idx[0]
        out = np.zeros(c, dtype=bool)
        m = min(c, longest)
        if m:
            out[:m] = is_word[n - c, :m] & table.gather(np.arange(c - 1, c - 1 - m, -1))
        return out

    return RecurrenceSpec(
        dims=(n + 1,), op=Op.FIND, h=1, f_init=lambda idx: True if idx[0] == 0 else None, f_C=f_C,
        gamma=gamma, f_P=f_P, kind=ValueKind.BOOL, target=Target((n,)), batch=batch, name="textseg",
    )
