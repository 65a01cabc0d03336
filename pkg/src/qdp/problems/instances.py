"""Input payloads for the problem adapters, with validation and JSON round-trip."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..core import SYMBOL_CAPACITY, CapacityError


class InstanceError(ValueError):
    """An instance violates its well-formedness rules."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InstanceError(msg)


@dataclass
class CoinChange:
    denominations: List[int]
    target: int

    def validate(self):
        d = self.denominations
        _require(all(isinstance(c, int) and c > 0 for c in d), "denominations must be positive integers")
        _require(all(a < b for a, b in zip(d, d[1:])), "denominations must be distinct and ascending")
        _require(self.target >= 0, "target must be non-negative")
        return self

    def to_json(self):
        return {"denominations": list(self.denominations), "target": self.target}

    @classmethod
    def from_json(cls, data):
        return cls(list(data["denominations"]), data["target"]).validate()


@dataclass
class MatrixChain:
    dims: List[int]

    def validate(self):
        _require(len(self.dims) >= 3, "need at least two matrices")
        _require(all(isinstance(p, int) and p > 0 for p in self.dims), "dimensions must be positive integers")
        return self

    @property
    def matrices(self) -> int:
        return len(self.dims) - 1

    def to_json(self):
        return {"dims": list(self.dims)}

    @classmethod
    def from_json(cls, data):
        return cls(list(data["dims"])).validate()


@dataclass
class Graph:
    n: int
    edges: List[Tuple[int, int, int]]
    source: Optional[int] = None

    def validate(self):
        _require(self.n >= 1, "graph needs at least one vertex")
        for u, v, w in self.edges:
            _require(0 <= u < self.n and 0 <= v < self.n, f"arc ({u},{v}) has an endpoint outside 0..{self.n - 1}")
            _require(isinstance(w, int), "arc weights must be integers")
        if self.source is not None:
            _require(0 <= self.source < self.n, "source outside the vertex range")
        return self

    def to_json(self):
        out = {"n": self.n, "edges": [list(e) for e in self.edges]}
        if self.source is not None:
            out["source"] = self.source
        return out

    @classmethod
    def from_json(cls, data):
        return cls(data["n"], [tuple(e) for e in data["edges"]], data.get("source")).validate()

    def min_arcs(self) -> Dict[Tuple[int, int], int]:
        """Parallel arcs collapsed to their cheapest weight."""
        best: Dict[Tuple[int, int], int] = {}
        for u, v, w in self.edges:
            if (u, v) not in best or w < best[(u, v)]:
                best[(u, v)] = w
        return best


@dataclass
class Polygon:
    points: List[Tuple[float, float]]

    def validate(self):
        _require(len(self.points) >= 3, "polygon needs at least three points")
        return self

    def to_json(self):
        return {"points": [list(p) for p in self.points]}

    @classmethod
    def from_json(cls, data):
        return cls([tuple(p) for p in data["points"]]).validate()


@dataclass
class PointSeries:
    points: List[Tuple[float, float]]
    penalty: float

    def validate(self):
        xs = [p[0] for p in self.points]
        _require(all(a < b for a, b in zip(xs, xs[1:])), "x coordinates must be strictly increasing")
        _require(self.penalty >= 0, "segment penalty must be non-negative")
        return self

    def to_json(self):
        return {"points": [list(p) for p in self.points], "penalty": self.penalty}

    @classmethod
    def from_json(cls, data):
        return cls([tuple(p) for p in data["points"]], data["penalty"]).validate()


RNA_PAIRS = frozenset({("A", "U"), ("U", "A"), ("C", "G"), ("G", "C")})


@dataclass
class RnaString:
    bases: str

    def validate(self):
        bad = set(self.bases) - set("ACGU")
        _require(not bad, f"invalid base character(s): {''.join(sorted(bad))}")
        return self

    def to_json(self):
        return {"bases": self.bases}

    @classmethod
    def from_json(cls, data):
        return cls(data["bases"]).validate()


@dataclass
class Rod:
    n: int
    prices: List[int]

    def validate(self):
        _require(self.n >= 0, "rod length must be non-negative")
        _require(len(self.prices) >= self.n, "need a price for every length 1..n")
        return self

    def to_json(self):
        return {"n": self.n, "prices": list(self.prices)}

    @classmethod
    def from_json(cls, data):
        return cls(data["n"], list(data["prices"])).validate()


@dataclass
class SortedArray:
    values: List[int]

    def validate(self):
        _require(len(self.values) >= 1, "array must be non-empty")
        _require(all(isinstance(v, int) and v > 0 for v in self.values), "values must be positive integers")
        _require(all(a <= b for a, b in zip(self.values, self.values[1:])), "values must be ascending")
        return self

    def to_json(self):
        return {"values": list(self.values)}

    @classmethod
    def from_json(cls, data):
        return cls(list(data["values"])).validate()


@dataclass
class Knapsack:
    capacity: int
    items: List[Tuple[int, int]]

    def validate(self):
        _require(self.capacity >= 0, "capacity must be non-negative")
        for w, v in self.items:
            _require(w > 0, "item weights must be positive")
            _require(v >= 0, "item values must be non-negative")
        return self

    def to_json(self):
        return {"capacity": self.capacity, "items": [list(i) for i in self.items]}

    @classmethod
    def from_json(cls, data):
        return cls(data["capacity"], [tuple(i) for i in data["items"]]).validate()


@dataclass
class Hmm:
    pi: List[float]
    a: List[List[float]]
    b: List[List[float]]
    obs: List[int]

    def validate(self):
        k = len(self.pi)
        _require(k >= 1, "need at least one state")
        _require(len(self.obs) >= 1, "need at least one observation")
        _require(len(self.a) == k and all(len(r) == k for r in self.a), "transition matrix must be |S| x |S|")
        _require(len(self.b) == k, "emission matrix needs one row per state")
        m = len(self.b[0])
        _require(all(len(r) == m for r in self.b), "emission rows must have equal length")
        for row in [self.pi, *self.a, *self.b]:
            _require(all(p >= 0 for p in row), "probabilities must be non-negative")
            _require(abs(sum(row) - 1.0) <= 1e-9, "probability rows must sum to 1")
        _require(all(0 <= o < m for o in self.obs), "observation symbol outside the emission alphabet")
        return self

    def to_json(self):
        return {"pi": list(self.pi), "a": [list(r) for r in self.a], "b": [list(r) for r in self.b],
                "obs": list(self.obs)}

    @classmethod
    def from_json(cls, data):
        return cls(list(data["pi"]), [list(r) for r in data["a"]], [list(r) for r in data["b"]],
                   list(data["obs"])).validate()


@dataclass
class TextSeg:
    text: str
    dictionary: List[str] = field(default_factory=list)

    def validate(self):
        _require(all(isinstance(w, str) for w in self.dictionary), "dictionary entries must be strings")
        return self

    def to_json(self):
        return {"text": self.text, "dictionary": list(self.dictionary)}

    @classmethod
    def from_json(cls, data):
        return cls(data["text"], list(data["dictionary"])).validate()


@dataclass
class Cnf:
    nonterminals: List[str]
    start: str
    binary: List[Tuple[str, str, str]]
    terminal: List[Tuple[str, str]]
    input: str

    def validate(self):
        names = set(self.nonterminals)
        _require(len(names) == len(self.nonterminals), "nonterminal names must be unique")
        if len(self.nonterminals) > SYMBOL_CAPACITY:
            raise CapacityError(f"{len(self.nonterminals)} nonterminals exceed the capacity of {SYMBOL_CAPACITY}")
        _require(self.start in names, "start symbol is not a declared nonterminal")
        for rule in self.binary:
            _require(len(rule) == 3 and set(rule) <= names, f"bad binary production {rule}")
        for rule in self.terminal:
            _require(len(rule) == 2 and rule[0] in names and len(rule[1]) == 1, f"bad terminal production {rule}")
        _require(len(self.input) >= 1, "input string must be non-empty")
        return self

    def index(self) -> Dict[str, int]:
        return {a: i for i, a in enumerate(self.nonterminals)}

    def to_json(self):
        return {"nonterminals": list(self.nonterminals), "start": self.start,
                "binary": [list(r) for r in self.binary], "terminal": [list(r) for r in self.terminal],
                "input": self.input}

    @classmethod
    def from_json(cls, data):
        return cls(list(data["nonterminals"]), data["start"], [tuple(r) for r in data["binary"]],
                   [tuple(r) for r in data["terminal"]], data["input"]).validate()


def safe_log(p: float) -> float:
    return math.log(p) if p > 0 else -math.inf
