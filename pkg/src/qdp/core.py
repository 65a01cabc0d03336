"""Recurrence descriptors, the QRAM-model table and its cost ledger."""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Optional, Sequence, Tuple

import numpy as np

Cell = Tuple[int, ...]
Reader = Callable[[Cell], Any]

POS_INF = math.inf
NEG_INF = -math.inf

# Integer cells live in float64 storage; beyond 2**53 integers stop being exact.
INT_BOUND = 2**53

SYMBOL_CAPACITY = 64
DEFAULT_CELL_CAP = 50_000_000


class QDPError(Exception):
    """Base class for errors raised by the simulator."""


class CapacityError(QDPError):
    pass


class CellIndexError(QDPError, IndexError):
    pass


class DependencyOrderError(QDPError):
    """A cell was read before it received its value."""


class WriteOnceError(QDPError):
    pass


class SpecValidationError(QDPError, ValueError):
    pass


class ArithmeticOverflow(QDPError, OverflowError):
    pass


class ValueKind(enum.Enum):
    EXT_INT = "int"
    REAL = "real"
    BOOL = "bool"
    SYMBOLS = "symbols"


class Op(str, enum.Enum):
    MIN = "min"
    MAX = "max"
    FIND = "find"
    FIND_ALL = "findall"


def natural(value):
    """Identity key: order values by their natural ordering."""
    return value


def no_anchors(idx: Cell) -> tuple:
    return ()


def check_int(value):
    if value != value:
        raise ArithmeticOverflow("NaN produced by integer arithmetic")
    if math.isinf(value):
        return value
    if abs(value) > INT_BOUND:
        raise ArithmeticOverflow(f"integer value {value!r} exceeds +/-2**53")
    return value


def ext_add(*terms):
    """Saturating sum over extended integers.

    Any infinite term wins; mixing +inf and -inf is an error, as is a finite
    result outside the exactly-representable range.
    """
    total = 0
    inf_sign = 0
    for t in terms:
        if isinstance(t, float) and math.isinf(t):
            s = 1 if t > 0 else -1
            if inf_sign and s != inf_sign:
                raise ArithmeticOverflow("sum of +inf and -inf is undefined")
            inf_sign = s
        else:
            total += t
    if inf_sign:
        return POS_INF if inf_sign > 0 else NEG_INF
    return check_int(total)


def symbols_to_mask(symbols) -> int:
    mask = 0
    for s in symbols:
        if not 0 <= s < SYMBOL_CAPACITY:
            raise CapacityError(f"symbol {s} outside the {SYMBOL_CAPACITY}-symbol alphabet")
        mask |= 1 << s
    return mask


def mask_to_symbols(mask: int) -> frozenset:
    out = []
    s = 0
    while mask:
        if mask & 1:
            out.append(s)
        mask >>= 1
        s += 1
    return frozenset(out)


def lex_iter(dims: Sequence[int]) -> Iterator[Cell]:
    """Yield every index of a ``dims``-shaped table in lexicographic order."""
    return itertools.product(*(range(d) for d in dims))


def lex_precedes(a: Cell, b: Cell) -> bool:
    return tuple(a) < tuple(b)


@dataclass(frozen=True)
class Target:
    """Cells returned by solution retrieval.

    A prefix as long as the table rank selects a single cell; a shorter
    prefix selects the sub-table below it as nested lists.
    """

    prefix: Cell


@dataclass
class RecurrenceSpec:
    dims: Tuple[int, ...]
    op: Op
    h: int
    f_init: Callable[[Cell], Any]
    f_C: Callable[[Cell], int]
    gamma: Callable[[Cell, int], Tuple[Cell, ...]]
    f_P: Callable[[Cell, Tuple[Cell, ...], Reader], Any]
    kind: ValueKind
    target: Target
    comparator: Optional[Callable[[Any], Any]] = natural
    anchors: Callable[[Cell], Tuple[Cell, ...]] = no_anchors
    # (idx, read) -> value for recursive cells whose generating set is empty.
    empty_value: Optional[Callable[[Cell, Reader], Any]] = None
    # (idx, table) -> array of all candidate values, in generating-set order.
    batch: Optional[Callable[[Cell, "QTable"], np.ndarray]] = None
    name: str = ""

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        self.op = Op(self.op)

    @property
    def ncells(self) -> int:
        return math.prod(self.dims)

    def empty(self, idx: Cell, read: Reader):
        if self.empty_value is not None:
            return self.empty_value(idx, read)
        if self.op is Op.MIN:
            return POS_INF
        if self.op is Op.MAX:
            return NEG_INF
        if self.op is Op.FIND:
            return False
        return 0


@dataclass
class CostLedger:
    entries_computed: int = 0
    oracle_queries: int = 0
    qram_reads: int = 0
    qram_writes: int = 0
    state_preps: int = 0
    classical_ops: int = 0
    mode: str = "exact"

    def as_dict(self) -> dict:
        return {
            "entries_computed": self.entries_computed,
            "oracle_queries": self.oracle_queries,
            "qram_reads": self.qram_reads,
            "qram_writes": self.qram_writes,
            "state_preps": self.state_preps,
            "classical_ops": self.classical_ops,
        }


# Per-cell lifecycle in QTable._state.
_UNWRITTEN, _PENDING, _SET, _UPDATED = 0, 1, 2, 3

_STORAGE = {
    ValueKind.EXT_INT: np.float64,
    ValueKind.REAL: np.float64,
    ValueKind.BOOL: np.bool_,
    ValueKind.SYMBOLS: np.uint64,
}


class QTable:
    """Dense table with QRAM-style access accounting.

    Every cell is written once at setup, either with its base value or with
    the uninitialized marker, and at most once more during the update pass.
    """

    def __init__(self, dims: Sequence[int], kind: ValueKind, ledger: Optional[CostLedger] = None,
                 cell_cap: int = DEFAULT_CELL_CAP):
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 1 for d in dims):
            raise SpecValidationError(f"table dimensions must all be >= 1, got {dims}")
        size = math.prod(dims)
        if size > cell_cap:
            raise CapacityError(f"table of {size} cells exceeds the cap of {cell_cap}")
        self.dims = dims
        self.kind = kind
        self.ledger = ledger if ledger is not None else CostLedger()
        self.values = np.zeros(size, dtype=_STORAGE[kind])
        self._state = np.zeros(size, dtype=np.uint8)
        self.strides = tuple(int(s) for s in np.cumprod((1,) + dims[:0:-1])[::-1])

    @property
    def size(self) -> int:
        return self.values.size

    def flat(self, idx: Cell) -> int:
        if len(idx) != len(self.dims):
            raise CellIndexError(f"index {idx} has wrong rank for table {self.dims}")
        pos = 0
        for i, d, s in zip(idx, self.dims, self.strides):
            if not 0 <= i < d:
                raise CellIndexError(f"index {idx} out of bounds for table {self.dims}")
            pos += i * s
        return pos

    def _encode(self, value):
        if self.kind is ValueKind.EXT_INT:
            if isinstance(value, int):
                check_int(value)
            return check_int(float(value))
        if self.kind is ValueKind.SYMBOLS:
            value = int(value)
            if value < 0 or value >= 1 << SYMBOL_CAPACITY:
                raise CapacityError("symbol set exceeds the 64-symbol alphabet")
            return value
        return value

    def _decode(self, raw):
        if self.kind is ValueKind.EXT_INT:
            v = float(raw)
            return v if math.isinf(v) else int(v)
        if self.kind is ValueKind.REAL:
            return float(raw)
        if self.kind is ValueKind.BOOL:
            return bool(raw)
        return int(raw)

    def init_cell(self, idx: Cell, value) -> None:
        """Table Setup write: ``value`` None stores the uninitialized marker."""
        pos = self.flat(idx)
        if self._state[pos] != _UNWRITTEN:
            raise WriteOnceError(f"cell {idx} initialized twice")
        if value is None:
            self._state[pos] = _PENDING
        else:
            self.values[pos] = self._encode(value)
            self._state[pos] = _SET
        self.ledger.qram_writes += 1

    def write(self, idx: Cell, value) -> None:
        pos = self.flat(idx)
        state = self._state[pos]
        if state == _UPDATED or state == _SET:
            raise WriteOnceError(f"cell {idx} already holds its final value")
        self.values[pos] = self._encode(value)
        self._state[pos] = _UPDATED
        self.ledger.qram_writes += 1

    def peek(self, idx: Cell):
        """Checked read that is not charged to the ledger."""
        pos = self.flat(idx)
        if self._state[pos] < _SET:
            raise DependencyOrderError(f"cell {idx} read before it was computed")
        return self._decode(self.values[pos])

    def read(self, idx: Cell):
        value = self.peek(idx)
        self.ledger.qram_reads += 1
        return value

    def gather(self, positions) -> np.ndarray:
        """Uncharged vectorized read of flat positions, with the same order check."""
        positions = np.asarray(positions, dtype=np.intp)
        states = self._state[positions]
        if states.size and states.min() < _SET:
            bad = int(positions[np.argmax(states < _SET)])
            raise DependencyOrderError(
                f"cell {tuple(int(x) for x in np.unravel_index(bad, self.dims))} read before it was computed")
        return self.values[positions]

    def is_pending(self, idx: Cell) -> bool:
        return self._state[self.flat(idx)] == _PENDING

    def pending_cells(self) -> list:
        """Cells still holding the uninitialized marker, in lexicographic order."""
        coords = np.unravel_index(np.flatnonzero(self._state == _PENDING), self.dims)
        return list(zip(*(c.tolist() for c in coords)))

    def updated_mask(self) -> np.ndarray:
        """Flat mask of cells filled by the update pass (the recursive cells)."""
        return self._state == _UPDATED

    def updated_cells(self) -> list:
        coords = np.unravel_index(np.flatnonzero(self._state == _UPDATED), self.dims)
        return list(zip(*(c.tolist() for c in coords)))

    def pending_count(self) -> int:
        return int((self._state == _PENDING).sum())

    def is_complete(self) -> bool:
        return bool((self._state >= _SET).all())

    def to_array(self) -> np.ndarray:
        """Shaped copy of the stored values (uninitialized cells hold zeros)."""
        return self.values.reshape(self.dims).copy()

    def extract(self, target: Target, charge: bool = True):
        reader = self.read if charge else self.peek
        prefix = tuple(target.prefix)
        if len(prefix) == len(self.dims):
            return reader(prefix)

        def walk(pre):
            if len(pre) == len(self.dims):
                return reader(pre)
            return [walk(pre + (i,)) for i in range(self.dims[len(pre)])]

        return walk(prefix)


def new_table(spec: RecurrenceSpec, ledger: Optional[CostLedger] = None,
              cell_cap: int = DEFAULT_CELL_CAP) -> QTable:
    """Table Setup: one write per cell, base values where ``f_init`` defines one."""
    table = QTable(spec.dims, spec.kind, ledger, cell_cap=cell_cap)
    for idx in lex_iter(spec.dims):
        table.init_cell(idx, spec.f_init(idx))
    return table


def read(table: QTable, idx: Cell):
    return table.read(idx)


def write(table: QTable, idx: Cell, value) -> None:
    table.write(idx, value)
