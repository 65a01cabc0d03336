"""Bottom-up execution of a recurrence with quantum-model cost accounting.

A run has three phases. Table setup writes every cell once. The update pass
visits recursive cells in lexicographic order and fills each one with a
search primitive. Retrieval then reads the target cells.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Optional

import numpy as np

from .core import (
    DEFAULT_CELL_CAP,
    CellIndexError,
    CostLedger,
    Op,
    QTable,
    RecurrenceSpec,
    SpecValidationError,
    ValueKind,
    lex_iter,
    natural,
    new_table,
)
from .qsearch import ChargePolicy, qfind, qfind_all, qfind_all_bits, qmax, qmin

MODES = ("classical", "exact", "mc")


@dataclass
class RunResult:
    table: QTable
    ledger: CostLedger
    solution: Any
    mode: str


@dataclass(frozen=True)
class Violation:
    kind: str
    cell: tuple
    detail: str


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def state_prep(spec: RecurrenceSpec, idx, ledger: Optional[CostLedger] = None) -> int:
    """Size of the generating set of ``idx``; one state preparation is charged."""
    lam = spec.f_C(idx)
    if not isinstance(lam, (int, np.integer)) or lam < 0:
        raise SpecValidationError(f"f_C{idx} = {lam!r} is not a non-negative integer")
    if ledger is not None:
        ledger.state_preps += 1
    return int(lam)


def table_index_prep(spec: RecurrenceSpec, idx, u: int, lam: Optional[int] = None):
    """The u-th generating element of ``idx``."""
    if lam is None:
        lam = spec.f_C(idx)
    if not 0 <= u < lam:
        raise CellIndexError(f"generating element {u} requested for cell {idx} with only {lam}")
    return spec.gamma(idx, u)


def _tracing_reader(table: QTable, idx, trace: list):
    def read(dep):
        value = table.peek(dep)
        trace.append((tuple(idx), tuple(dep)))
        return value
    return read


def dp_entry(spec: RecurrenceSpec, table: QTable, idx, mode: str = "exact",
             policy: Optional[ChargePolicy] = None, rng: Optional[np.random.Generator] = None,
             batch: bool = True, trace: Optional[list] = None):
    """Value of one recursive cell, charging the ledger for the search that finds it."""
    _check_mode(mode)
    ledger = table.ledger
    quantum = mode != "classical"
    lam = state_prep(spec, idx, ledger if quantum else None)
    anchors = spec.anchors(idx)
    per_eval = spec.h + len(anchors)
    reader = table.peek if trace is None else _tracing_reader(table, idx, trace)

    if lam == 0:
        ledger.qram_reads += len(anchors)
        return spec.empty(idx, reader)

    if batch and trace is None and spec.batch is not None:
        values = spec.batch(idx, table)
    else:
        values = [spec.f_P(idx, table_index_prep(spec, idx, u, lam), reader) for u in range(lam)]

    if policy is None:
        policy = ChargePolicy("mc" if mode == "mc" else "exact")
    op = spec.op
    if op is Op.MIN or op is Op.MAX:
        key = None if spec.comparator is natural else spec.comparator
        search = qmin if op is Op.MIN else qmax
        outcome = search(lam, values, policy, key=key, rng=rng)
    elif op is Op.FIND:
        outcome = qfind(lam, values, policy)
    elif spec.kind is ValueKind.SYMBOLS:
        outcome = qfind_all_bits(lam, values, policy)
    else:
        outcome = qfind_all(lam, values, policy)

    if quantum:
        ledger.oracle_queries += outcome.queries
        ledger.qram_reads += outcome.queries * per_eval
    else:
        ledger.classical_ops += lam
        ledger.qram_reads += lam * per_eval
    return outcome.result


def run(spec: RecurrenceSpec, mode: str = "exact", c_search=1, seed: int = 0, batch: bool = True,
        validate: bool = False, trace: Optional[list] = None, cell_cap: int = DEFAULT_CELL_CAP) -> RunResult:
    """Fill the whole table of ``spec`` and retrieve its target.

    ``mode`` is ``classical`` (every candidate evaluated and counted),
    ``exact`` (deterministic quantum charge) or ``mc`` (randomized charge for
    min/max cells; find and findAll cells use the exact charge).
    """
    _check_mode(mode)
    if validate:
        violations = validate_spec(spec)
        if violations:
            v = violations[0]
            raise SpecValidationError(f"{len(violations)} violation(s); first: {v.kind} at {v.cell}: {v.detail}")
    ledger = CostLedger(mode=mode)
    table = new_table(spec, ledger, cell_cap=cell_cap)
    policy = ChargePolicy("mc" if mode == "mc" else "exact", c_search, seed)
    rng = np.random.default_rng(seed) if mode == "mc" else None
    for idx in table.pending_cells():
        value = dp_entry(spec, table, idx, mode, policy, rng, batch, trace)
        table.write(idx, value)
        ledger.entries_computed += 1
    solution = table.extract(spec.target)
    return RunResult(table, ledger, solution, mode)


def _in_bounds(cell, dims) -> bool:
    return len(cell) == len(dims) and all(0 <= c < d for c, d in zip(cell, dims))


def validate_spec(spec: RecurrenceSpec) -> List[Violation]:
    """Structural problems with ``spec``; an empty list means it is well formed."""
    out: List[Violation] = []
    if any(d < 1 for d in spec.dims):
        out.append(Violation("dims", (), f"dimensions must be >= 1, got {spec.dims}"))
        return out
    if spec.h < 1:
        out.append(Violation("h", (), f"dependency index must be positive, got {spec.h}"))
    if spec.op in (Op.MIN, Op.MAX) and spec.comparator is None:
        out.append(Violation("comparator", (), "min/max recurrences need a comparator"))
    if not _in_bounds(tuple(spec.target.prefix) + (0,) * (len(spec.dims) - len(spec.target.prefix)), spec.dims):
        out.append(Violation("target", tuple(spec.target.prefix), "target outside the table"))
    for idx in lex_iter(spec.dims):
        if spec.f_init(idx) is not None:
            continue
        lam = spec.f_C(idx)
        if not isinstance(lam, (int, np.integer)) or lam < 0:
            out.append(Violation("f_C", idx, f"cardinality {lam!r} is not a non-negative integer"))
            continue
        seen = {}
        for u in range(lam):
            X = tuple(tuple(d) for d in spec.gamma(idx, u))
            if len(X) != spec.h:
                out.append(Violation("arity", idx, f"element {u} has {len(X)} tuples, expected {spec.h}"))
            for dep in X:
                if not _in_bounds(dep, spec.dims):
                    out.append(Violation("bounds", idx, f"element {u} depends on {dep} outside the table"))
                elif not dep < idx:
                    out.append(Violation("precedence", idx, f"element {u} depends on {dep}, which does not precede it"))
            key = tuple(sorted(X))
            if key in seen:
                out.append(Violation("injectivity", idx, f"elements {seen[key]} and {u} coincide"))
            else:
                seen[key] = u
        for a in spec.anchors(idx):
            a = tuple(a)
            if not _in_bounds(a, spec.dims):
                out.append(Violation("bounds", idx, f"anchor {a} outside the table"))
            elif not a < idx:
                out.append(Violation("precedence", idx, f"anchor {a} does not precede the cell"))
    return out

