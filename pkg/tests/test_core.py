import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qdp.core import (
    INT_BOUND, ArithmeticOverflow, CapacityError, CellIndexError, CostLedger, DependencyOrderError,
    Op, QTable, RecurrenceSpec, SpecValidationError, Target, ValueKind, WriteOnceError, ext_add,
    lex_iter, lex_precedes, mask_to_symbols, new_table, read, symbols_to_mask, write,
)
from qdp.problems import CoinChange, Graph, coin_change_spec, sssp_spec


def _unit_spec(f_init=lambda idx: 0):
    return RecurrenceSpec(dims=(1, 1), op=Op.MIN, h=1, f_init=f_init, f_C=lambda idx: 0,
                          gamma=lambda idx, u: (), f_P=lambda idx, X, r: 0, kind=ValueKind.EXT_INT,
                          target=Target((0, 0)))


def test_new_table_coin_change_setup():
    spec = coin_change_spec(CoinChange([1, 4, 5], 6))
    table = new_table(spec)
    assert table.peek((0,)) == 0
    assert table.pending_cells() == [(i,) for i in range(1, 7)]
    assert table.ledger.qram_writes == 7


def test_new_table_single_cell():
    table = new_table(_unit_spec())
    assert table.peek((0, 0)) == 0
    assert table.ledger.qram_writes == 1
    assert table.is_complete()


def test_new_table_sssp_base_row():
    table = new_table(sssp_spec(Graph(3, [(0, 1, 1)], 0)))
    assert table.peek((0, 0)) == 0
    assert table.peek((0, 1)) == math.inf
    assert table.peek((0, 2)) == math.inf


def test_write_then_read_counts():
    table = QTable((1,), ValueKind.EXT_INT)
    table.init_cell((0,), None)
    write(table, (0,), 0)
    assert read(table, (0,)) == 0
    assert table.ledger.qram_reads == 1
    assert table.ledger.qram_writes == 2  # setup write plus the update


def test_unwritten_read_is_order_violation():
    table = QTable((2,), ValueKind.EXT_INT)
    with pytest.raises(DependencyOrderError):
        table.read((0,))
    table.init_cell((1,), None)
    with pytest.raises(DependencyOrderError):
        table.read((1,))


def test_repeated_reads_are_counted():
    table = QTable((1,), ValueKind.EXT_INT)
    table.init_cell((0,), 5)
    for _ in range(3):
        table.read((0,))
    assert table.ledger.qram_reads == 3


def test_write_once():
    table = QTable((2,), ValueKind.EXT_INT)
    table.init_cell((0,), 1)
    table.init_cell((1,), None)
    with pytest.raises(WriteOnceError):
        table.write((0,), 2)
    table.write((1,), 2)
    with pytest.raises(WriteOnceError):
        table.write((1,), 3)
    with pytest.raises(WriteOnceError):
        table.init_cell((1,), 0)


def test_index_errors_and_capacity():
    table = QTable((2, 3), ValueKind.REAL)
    with pytest.raises(CellIndexError):
        table.flat((2, 0))
    with pytest.raises(CellIndexError):
        table.flat((0,))
    with pytest.raises(CapacityError):
        QTable((1000, 1000), ValueKind.REAL, cell_cap=10)
    with pytest.raises(SpecValidationError):
        QTable((0,), ValueKind.REAL)


def test_infinity_distinct_from_uninitialized():
    table = QTable((2,), ValueKind.EXT_INT)
    table.init_cell((0,), math.inf)
    table.init_cell((1,), None)
    assert table.peek((0,)) == math.inf
    assert table.is_pending((1,)) and not table.is_pending((0,))


def test_int_overflow_detected():
    table = QTable((1,), ValueKind.EXT_INT)
    table.init_cell((0,), None)
    with pytest.raises(ArithmeticOverflow):
        table.write((0,), INT_BOUND * 4)
    with pytest.raises(ArithmeticOverflow):
        ext_add(INT_BOUND, INT_BOUND)
    with pytest.raises(ArithmeticOverflow):
        ext_add(math.inf, -math.inf)
    assert ext_add(3, math.inf) == math.inf
    assert ext_add(2, 3) == 5


def test_symbol_capacity():
    with pytest.raises(CapacityError):
        symbols_to_mask([64])
    table = QTable((1,), ValueKind.SYMBOLS)
    table.init_cell((0,), symbols_to_mask([0, 63]))
    assert mask_to_symbols(table.peek((0,))) == {0, 63}


@pytest.mark.parametrize("dims, expected", [
    ((2, 2), [(0, 0), (0, 1), (1, 0), (1, 1)]),
    ((3,), [(0,), (1,), (2,)]),
    ((1, 1, 1), [(0, 0, 0)]),
])
def test_lex_iter_examples(dims, expected):
    assert list(lex_iter(dims)) == expected


@given(st.lists(st.integers(1, 4), min_size=1, max_size=4))
def test_lex_iter_strictly_increasing(dims):
    cells = list(lex_iter(dims))
    assert len(cells) == math.prod(dims)
    assert all(lex_precedes(a, b) for a, b in zip(cells, cells[1:]))


@given(st.lists(st.tuples(st.sampled_from(["r", "w"]), st.integers(0, 5)), max_size=60))
def test_ledger_matches_shadow_counter(ops):
    table = QTable((6,), ValueKind.EXT_INT)
    shadow_reads, shadow_writes = 0, 0
    done = set()
    for c in range(6):
        table.init_cell((c,), None)
        shadow_writes += 1
    for kind, c in ops:
        if kind == "w" and c not in done:
            table.write((c,), c)
            done.add(c)
            shadow_writes += 1
        elif kind == "r" and c in done:
            assert table.read((c,)) == c
            shadow_reads += 1
    assert (table.ledger.qram_reads, table.ledger.qram_writes) == (shadow_reads, shadow_writes)


def test_gather_is_uncharged_and_checked():
    table = QTable((3,), ValueKind.REAL)
    table.init_cell((0,), 1.5)
    table.init_cell((1,), 2.5)
    table.init_cell((2,), None)
    assert list(table.gather([0, 1])) == [1.5, 2.5]
    assert table.ledger.qram_reads == 0
    with pytest.raises(DependencyOrderError):
        table.gather([0, 2])


def test_extract_prefix_returns_row():
    table = QTable((2, 2), ValueKind.EXT_INT)
    for i, idx in enumerate(lex_iter((2, 2))):
        table.init_cell(idx, i)
    assert table.extract(Target((1,))) == [2, 3]
    assert table.extract(Target((0, 1))) == 1
    assert table.extract(Target(())) == [[0, 1], [2, 3]]


def test_ledger_as_dict_fields():
    assert set(CostLedger().as_dict()) == {
        "entries_computed", "oracle_queries", "qram_reads", "qram_writes", "state_preps", "classical_ops"}


def test_spec_default_empty_values():
    spec = _unit_spec(lambda idx: None)
    assert spec.empty((0, 0), None) == math.inf
    spec.op = Op.MAX
    assert spec.empty((0, 0), None) == -math.inf
    spec.op = Op.FIND
    assert spec.empty((0, 0), None) is False
