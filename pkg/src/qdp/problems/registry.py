"""Problem registry: one entry per adapter, keyed by its command-line id."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict

from ..core import RecurrenceSpec
from . import generators as gen
from .instances import (
    Cnf, CoinChange, Graph, Hmm, Knapsack, MatrixChain, PointSeries, Polygon, RnaString, Rod,
    SortedArray, TextSeg,
)
from .intervals import cyk_accepts, cyk_spec, matrix_chain_spec, mwt_spec, rna_spec
from .paths import apsp_spec, sssp_spec, viterbi_spec
from .sequences import coin_change_spec, lds_spec, rod_cutting_spec, sls_spec, textseg_spec, ukp_spec


@dataclass(frozen=True)
class Adapter:
    id: str
    instance_type: type
    build: Callable[[Any], RecurrenceSpec]
    # (raw target contents, instance) -> the problem's answer
    answer: Callable[[Any, Any], Any]
    random: Callable
    scaled: Callable
    size: Callable[[Any], int]
    real_valued: bool = False

    def from_json(self, data):
        return self.instance_type.from_json(data)


def _same(raw, inst):
    return raw


def _lds_answer(raw, inst):
    return max(raw)


def _viterbi_answer(raw, inst):
    return math.exp(max(raw))


def _cyk_answer(raw, inst):
    return cyk_accepts(inst, raw)


PROBLEMS: Dict[str, Adapter] = {a.id: a for a in [
    Adapter("coinchange", CoinChange, coin_change_spec, _same, gen.random_coinchange, gen.scaled_coinchange,
            lambda i: i.target),
    Adapter("matrixchain", MatrixChain, matrix_chain_spec, _same, gen.random_matrixchain,
            gen.scaled_matrixchain, lambda i: i.matrices),
    Adapter("sssp", Graph, sssp_spec, _same, gen.random_sssp, gen.scaled_sssp, lambda i: i.n),
    Adapter("apsp", Graph, apsp_spec, _same, gen.random_apsp, gen.scaled_apsp, lambda i: i.n),
    Adapter("mwt", Polygon, mwt_spec, _same, gen.random_mwt, gen.scaled_mwt, lambda i: len(i.points),
            real_valued=True),
    Adapter("sls", PointSeries, sls_spec, _same, gen.random_sls, gen.scaled_sls, lambda i: len(i.points),
            real_valued=True),
    Adapter("rna", RnaString, rna_spec, _same, gen.random_rna, gen.scaled_rna, lambda i: len(i.bases)),
    Adapter("rodcutting", Rod, rod_cutting_spec, _same, gen.random_rod, gen.scaled_rodcutting, lambda i: i.n),
    Adapter("lds", SortedArray, lds_spec, _lds_answer, gen.random_lds, gen.scaled_lds, lambda i: len(i.values)),
    Adapter("ukp", Knapsack, ukp_spec, _same, gen.random_ukp, gen.scaled_ukp, lambda i: i.capacity),
    Adapter("viterbi", Hmm, viterbi_spec, _viterbi_answer, gen.random_viterbi, gen.scaled_viterbi,
            lambda i: len(i.obs), real_valued=True),
    Adapter("textseg", TextSeg, textseg_spec, _same, gen.random_textseg, gen.scaled_textseg,
            lambda i: len(i.text)),
    Adapter("cyk", Cnf, cyk_spec, _cyk_answer, gen.random_cyk, gen.scaled_cyk, lambda i: len(i.input)),
]}


def get(problem: str) -> Adapter:
    try:
        return PROBLEMS[problem]
    except KeyError:
        raise KeyError(f"unknown problem {problem!r}; choose from {', '.join(PROBLEMS)}") from None
