"""Problem adapters mapping concrete instances to recurrence descriptors."""
from .instances import (
    Cnf, CoinChange, Graph, Hmm, InstanceError, Knapsack, MatrixChain, PointSeries, Polygon,
    RnaString, Rod, SortedArray, TextSeg,
)
from .intervals import cyk_accepts, cyk_spec, matrix_chain_spec, mwt_spec, rna_spec
from .paths import apsp_spec, detect_negative_cycle, sssp_spec, viterbi_spec
from .registry import PROBLEMS, Adapter, get
from .sequences import coin_change_spec, lds_spec, rod_cutting_spec, sls_spec, textseg_spec, ukp_spec

__all__ = [
    "Cnf", "CoinChange", "Graph", "Hmm", "InstanceError", "Knapsack", "MatrixChain", "PointSeries",
    "Polygon", "RnaString", "Rod", "SortedArray", "TextSeg", "PROBLEMS", "Adapter", "get",
    "coin_change_spec", "matrix_chain_spec", "sssp_spec", "apsp_spec", "mwt_spec", "sls_spec",
    "rna_spec", "rod_cutting_spec", "lds_spec", "ukp_spec", "viterbi_spec", "textseg_spec",
    "cyk_spec", "cyk_accepts", "detect_negative_cycle",
]
