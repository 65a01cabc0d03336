"""Scaling sweeps: oracle-query and classical-work counts versus instance size."""
from __future__ import annotations

import io
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .depgraph import build_depgraph, cauchy_schwarz_holds, delta_of
from .engine import MODES, run
from .problems.registry import get

CSV_HEADER = "problem,n,nodes,arcs,delta,oracle_queries,classical_ops,state_preps,mode,seed,wall_time_ms"

# Which ledger counter measures the cost of each mode.
COST_FIELD = {"exact": "oracle_queries", "mc": "oracle_queries", "classical": "classical_ops"}


class SweepConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    problem: str
    sizes: Sequence[int]
    trials: int = 1
    seed: int = 0
    modes: Sequence[str] = ("exact", "classical")
    params: Dict[str, float] = field(default_factory=dict)
    jobs: int = 1

    def validate(self) -> "SweepConfig":
        get(self.problem)
        sizes = sorted(set(self.sizes))
        if len(sizes) < 3:
            raise SweepConfigError("a sweep needs at least 3 distinct sizes")
        if sizes[0] < 1 or sizes[-1] < 2 * sizes[0]:
            raise SweepConfigError("sizes must be positive and span at least one octave")
        if self.trials < 1:
            raise SweepConfigError("trials must be >= 1")
        for m in self.modes:
            if m not in MODES:
                raise SweepConfigError(f"unknown mode {m!r}")
        return self


@dataclass
class SweepRow:
    problem: str
    n: int
    trial: int
    mode: str
    seed: int
    nodes: int = 0
    arcs: int = 0
    delta: Fraction = Fraction(0)
    oracle_queries: int = 0
    classical_ops: int = 0
    state_preps: int = 0
    wall_time_ms: float = 0.0
    h: int = 1
    error: Optional[str] = None

    @property
    def cost(self) -> int:
        return getattr(self, COST_FIELD[self.mode])

    def csv_line(self) -> str:
        return (f"{self.problem},{self.n},{self.nodes},{self.arcs},{float(self.delta):.6f},"
                f"{self.oracle_queries},{self.classical_ops},{self.state_preps},{self.mode},{self.seed},"
                f"{self.wall_time_ms:.3f}")


def instance_rng(seed: int, n: int) -> np.random.Generator:
    """Generator for the sweep instance of size ``n`` with row seed ``seed``."""
    return np.random.default_rng([seed, n])


def _sweep_cell(problem: str, n: int, trial: int, seed: int, modes: Tuple[str, ...],
                params: Dict[str, float]) -> List[SweepRow]:
    adapter = get(problem)
    rows = []
    try:
        inst = adapter.scaled(instance_rng(seed, n), n, **params)
        spec = adapter.build(inst)
    except Exception as exc:  # recorded in the rows, the sweep carries on
        return [SweepRow(problem, n, trial, m, seed, error=f"{type(exc).__name__}: {exc}") for m in modes]
    graph = None
    for mode in modes:
        row = SweepRow(problem, n, trial, mode, seed, h=spec.h)
        try:
            start = time.perf_counter()
            result = run(spec, mode, seed=seed)
            row.wall_time_ms = (time.perf_counter() - start) * 1000
            if graph is None:
                graph = build_depgraph(spec, result.table)
            row.nodes, row.arcs, row.delta = graph.node_count, graph.arc_count, delta_of(graph)
            led = result.ledger
            row.oracle_queries, row.classical_ops, row.state_preps = (
                led.oracle_queries, led.classical_ops, led.state_preps)
        except Exception as exc:
            row.error = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


def run_sweep(config: SweepConfig) -> List[SweepRow]:
    """One row per (size, trial, mode), sorted in that order."""
    config.validate()
    modes = tuple(config.modes)
    tasks = [(config.problem, n, t, config.seed + t, modes, dict(config.params))
             for n in sorted(set(config.sizes)) for t in range(config.trials)]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunks = list(pool.map(_sweep_cell, *zip(*tasks)))
    else:
        chunks = [_sweep_cell(*task) for task in tasks]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r.n, r.trial, r.mode))
    return rows


def write_csv(rows: Iterable[SweepRow], out=None) -> List[SweepRow]:
    """Write the good rows as CSV; return the errored rows, which are left out."""
    buf = io.StringIO(newline="")
    buf.write(CSV_HEADER + "\n")
    failed = []
    for row in rows:
        if row.error:
            failed.append(row)
        else:
            buf.write(row.csv_line() + "\n")
    if out is None:
        out = sys.stdout
    if isinstance(out, (str, bytes)) or hasattr(out, "__fspath__"):
        with open(out, "w", newline="\n") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return failed


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r2: float


def fit_loglog_slope(points: Iterable[Tuple[float, float]]) -> SlopeFit:
    """OLS fit of log(mean cost) against log(size); costs at a repeated size are averaged first."""
    by_size: Dict[float, List[float]] = {}
    for size, cost in points:
        if cost <= 0 or size <= 0:
            raise ValueError(f"log-log fit needs positive sizes and costs, got ({size}, {cost})")
        by_size.setdefault(size, []).append(cost)
    if len(by_size) < 3:
        raise ValueError("log-log fit needs at least 3 distinct sizes")
    xs = np.log([float(s) for s in sorted(by_size)])
    ys = np.log([float(np.mean(by_size[s])) for s in sorted(by_size)])
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    total = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / total if total > 0 else 1.0
    return SlopeFit(float(slope), float(intercept), r2)


def mode_slopes(rows: Iterable[SweepRow]) -> Dict[str, SlopeFit]:
    by_mode: Dict[str, List[Tuple[int, int]]] = {}
    for r in rows:
        if not r.error:
            by_mode.setdefault(r.mode, []).append((r.n, r.cost))
    return {m: fit_loglog_slope(pts) for m, pts in by_mode.items()}


def row_invariants(row: SweepRow) -> List[str]:
    """Broken per-row invariants (empty when the row is consistent)."""
    problems = []
    if row.error:
        return problems
    # The bound is on the exact charge; Monte-Carlo rows carry extra constant factors.
    if row.mode != "mc" and not cauchy_schwarz_holds(row.oracle_queries, row.nodes, row.arcs):
        problems.append("oracle_queries exceeds nodes + sqrt(nodes*arcs)")
    if row.mode == "classical" and row.classical_ops * row.h != row.arcs:
        problems.append("classical_ops differs from arcs/h")
    return problems
