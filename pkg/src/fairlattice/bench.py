"""Benchmark harness: propagation engine vs brute-force oracle.

Each row generates a random dataset, runs both paths, requires exact count
equality, and records wall times and work counters. The propagation work
counter (edge traversals) must stay within the 2m * 3**m graph bound.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import FairlatticeError
from .lattice import Lattice
from .oracle import DEFAULT_MAX_WORK, brute_force_counts
from .tally import propagate, tally_vertices


@dataclass(frozen=True)
class BenchRow:
    m: int
    n_rows: int
    skipped: bool = False
    reason: str = ""
    prop_seconds: float = 0.0
    edge_traversals: int = 0
    traversal_bound: int = 0
    oracle_seconds: float = 0.0
    oracle_ops: int = 0
    results_equal: bool = False
    time_ratio: float = 0.0


def random_dataset(m: int, n: int, seed: int = 0) -> Dataset:
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    attrs = rng.integers(0, 2, size=(n, m), dtype=np.uint8)
    y = rng.integers(0, 2, size=n, dtype=np.uint8)
    return Dataset(attrs, y)


def bench_one(m: int, n: int, seed: int = 0, max_m: int | None = None,
              max_work: int | None = None) -> BenchRow:
    limit = DEFAULT_MAX_WORK if max_work is None else int(max_work)
    if 3 ** m * n > limit:
        return BenchRow(
            m=m, n_rows=n, skipped=True,
            reason=f"3**{m} * {n} = {3 ** m * n} filter ops over the cap {limit}",
        )
    data = random_dataset(m, n, seed=seed)

    start = time.perf_counter()
    engine = propagate(tally_vertices(data, lattice=Lattice(m, max_m=max_m)))
    prop_seconds = time.perf_counter() - start

    start = time.perf_counter()
    reference = brute_force_counts(data, max_m=max_m, max_work=limit)
    oracle_seconds = time.perf_counter() - start

    equal = (
        np.array_equal(engine.n, reference.n)
        and np.array_equal(engine.n_pos, reference.n_pos)
    )
    if not equal:
        raise FairlatticeError(
            f"engine and oracle disagree at m={m}, n={n}, seed={seed}"
        )
    return BenchRow(
        m=m,
        n_rows=n,
        prop_seconds=prop_seconds,
        edge_traversals=engine.op_count,
        traversal_bound=2 * m * 3 ** m,
        oracle_seconds=oracle_seconds,
        oracle_ops=reference.op_count,
        results_equal=True,
        time_ratio=oracle_seconds / prop_seconds if prop_seconds > 0 else float("inf"),
    )


def run_bench(m_values, n_values, seed: int = 0, max_m: int | None = None,
              max_work: int | None = None) -> list[BenchRow]:
    rows = []
    for i, m in enumerate(m_values):
        for j, n in enumerate(n_values):
            rows.append(bench_one(m, n, seed=seed + 31 * i + j, max_m=max_m,
                                  max_work=max_work))
    return rows


def bench_csv(rows: list[BenchRow]) -> str:
    header = ("m,n_rows,prop_seconds,edge_traversals,traversal_bound,"
              "oracle_seconds,oracle_ops,results_equal,time_ratio,skipped,reason")
    lines = [header]
    for r in rows:
        lines.append(
            f"{r.m},{r.n_rows},{r.prop_seconds!r},{r.edge_traversals},"
            f"{r.traversal_bound},{r.oracle_seconds!r},{r.oracle_ops},"
            f"{r.results_equal},{r.time_ratio!r},{r.skipped},{r.reason}"
        )
    return "\n".join(lines) + "\n"
