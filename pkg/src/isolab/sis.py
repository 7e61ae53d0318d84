"""Induced subgraph isomorphism: decision, witness and embedding counts."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graph_core import Graph, complement, is_induced_isomorphism
from .mcis import UNLIMITED, SearchBudget


@dataclass
class SisResult:
    found: bool | None  # None when the budget ran out
    witness: list[tuple[int, int]] | None
    nodes_explored: int
    elapsed: float = field(default=0.0, compare=False)


def static_order(pattern: Graph) -> list[int]:
    """Greedy order: highest degree first, then vertices adjacent to an already
    ordered vertex, then lowest id."""
    remaining = set(range(pattern.n))
    order: list[int] = []
    touched = np.zeros(pattern.n, dtype=bool)
    m = pattern.matrix()
    while remaining:
        u = min(remaining, key=lambda x: (-pattern.degree(x), not touched[x], x))
        order.append(u)
        remaining.discard(u)
        touched |= m[u]
    return order


def initial_domains(pattern: Graph, target: Graph) -> np.ndarray:
    """Candidate bitsets after the two-sided degree filter."""
    n, N = pattern.n, target.n
    tdeg = target.degrees
    dom = np.zeros((n, target.rows.shape[1]), dtype=np.uint64)
    for u in range(n):
        dp = pattern.degree(u)
        ok = (tdeg >= dp) & ((N - 1 - tdeg) >= (n - 1 - dp))
        idx = np.flatnonzero(ok)
        np.bitwise_or.at(dom[u], idx >> 6, np.uint64(1) << (idx & 63).astype(np.uint64))
    return dom


def _search(pattern: Graph, target: Graph, count_mode: bool, budget: SearchBudget):
    n = pattern.n
    order = static_order(pattern)
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    out_w = np.zeros(max(n, 1), dtype=np.int64)
    stats = np.zeros(5, dtype=np.int64)
    max_nodes, max_time = budget.kernel_args()
    _kernels.induced_embed(
        pattern.rows, target.rows, complement(target).rows, n, target.rows.shape[1],
        initial_domains(pattern, target), rank, count_mode, max_nodes, max_time, out_w, stats,
    )
    found, nodes, status, hi, lo = (int(x) for x in stats)
    witness = [(u, int(out_w[u])) for u in range(n)] if found else None
    return witness, nodes, status, (hi << 60) + lo


def contains_induced(pattern: Graph, target: Graph, budget: SearchBudget = UNLIMITED) -> SisResult:
    t0 = time.perf_counter()
    if pattern.n == 0:
        return SisResult(True, [], 0, time.perf_counter() - t0)
    if pattern.n > target.n:
        return SisResult(False, None, 0, time.perf_counter() - t0)
    witness, nodes, status, _ = _search(pattern, target, False, budget)
    if witness is not None:
        found = True
    elif status == _kernels.BUDGET:
        found = None
    else:
        found = False
    return SisResult(found, witness, nodes, time.perf_counter() - t0)


def count_induced_embeddings(pattern: Graph, target: Graph) -> int:
    """Number of injective maps pattern -> target preserving edges and non-edges.

    Ordered embeddings: each copy of the pattern in the target is counted once
    per automorphism of the pattern.
    """
    if pattern.n == 0:
        return 1
    if pattern.n > target.n:
        return 0
    _, _, _, count = _search(pattern, target, True, UNLIMITED)
    return count


def brute_force_sis(pattern: Graph, target: Graph) -> tuple[bool, int]:
    """Decision and ordered embedding count by trying every injection."""
    n, N = pattern.n, target.n
    if n > 6 or N > 10:
        raise ValueError("brute_force_sis needs pattern.n <= 6 and target.n <= 10")
    if n == 0:
        return True, 1
    images = np.array(list(itertools.permutations(range(N), n)), dtype=np.intp).reshape(-1, n)
    pm, tm = pattern.matrix(), target.matrix()
    ok = np.ones(len(images), dtype=bool)
    for i, j in itertools.combinations(range(n), 2):
        ok &= tm[images[:, i], images[:, j]] == pm[i, j]
    count = int(ok.sum())
    return count > 0, count
