"""Maximum common induced subgraph (MCIS).

The exact solver is a McSplit-style branch and bound over label classes:
pairs ``(L, R)`` of still-unmapped vertices that have the same adjacency
pattern towards every mapped pair. Both edges and non-edges split classes, so
the common subgraph is induced and may be disconnected.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graph_core import Graph, induced_subgraph, is_induced_isomorphism

UNKNOWN = None  # third value of decision results


@dataclass(frozen=True)
class SearchBudget:
    """Limits for one search. ``None`` means unlimited.

    ``max_time`` is wall-clock seconds; ``target`` stops the search as soon as
    a solution of that size is found. Node and time limits are checked every
    1024 search nodes.
    """

    max_nodes: int | None = None
    max_time: float | None = None
    target: int | None = None

    @property
    def unlimited(self) -> bool:
        return self.max_nodes is None and self.max_time is None

    def kernel_args(self):
        return (
            int(self.max_nodes or 0),
            float(self.max_time or 0.0),
        )


UNLIMITED = SearchBudget()


@dataclass
class SolveResult:
    size: int
    mapping: list[tuple[int, int]]
    nodes_explored: int
    optimal: bool
    elapsed: float = field(default=0.0, compare=False)


def preference_order(g: Graph) -> list[int]:
    """Vertices by descending degree, ties to the lowest id."""
    return sorted(range(g.n), key=lambda v: (-int(g.degrees[v]), v))


def _run(g1: Graph, g2: Graph, best_init: int, target: int, budget: SearchBudget):
    # relabel so that bit order is branching order
    order1, order2 = preference_order(g1), preference_order(g2)
    h1, h2 = induced_subgraph(g1, order1), induced_subgraph(g2, order2)
    k = min(g1.n, g2.n)
    out_l = np.zeros(max(k, 1), np.int64)
    out_r = np.zeros(max(k, 1), np.int64)
    stats = np.zeros(3, np.int64)
    max_nodes, max_time = budget.kernel_args()
    _kernels.mcsplit(h1.rows, h2.rows, h1.n, h2.n, best_init, target, max_nodes, max_time,
                     out_l, out_r, stats)
    best, nodes, status = (int(x) for x in stats)
    mapping = []
    if best > best_init:
        mapping = [(order1[a], order2[b]) for a, b in zip(out_l[:best], out_r[:best])]
    return best, mapping, nodes, status


def max_common_induced_subgraph(g1: Graph, g2: Graph, budget: SearchBudget = UNLIMITED) -> SolveResult:
    t0 = time.perf_counter()
    if budget.target is not None and budget.target <= 0:
        return SolveResult(0, [], 0, g1.n == 0 or g2.n == 0, time.perf_counter() - t0)
    target = budget.target if budget.target is not None else min(g1.n, g2.n) + 1
    best, mapping, nodes, status = _run(g1, g2, 0, target, budget)
    # stopping at the target counts as a budget stop unless it is the trivial upper bound
    optimal = status == _kernels.DONE or best == min(g1.n, g2.n)
    return SolveResult(best, mapping, nodes, optimal, time.perf_counter() - t0)


def decision_common(g1: Graph, g2: Graph, k: int, budget: SearchBudget = UNLIMITED):
    """Is there a common induced subgraph on ``k`` vertices?

    Returns ``(answer, mapping, nodes)`` with answer ``True``, ``False`` or
    ``None`` (budget exhausted).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return True, [], 0
    if k > min(g1.n, g2.n):
        return False, [], 0
    best, mapping, nodes, status = _run(g1, g2, k - 1, k, budget)
    if status == _kernels.TARGET:
        assert len(mapping) == k and is_induced_isomorphism(g1, g2, mapping)
        return True, mapping, nodes
    if status == _kernels.BUDGET:
        return UNKNOWN, [], nodes
    return False, [], nodes


def _codes(m: np.ndarray, tuples):
    """Adjacency code of each vertex tuple: one bit per position pair (i < j)."""
    out = {}
    for t in tuples:
        code = 0
        bit = 1
        for i in range(len(t)):
            row = m[t[i]]
            for j in range(i + 1, len(t)):
                if row[t[j]]:
                    code |= bit
                bit <<= 1
        out.setdefault(code, t)
    return out


def brute_force_mcis(g1: Graph, g2: Graph) -> SolveResult:
    """Exhaustive MCIS for graphs on at most 8 vertices (test oracle).

    For k from min(n1, n2) down, every k-subset of g1 (in increasing order) is
    compared with every ordered k-tuple of g2, i.e. every subset of g2 under
    every bijection.
    """
    if g1.n > 8 or g2.n > 8:
        raise ValueError("brute_force_mcis is limited to graphs with at most 8 vertices")
    t0 = time.perf_counter()
    m1, m2 = g1.matrix().tolist(), g2.matrix().tolist()
    checked = 0
    for k in range(min(g1.n, g2.n), 0, -1):
        left = _codes(m1, itertools.combinations(range(g1.n), k))
        right = _codes(m2, itertools.permutations(range(g2.n), k))
        checked += len(left) + len(right)
        common = sorted(set(left) & set(right))
        if common:
            a, b = left[common[0]], right[common[0]]
            return SolveResult(k, list(zip(a, b)), checked, True, time.perf_counter() - t0)
    return SolveResult(0, [], checked, True, time.perf_counter() - t0)
