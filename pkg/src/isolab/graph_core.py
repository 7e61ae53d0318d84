"""Simple undirected graphs with bit-packed adjacency rows.

Row ``i`` of a :class:`Graph` is stored as ``ceil(n/64)`` little-endian
``uint64`` words; bit ``j`` of row ``i`` is set iff ``{i, j}`` is an edge.
The same layout is consumed directly by the search kernels.
"""
from __future__ import annotations

import io
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class DimacsError(ValueError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


def n_words(n: int) -> int:
    return max(1, (n + 63) // 64)


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "_rows", "_deg")

    def __init__(self, n: int, rows: np.ndarray):
        rows = np.ascontiguousarray(rows, dtype=np.uint64)
        if rows.shape != (n, n_words(n)):
            raise ValueError(f"rows must have shape {(n, n_words(n))}, got {rows.shape}")
        rows = rows.copy()
        rows.setflags(write=False)
        self.n = n
        self._rows = rows
        deg = np.unpackbits(rows.view(np.uint8), axis=1).sum(axis=1) if n else np.zeros(0)
        deg = deg.astype(np.int64)
        deg.setflags(write=False)
        self._deg = deg

    @classmethod
    def from_matrix(cls, matrix) -> "Graph":
        m = np.asarray(matrix, dtype=bool)
        n = m.shape[0]
        if m.shape != (n, n):
            raise ValueError("adjacency matrix must be square")
        if n and (m.diagonal().any() or (m != m.T).any()):
            raise ValueError("adjacency matrix must be symmetric with empty diagonal")
        return cls(n, _pack(m))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        m = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"bad edge ({u}, {v}) for n={n}")
            m[u, v] = m[v, u] = True
        return cls(n, _pack(m))

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    @property
    def degrees(self) -> np.ndarray:
        return self._deg

    def degree(self, v: int) -> int:
        return int(self._deg[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool((int(self._rows[u, v >> 6]) >> (v & 63)) & 1)

    def neighbors(self, v: int) -> list[int]:
        return [int(u) for u in np.flatnonzero(self.matrix()[v])]

    def matrix(self) -> np.ndarray:
        """Dense boolean adjacency matrix."""
        if self.n == 0:
            return np.zeros((0, 0), dtype=bool)
        bits = np.unpackbits(self._rows.view(np.uint8), axis=1, bitorder="little")
        return bits[:, : self.n].astype(bool)

    def edges(self) -> list[tuple[int, int]]:
        iu, ju = np.nonzero(np.triu(self.matrix(), 1))
        return list(zip(iu.tolist(), ju.tolist()))

    @property
    def num_edges(self) -> int:
        return int(self._deg.sum()) // 2

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._rows, other._rows)

    def __hash__(self):
        return hash((self.n, self._rows.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


def _pack(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    w = n_words(n)
    padded = np.zeros((n, w * 64), dtype=bool)
    padded[:, :n] = m
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view("<u8").astype(np.uint64).reshape(n, w)


def check_invariants(g: Graph) -> None:
    """Raise AssertionError unless symmetry, loop-freeness and degree cache hold."""
    rows = g.rows
    n = g.n
    if n == 0:
        return
    valid = _valid_mask(n)
    assert not (rows & ~valid).any(), "bits set beyond vertex range"
    m = g.matrix()
    assert not m.diagonal().any(), "self-loop"
    assert (m == m.T).all(), "asymmetric adjacency"
    pop = np.array([sum(int(x).bit_count() for x in r) for r in rows])
    assert (pop == g.degrees).all(), "degree cache out of date"


def _valid_mask(n: int) -> np.ndarray:
    w = n_words(n)
    mask = np.zeros(w, dtype=np.uint64)
    for k in range(w):
        bits = min(64, max(0, n - 64 * k))
        mask[k] = np.uint64((1 << bits) - 1)
    return mask


# ---------------------------------------------------------------------------
# random generation


@dataclass(frozen=True)
class Seed:
    """A (master, stream) pair selecting an independent random stream."""

    master: int
    stream: int = 0

    def __post_init__(self):
        for name in ("master", "stream"):
            v = getattr(self, name)
            if not 0 <= v <= MASK64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {v}")


def mix64(z: int) -> int:
    """SplitMix64 output finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: Seed) -> int:
    return mix64(mix64(seed.master) ^ seed.stream)


def random_words(seed: Seed, count: int, offset: int = 0) -> np.ndarray:
    """Outputs ``offset .. offset+count-1`` of SplitMix64 started at ``stream_key(seed)``.

    Output ``k`` is ``mix64(key + (k + 1) * GOLDEN)``, so any position can be
    computed directly.
    """
    key = np.uint64(stream_key(seed))
    k = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = key + k * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return z


def gnp_sample(n: int, p: float, seed: Seed) -> Graph:
    """Sample G(n, p).

    Pairs are visited in row-major order (0,1), (0,2), ..., (0,n-1), (1,2), ...
    and pair number ``k`` uses generator output ``k``: the pair is an edge iff
    the top 53 bits of that output, read as an integer ``u``, satisfy
    ``u < floor(p * 2**53)`` (always an edge when ``p == 1``).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    m = np.zeros((n, n), dtype=bool)
    npairs = n * (n - 1) // 2
    if npairs:
        if p >= 1.0:
            flips = np.ones(npairs, dtype=bool)
        else:
            u = random_words(seed, npairs) >> np.uint64(11)
            flips = u < np.uint64(int(p * 2.0**53))
        iu, ju = np.triu_indices(n, 1)
        m[iu, ju] = flips
        m[ju, iu] = flips
    return Graph(n, _pack(m))


def rado_prefix(n: int) -> Graph:
    """First ``n`` vertices of the binary-digit Rado graph.

    For ``i < j`` the edge ``{i, j}`` is present iff bit ``i`` of ``j`` is 1.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    j = np.arange(n)
    i = np.arange(n)[:, None]
    # shifts are capped at 62; any j below 2**62 has those high bits clear
    upper = (i < j) & (((j >> np.minimum(i, 62)) & 1) == 1)
    m = upper | upper.T
    return Graph(n, _pack(m))


def complement(g: Graph) -> Graph:
    if g.n == 0:
        return g
    rows = ~g.rows & _valid_mask(g.n)
    idx = np.arange(g.n)
    rows[idx, idx >> 6] &= ~(np.uint64(1) << (idx & 63).astype(np.uint64))
    return Graph(g.n, rows)


def _check_vertex_list(g: Graph, vertices: Sequence[int], what="vertex") -> list[int]:
    vs = [int(v) for v in vertices]
    for v in vs:
        if not 0 <= v < g.n:
            raise ValueError(f"{what} {v} out of range for graph on {g.n} vertices")
    if len(set(vs)) != len(vs):
        raise ValueError(f"duplicate {what} ids in {vs}")
    return vs


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> Graph:
    vs = _check_vertex_list(g, vertices)
    m = g.matrix()[np.ix_(vs, vs)] if vs else np.zeros((0, 0), dtype=bool)
    return Graph(len(vs), _pack(m))


def is_induced_isomorphism(g1: Graph, g2: Graph, mapping) -> bool:
    """True iff ``mapping`` (pairs or a dict g1-vertex -> g2-vertex) preserves
    both adjacency and non-adjacency."""
    pairs = list(mapping.items()) if isinstance(mapping, dict) else [tuple(p) for p in mapping]
    left = _check_vertex_list(g1, [a for a, _ in pairs], "g1 vertex")
    right = _check_vertex_list(g2, [b for _, b in pairs], "g2 vertex")
    if len(pairs) < 2:
        return True
    m1 = g1.matrix()[np.ix_(left, left)]
    m2 = g2.matrix()[np.ix_(right, right)]
    return bool((m1 == m2).all())


# ---------------------------------------------------------------------------
# DIMACS


def write_dimacs(g: Graph, path=None, comment: str | None = None) -> str:
    """Write ``g`` in DIMACS edge format (1-based); returns the text.

    ``path`` may be a filesystem path, an open text stream, or None.
    """
    out = io.StringIO()
    if comment:
        for line in comment.splitlines():
            out.write(f"c {line}\n")
    edges = g.edges()
    out.write(f"p edge {g.n} {len(edges)}\n")
    for u, v in edges:
        out.write(f"e {u + 1} {v + 1}\n")
    text = out.getvalue()
    if path is None:
        return text
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def read_dimacs(path) -> Graph:
    if hasattr(path, "read"):
        return parse_dimacs(path.read(), getattr(path, "name", None))
    with open(path) as fh:
        return parse_dimacs(fh.read(), os.fspath(path))


def parse_dimacs(text: str, source=None) -> Graph:
    n = None
    declared = 0
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise DimacsError("duplicate problem line", source, lineno)
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise DimacsError(f"malformed header {raw.strip()!r}", source, lineno)
            try:
                n, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed header {raw.strip()!r}", source, lineno) from None
            if n < 0 or declared < 0:
                raise DimacsError("negative counts in header", source, lineno)
        elif tag == "e":
            if n is None:
                raise DimacsError("edge before problem line", source, lineno)
            if len(parts) != 3:
                raise DimacsError(f"malformed edge line {raw.strip()!r}", source, lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsError(f"malformed edge line {raw.strip()!r}", source, lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError(f"edge ({u}, {v}) out of range 1..{n}", source, lineno)
            if u == v:
                raise DimacsError(f"self-loop on vertex {u}", source, lineno)
            key = (min(u, v) - 1, max(u, v) - 1)
            if key in seen:
                raise DimacsError(f"duplicate edge ({u}, {v})", source, lineno)
            seen.add(key)
        else:
            raise DimacsError(f"unknown line type {tag!r}", source, lineno)
    if n is None:
        raise DimacsError("missing problem line", source)
    if len(seen) != declared:
        raise DimacsError(f"header declares {declared} edges, found {len(seen)}", source)
    return Graph.from_edges(n, seen)
