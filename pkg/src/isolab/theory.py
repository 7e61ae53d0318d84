"""Closed-form predictions for largest common induced subgraphs and induced
containment in G(N, 1/2), plus the exact permutation-agreement sum phi(m, n).

Threshold floors are evaluated with mpmath at 50 significant digits.
Quantities such as (N)_n * 2**(-n(n-1)/2) are returned as log2 values.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

DPS = 50
BOUNDARY_TOL = 2.0**-30


def _log2(x):
    return mpmath.log(x, 2)


def _floor_checked(x) -> tuple[int, bool]:
    """floor(x) and whether x lies within BOUNDARY_TOL of an integer."""
    f = int(mpmath.floor(x))
    near = min(x - f, f + 1 - x) < BOUNDARY_TOL
    return f, bool(near)


def half_width(N: int) -> float:
    """(4 log2 N) ** -1/2, the half-width shared by both windows."""
    with mpmath.workdps(DPS):
        return float(_half_width(N))


def _half_width(N):
    return 1 / mpmath.sqrt(4 * _log2(N))


@dataclass(frozen=True)
class ThresholdPrediction:
    N: int
    x: float
    eps: float
    lo: int
    hi: int
    boundary_flag: bool = False

    @property
    def window(self) -> tuple[int, int]:
        return self.lo, self.hi


@dataclass(frozen=True)
class SisPrediction:
    N: int
    y: float
    eps: float
    n_contain: int
    n_exclude: int
    boundary_flag: bool = False

    def side(self, n: int) -> str:
        if n <= self.n_contain:
            return "contain"
        if n >= self.n_exclude:
            return "exclude"
        return "window"


def _require_N(N, least):
    if int(N) != N or N < least:
        raise ValueError(f"N must be an integer >= {least}, got {N}")


def lcs_threshold(N: int) -> ThresholdPrediction:
    """Two-point window for the largest common induced subgraph of two G(N, 1/2)."""
    _require_N(N, 2)
    with mpmath.workdps(DPS):
        lg = _log2(N)
        x = 4 * lg - 2 * _log2(lg) - 2 * _log2(4 / mpmath.e) + 1
        eps = _half_width(N)
        lo, flag_lo = _floor_checked(x - eps)
        hi, flag_hi = _floor_checked(x + eps)
        return ThresholdPrediction(N, float(x), float(eps), lo, hi, flag_lo or flag_hi)


def lcs_center_natural(N: int) -> float:
    """The same center written as a*ln N + b*ln ln N + c + 1 with
    a = 4/ln 2, b = -2/ln 2, c = a(1 - ln a)/2."""
    _require_N(N, 2)
    with mpmath.workdps(DPS):
        a = 4 / mpmath.log(2)
        b = -2 / mpmath.log(2)
        c = a * (1 - mpmath.log(a)) / 2
        return float(a * mpmath.log(N) + b * mpmath.log(mpmath.log(N)) + c + 1)


def sis_threshold(N: int) -> SisPrediction:
    """Containment threshold for a G(n, 1/2) pattern inside a G(N, 1/2) target."""
    _require_N(N, 2)
    with mpmath.workdps(DPS):
        y = 2 * _log2(N) + 1
        eps = _half_width(N)
        n_contain, flag_lo = _floor_checked(y - eps)
        top, flag_hi = _floor_checked(y + eps)
        return SisPrediction(N, float(y), float(eps), n_contain, top + 1, flag_lo or flag_hi)


def alon_window(N: int) -> float:
    """Center of the window for containing *every* n-vertex graph."""
    _require_N(N, 4)
    with mpmath.workdps(DPS):
        lg = _log2(N)
        return float(2 * lg - 2 * _log2(lg) + 2 * _log2(mpmath.e / 2) + 1)


def _log2_falling(N: int, n: int) -> float:
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={N}")
    return math.fsum(math.log2(N - k) for k in range(n))


def log2_expected_pairs(n: int, N: int) -> float:
    """log2 of ((N)_n)^2 * 2^-(n choose 2): expected number of pairs of ordered
    n-tuples inducing the same labelled graph in two independent G(N, 1/2)."""
    return 2 * _log2_falling(N, n) - n * (n - 1) / 2


def log2_expected_embeddings(n: int, N: int) -> float:
    """log2 of (N)_n * 2^-(n choose 2): expected number of ordered induced
    embeddings of a fixed n-vertex graph into G(N, 1/2)."""
    return _log2_falling(N, n) - n * (n - 1) / 2


def _markov_bound(b, N):
    val = mpmath.power(N, 1 - b) * mpmath.power(2, -b * (b - 1) / 2)
    return float(min(mpmath.mpf(1), max(mpmath.mpf(0), val)))


def sis_offset(n: float, N: int) -> float:
    """b such that n = (2/ln 2) ln N + b."""
    with mpmath.workdps(DPS):
        return float(mpmath.mpf(n) - 2 / mpmath.log(2) * mpmath.log(N))


def first_moment_bound_from_b(b: float, N: int) -> float:
    """min(1, N^(1-b) * 2^(-b(b-1)/2))."""
    _require_N(N, 2)
    with mpmath.workdps(DPS):
        return _markov_bound(mpmath.mpf(b), N)


def first_moment_bound_sis(n: float, N: int) -> float:
    """Markov upper bound on P(G(N,1/2) contains an induced copy of G(n,1/2)).

    Uses E(W) <= N^n 2^-(n choose 2) rewritten through n = (2/ln 2) ln N + b.
    """
    _require_N(N, 2)
    with mpmath.workdps(DPS):
        b = mpmath.mpf(n) - 2 / mpmath.log(2) * mpmath.log(N)
        return _markov_bound(b, N)


# ---------------------------------------------------------------------------
# phi(m, n)


class UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)
            return True
        return False


@dataclass(frozen=True)
class PhiResult:
    """phi(m, n) = numerator / 2**exponent, in lowest terms."""

    m: int
    n: int
    numerator: int
    exponent: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __float__(self):
        return self.numerator / 2.0**self.exponent


def agreement_deficit(perm, m: int) -> int:
    """c such that P(X(i,j) = X(perm(i),perm(j)) for all i<j<m) = 2**-c.

    Each constraint equates two edge indicators; the indicators involved form
    a graph whose components each contribute one free fair coin, so
    c = (#indicators involved) - (#components).
    """
    uf = UnionFind()
    merges = 0
    for i, j in itertools.combinations(range(m), 2):
        a, b = perm[i], perm[j]
        image = (a, b) if a < b else (b, a)
        if uf.union((i, j), image):
            merges += 1
    return merges


def phi_exact(m: int, n: int) -> PhiResult:
    """Sum over all permutations of S_n of the agreement probability on pairs in {0..m-1}."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    if n > 8:
        raise ValueError("phi_exact enumerates S_n and is limited to n <= 8")
    hist: dict[int, int] = {}
    for perm in itertools.permutations(range(n)):
        c = agreement_deficit(perm, m)
        hist[c] = hist.get(c, 0) + 1
    top = max(hist)
    num = sum(cnt << (top - c) for c, cnt in hist.items())
    exp = top
    while exp and num % 2 == 0:
        num //= 2
        exp -= 1
    return PhiResult(m, n, num, exp)


def phi_bound_domain(n_max: int):
    """(m, n) with 1 <= n <= n_max and 2n/3 <= m <= n."""
    for n in range(1, n_max + 1):
        for m in range(-(-2 * n // 3), n + 1):
            yield m, n


def _xlogx(k: int) -> float:
    return 0.0 if k == 0 else k * math.log(k)


class BoundViolation(AssertionError):
    pass


K2_CAP = 50.0
K2_STEP = 1e-3


def phi_bound_witness(n_max: int, phi=phi_exact) -> tuple[float, float]:
    """Constants (K1, K2) with phi(m,n) <= K1 * exp(K2 (n-m) log(n-m)) on the
    domain of :func:`phi_bound_domain`.

    K1 is the least admissible value (the largest phi with n - m <= 1, where
    the exponential factor is 1); K2 is then the smallest multiple of 1e-3
    that covers the remaining points. Raises BoundViolation if K2 would exceed
    K2_CAP.
    """
    if not 1 <= n_max <= 8:
        raise ValueError("n_max must lie in 1..8")
    values = {(m, n): phi(m, n).value for m, n in phi_bound_domain(n_max)}
    k1 = float(max(v for (m, n), v in values.items() if n - m <= 1))
    need = 0.0
    for (m, n), v in values.items():
        f = _xlogx(n - m)
        if f > 0:
            need = max(need, math.log(float(v) / k1) / f)
    k2 = math.ceil(need / K2_STEP) * K2_STEP
    if k2 > K2_CAP:
        raise BoundViolation(f"K2={k2} exceeds cap {K2_CAP}")
    for (m, n), v in values.items():
        if float(v) > k1 * math.exp(k2 * _xlogx(n - m)) * (1 + 1e-12):
            raise BoundViolation(f"bound fails at m={m}, n={n}")
    return k1, k2
