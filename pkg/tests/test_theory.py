import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isolab.theory import (
    BoundViolation,
    PhiResult,
    agreement_deficit,
    alon_window,
    first_moment_bound_from_b,
    first_moment_bound_sis,
    half_width,
    lcs_center_natural,
    lcs_threshold,
    log2_expected_embeddings,
    log2_expected_pairs,
    phi_bound_domain,
    phi_bound_witness,
    phi_exact,
    sis_offset,
    sis_threshold,
)

TABLE_LO = [14, 15, 15, 15, 15, 15, 15, 15, 16, 16, 16, 16, 16, 16, 16]
TABLE_HI = [15, 15, 15, 15, 15, 16, 16, 16, 16, 16, 16, 16, 16, 17, 17]


def exact_log2(num: int, den_pow2: int) -> float:
    # log2(num / 2**den_pow2) from an exact integer, no float overflow
    shift = max(num.bit_length() - 60, 0)
    return math.log2(num >> shift) + shift - den_pow2


def test_table_windows():
    preds = [lcs_threshold(N) for N in range(31, 46)]
    assert [p.lo for p in preds] == TABLE_LO
    assert [p.hi for p in preds] == TABLE_HI
    assert not any(p.boundary_flag for p in preds)


def test_quoted_constants():
    p = lcs_threshold(31)
    assert p.x == pytest.approx(15.08, abs=0.01) and p.eps == pytest.approx(0.23, abs=0.01)
    assert p.window == (14, 15)
    s = sis_threshold(150)
    assert s.y == pytest.approx(15.46, abs=0.01) and s.eps == pytest.approx(0.19, abs=0.01)
    assert (s.n_contain, s.n_exclude) == (15, 16)
    assert s.side(15) == "contain" and s.side(16) == "exclude"


def test_sis_small_N():
    s = sis_threshold(2)
    assert s.y == 3 and s.eps == 0.5 and s.n_contain == 2
    # y + eps = 3.5
    assert s.n_exclude == 4


def test_window_with_gap_side():
    s = sis_threshold(300)
    assert s.side(s.n_contain + 1) == ("window" if s.n_exclude > s.n_contain + 1 else "exclude")


@pytest.mark.parametrize("N", [2, 3, 10, 31, 150, 1000, 10**5, 10**9])
def test_center_two_parametrizations(N):
    assert lcs_center_natural(N) == pytest.approx(lcs_threshold(N).x, abs=1e-12)


@given(st.integers(2, 10**9))
@settings(max_examples=300, deadline=None)
def test_window_width(N):
    p = lcs_threshold(N)
    assert p.hi - p.lo in (0, 1)
    assert 0 < p.eps <= 0.5
    assert p.eps == pytest.approx(half_width(N))


@given(st.integers(2, 10**9))
@settings(max_examples=200, deadline=None)
def test_floors_stable_or_flagged(N):
    p = lcs_threshold(N)
    d = 2.0**-40
    if not p.boundary_flag:
        assert math.floor(p.x - p.eps - d) == math.floor(p.x - p.eps + d) == p.lo
        assert math.floor(p.x + p.eps - d) == math.floor(p.x + p.eps + d) == p.hi


def test_invalid_N():
    for bad in (1, 0, -5, 2.5):
        with pytest.raises(ValueError):
            lcs_threshold(bad)
    with pytest.raises(ValueError):
        alon_window(3)


def test_alon_window_values():
    assert alon_window(150) == pytest.approx(10.64, abs=0.01)
    assert alon_window(4) == pytest.approx(3.89, abs=0.01)


def test_alon_window_left_of_threshold():
    Ns = sorted({int(round(10 ** (k / 50))) for k in range(60, 301)} | {16, 10**6})
    assert all(alon_window(N) < sis_threshold(N).y for N in Ns)


# expected counts

def test_expected_pairs_examples():
    assert log2_expected_pairs(0, 10) == 0
    assert log2_expected_pairs(1, 10) == pytest.approx(2 * math.log2(10))
    assert log2_expected_embeddings(1, 7) == pytest.approx(math.log2(7))


@pytest.mark.parametrize("n, N", [(15, 31), (14, 31), (15, 150), (16, 150), (40, 1000), (3, 3)])
def test_expected_counts_against_integers(n, N):
    falling = math.perm(N, n)
    c = n * (n - 1) // 2
    assert log2_expected_embeddings(n, N) == pytest.approx(exact_log2(falling, c), abs=1e-9)
    assert log2_expected_pairs(n, N) == pytest.approx(exact_log2(falling**2, c), abs=1e-9)


def test_expected_embeddings_around_150():
    assert 2.0 < log2_expected_embeddings(15, 150) < 2.6
    assert log2_expected_embeddings(16, 150) < 0


@given(st.integers(2, 5000), st.data())
@settings(max_examples=100, deadline=None)
def test_pairs_vs_embeddings_identity(N, data):
    n = data.draw(st.integers(0, min(N, 200)))
    lhs = log2_expected_pairs(n, N)
    rhs = 2 * log2_expected_embeddings(n, N) + n * (n - 1) / 2
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-9)


def test_expected_count_range():
    with pytest.raises(ValueError):
        log2_expected_pairs(5, 4)


# first moment

@pytest.mark.parametrize("N", [100, 150, 1000])
def test_first_moment_past_window(N):
    n = math.floor(sis_threshold(N).y + sis_threshold(N).eps) + 1
    assert first_moment_bound_sis(n, N) <= 0.1


@pytest.mark.parametrize("N", [2, 10, 150, 10**6])
def test_first_moment_at_b_one(N):
    assert first_moment_bound_from_b(1, N) == 1.0
    assert first_moment_bound_from_b(0, N) == 1.0


def test_first_moment_matches_offset():
    N = 150
    for n in (14, 15, 16, 17):
        assert first_moment_bound_sis(n, N) == pytest.approx(first_moment_bound_from_b(sis_offset(n, N), N))


def test_first_moment_against_direct_formula():
    N, n = 150, 16
    b = n - 2 * math.log(N) / math.log(2)
    direct = N ** (1 - b) * 2 ** (-b * (b - 1) / 2)
    assert first_moment_bound_sis(n, N) == pytest.approx(direct, rel=1e-12)
    # the bound dominates E(W) = (N)_n 2^-C(n,2)
    assert math.log2(direct) >= log2_expected_embeddings(n, N)


@given(st.integers(2, 10**6), st.floats(1, 30))
@settings(max_examples=100, deadline=None)
def test_first_moment_decreasing_in_b(N, b):
    assert first_moment_bound_from_b(b + 0.5, N) <= first_moment_bound_from_b(b, N)


# phi

def brute_phi(m, n):
    # average over the labelled graph on n vertices: P(X(i,j) = X(pi i, pi j) for i<j<m)
    pairs = list(itertools.combinations(range(n), 2))
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        hits = 0
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            x = dict(zip(pairs, bits))
            ok = all(x[(i, j)] == x[tuple(sorted((perm[i], perm[j])))]
                     for i, j in itertools.combinations(range(m), 2))
            hits += ok
        total += Fraction(hits, 2 ** len(pairs))
    return total


@pytest.mark.parametrize("m, n", [(m, n) for n in range(1, 5) for m in range(n + 1)])
def test_phi_against_enumeration(m, n):
    assert phi_exact(m, n).value == brute_phi(m, n)


def test_phi_examples():
    for n in range(1, 9):
        assert phi_exact(0, n).value == math.factorial(n)
        assert phi_exact(1, n).value == math.factorial(n)
    assert phi_exact(2, 2).value == 2
    assert phi_exact(2, 3).value == 4


def test_phi_bounds_and_monotone():
    for n in range(1, 7):
        vals = [phi_exact(m, n).value for m in range(n + 1)]
        assert all(0 < v <= math.factorial(n) for v in vals)
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_phi_lowest_terms():
    r = phi_exact(3, 5)
    assert r.exponent == 0 or r.numerator % 2 == 1
    assert float(r) == float(r.value)
    assert PhiResult(0, 0, 1, 0).value == 1


def test_phi_range():
    with pytest.raises(ValueError):
        phi_exact(3, 2)
    with pytest.raises(ValueError):
        phi_exact(1, 9)


def test_agreement_deficit_identity_and_transposition():
    assert agreement_deficit((0, 1, 2, 3), 4) == 0
    # swapping 0 and 1 with m = 3: pair (0,1) is fixed, (0,2) <-> (1,2)
    assert agreement_deficit((1, 0, 2), 3) == 1


def test_phi_bound_domain():
    pts = list(phi_bound_domain(3))
    assert pts == [(1, 1), (2, 2), (2, 3), (3, 3)]


def test_phi_bound_witness():
    k1, k2 = phi_bound_witness(6)
    assert math.isfinite(k1) and math.isfinite(k2) and k1 >= 1 and k2 >= 0
    for m, n in phi_bound_domain(6):
        f = (n - m) * math.log(n - m) if n > m else 0.0
        assert float(phi_exact(m, n)) <= k1 * math.exp(k2 * f) * (1 + 1e-12)


def test_phi_bound_witness_reports_violation():
    def huge(m, n):
        return PhiResult(m, n, 10**60 if m < n - 1 else 1, 0)

    with pytest.raises(BoundViolation):
        phi_bound_witness(6, phi=huge)
