"""End-to-end acceptance checks, one test per criterion.

Each test prints a PASS/FAIL line; the lines are repeated in the terminal
summary under "acceptance". The seed below was fixed before any of the
long-running trials were executed.
"""
import itertools
import math
import time

from isolab import experiments as ex
from isolab.cli import cli_run
from isolab.graph_core import Graph, Seed, gnp_sample, is_induced_isomorphism
from isolab.mcis import UNLIMITED, brute_force_mcis, max_common_induced_subgraph
from isolab.sis import brute_force_sis, contains_induced, count_induced_embeddings
from isolab.theory import (
    first_moment_bound_from_b,
    first_moment_bound_sis,
    lcs_threshold,
    phi_bound_witness,
    phi_exact,
    sis_threshold,
)

SEED = 1

TABLE_LO = [14, 15, 15, 15, 15, 15, 15, 15, 16, 16, 16, 16, 16, 16, 16]
TABLE_HI = [15, 15, 15, 15, 15, 16, 16, 16, 16, 16, 16, 16, 16, 17, 17]


def test_predicted_windows_n31_to_45(report, capsys):
    t0 = time.perf_counter()
    code = cli_run(["predict", "lcs", "--from", "31", "--to", "45", "--format", "csv"])
    elapsed = time.perf_counter() - t0
    out = capsys.readouterr().out.splitlines()
    rows = [line.split(",") for line in out[1:]]
    lo = [int(r[3]) for r in rows]
    hi = [int(r[4]) for r in rows]
    ok = code == 0 and lo == TABLE_LO and hi == TABLE_HI and elapsed < 1.0
    report(1, ok, f"lo={lo} hi={hi} in {elapsed:.3f}s")
    assert ok


def test_threshold_constants(report):
    p, s = lcs_threshold(31), sis_threshold(150)
    ok = (abs(p.x - 15.08) <= 0.01 and abs(p.eps - 0.23) <= 0.01
          and abs(s.y - 15.46) <= 0.01 and abs(s.eps - 0.19) <= 0.01)
    report(2, ok, f"x31={p.x:.4f} eps31={p.eps:.4f} y150={s.y:.4f} eps150={s.eps:.4f}")
    assert ok


def _pairs(count, max_a, max_b, stream0):
    ps = (0.2, 0.5, 0.8)
    for i in range(count):
        a = 1 + i % max_a
        b = 1 + (i // max_a) % max_b
        p = ps[i % 3]
        yield i, gnp_sample(a, p, Seed(SEED, stream0 + 2 * i)), gnp_sample(b, p, Seed(SEED, stream0 + 2 * i + 1))


def test_mcis_matches_exhaustive(report):
    t0 = time.perf_counter()
    bad = []
    n = 0
    for i, g1, g2 in _pairs(210, 7, 7, 10_000):
        n += 1
        fast, slow = max_common_induced_subgraph(g1, g2), brute_force_mcis(g1, g2)
        valid = len(fast.mapping) == fast.size and is_induced_isomorphism(g1, g2, fast.mapping)
        if fast.size != slow.size or not fast.optimal or not valid:
            bad.append(i)
    elapsed = time.perf_counter() - t0
    ok = not bad and n >= 200 and elapsed < 60
    report(3, ok, f"{n} pairs, mismatches={bad[:5]}, {elapsed:.1f}s")
    assert ok


def test_sis_matches_exhaustive(report):
    t0 = time.perf_counter()
    bad = []
    n = 0
    for i, pat, tgt in _pairs(220, 6, 10, 20_000):
        n += 1
        want_found, want_count = brute_force_sis(pat, tgt)
        res = contains_induced(pat, tgt)
        count = count_induced_embeddings(pat, tgt)
        valid = not res.found or is_induced_isomorphism(pat, tgt, res.witness)
        if res.found != want_found or count != want_count or not valid:
            bad.append(i)
    cliques = [count_induced_embeddings(Graph.from_edges(k, itertools.combinations(range(k), 2)),
                                        Graph.from_edges(k, itertools.combinations(range(k), 2)))
               for k in range(1, 7)]
    elapsed = time.perf_counter() - t0
    ok = not bad and n >= 200 and cliques == [math.factorial(k) for k in range(1, 7)] and elapsed < 60
    report(4, ok, f"{n} pairs, mismatches={bad[:5]}, K_n counts={cliques}, {elapsed:.1f}s")
    assert ok


def test_containment_phase_transition_at_150(report):
    inside = ex.run_sis_trials(15, 150, 20, SEED)
    outside = ex.run_sis_trials(16, 150, 20, SEED)
    ok = (inside.p_hat is not None and inside.p_hat >= 0.9
          and outside.p_hat is not None and outside.p_hat <= 0.1
          and inside.unknowns <= 2 and outside.unknowns <= 2)
    report(5, ok, f"p_hat(15)={inside.p_hat} unknown={inside.unknowns}; "
                  f"p_hat(16)={outside.p_hat} unknown={outside.unknowns}")
    assert ok


def test_lcs_trials_near_window(report):
    details = []
    ok = True
    for N in (31, 33, 35):
        records, summary = ex.run_lcs_trials(N, 3, SEED, UNLIMITED)
        Ls = [r.L for r in records]
        lo, hi = summary.lo, summary.hi
        all_near = all(r.optimal and lo - 1 <= r.L <= hi for r in records)
        one_in = any(lo <= r.L <= hi for r in records)
        ok &= all_near and one_in
        details.append(f"N={N} window=[{lo},{hi}] L={Ls}")
    report(6, ok, "; ".join(details))
    assert ok


def test_phi_values(report):
    small = all(phi_exact(m, n).value == math.factorial(n) for n in range(1, 9) for m in (0, 1))
    k1, k2 = phi_bound_witness(6)
    ok = (small and phi_exact(2, 2).value == 2 and phi_exact(2, 3).value == 4
          and math.isfinite(k1) and math.isfinite(k2))
    report(7, ok, f"phi(0|1,n)=n! {small}, phi(2,2)={phi_exact(2, 2).value}, "
                  f"phi(2,3)={phi_exact(2, 3).value}, K1={k1}, K2={k2}")
    assert ok


def test_first_moment_bounds(report):
    vals = {N: first_moment_bound_sis(sis_threshold(N).n_exclude, N) for N in (100, 150, 1000)}
    at_one = [first_moment_bound_from_b(1, N) for N in (2, 100, 150, 1000, 10**6)]
    ok = all(v <= 0.1 for v in vals.values()) and all(v == 1.0 for v in at_one)
    report(8, ok, f"bounds={ {N: round(v, 5) for N, v in vals.items()} }, at b=1: {at_one}")
    assert ok


def test_worker_count_does_not_change_output(report):
    texts = {}
    for w in (1, 4):
        records, _ = ex.run_lcs_trials(16, 8, SEED, workers=w)
        sis = ex.sweep_sis_window(40, range(10, 13), 4, SEED, workers=w)
        lcs_csv = ex.to_csv(ex.lcs_csv_rows(records))
        sis_csv = ex.to_csv(r for s in sis.summaries for r in ex.sis_csv_rows(s.records))
        texts[w] = (lcs_csv.encode(), sis_csv.encode())
    ok = texts[1] == texts[4]
    report(9, ok, f"lcs {len(texts[1][0])} bytes, sis {len(texts[1][1])} bytes, identical={ok}")
    assert ok
