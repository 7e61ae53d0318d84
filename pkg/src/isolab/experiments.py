"""Seeded Monte Carlo trials for L_N and for the containment probability P(n, N).

Trial ``t`` of an experiment with master seed ``s`` draws its two graphs from
the streams ``(s, 2t)`` and ``(s, 2t + 1)``, so trials can run in any order on
any number of workers and still reproduce exactly. Timing is measured but
kept out of the default CSV/JSON output, which is therefore byte-identical
across reruns.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .graph_core import Seed, gnp_sample, is_induced_isomorphism
from .mcis import SearchBudget, max_common_induced_subgraph
from .sis import contains_induced
from .theory import lcs_threshold, sis_threshold

log = logging.getLogger(__name__)

MCIS_BUDGET = SearchBudget(max_nodes=10**9)
SIS_BUDGET = SearchBudget(max_nodes=10**8)
MAX_STORED_WITNESS = 64
INCONCLUSIVE_UNKNOWN_FRACTION = 0.10
WILSON_Z = 1.959963984540054
WORKERS_ENV = "ISOLAB_WORKERS"

CSV_HEADER = ["trial", "seed_hi", "seed_lo", "outcome", "value", "nodes", "millis", "classification"]


class WitnessError(RuntimeError):
    """A solver returned a mapping that does not re-verify."""


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _pool_map(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map() yields in submission order whatever the completion order
        return list(pool.map(fn, jobs))


def wilson_interval(successes: int, n: int, z: float = WILSON_Z) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    p = successes / n
    denom = 1 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


# ---------------------------------------------------------------------------
# largest common induced subgraph


@dataclass
class LcsTrialRecord:
    trial_index: int
    seed: tuple[int, int]
    L: int
    optimal: bool
    nodes_explored: int
    predicted: tuple[int, int]
    classification: str
    mapping: list[tuple[int, int]] | None = None
    elapsed: float = 0.0


def classify(L: int, optimal: bool, lo: int, hi: int) -> str:
    if not optimal:
        return "unknown"
    if lo <= L <= hi:
        return "in_window"
    if L == lo - 1:
        return "below_by_1"
    if L == hi + 1:
        return "above_by_1"
    return "farther"


def _lcs_trial(job) -> LcsTrialRecord:
    N, t, master, budget = job
    g1 = gnp_sample(N, 0.5, Seed(master, 2 * t))
    g2 = gnp_sample(N, 0.5, Seed(master, 2 * t + 1))
    res = max_common_induced_subgraph(g1, g2, budget)
    if len(res.mapping) != res.size or not is_induced_isomorphism(g1, g2, res.mapping):
        raise WitnessError(f"MCIS witness failed verification (N={N}, trial={t})")
    pred = lcs_threshold(N)
    mapping = res.mapping if res.size <= MAX_STORED_WITNESS else None
    return LcsTrialRecord(
        t, (master, 2 * t), res.size, res.optimal, res.nodes_explored, (pred.lo, pred.hi),
        classify(res.size, res.optimal, pred.lo, pred.hi), mapping, res.elapsed,
    )


@dataclass
class LcsSummary:
    N: int
    trials: int
    lo: int
    hi: int
    x: float
    eps: float
    counts: dict[str, int]
    unknowns: int
    in_window_fraction: float | None


def summarize_lcs(N: int, records: list[LcsTrialRecord]) -> LcsSummary:
    pred = lcs_threshold(N)
    counts = {c: 0 for c in ("in_window", "below_by_1", "above_by_1", "farther", "unknown")}
    for r in records:
        counts[r.classification] += 1
    known = len(records) - counts["unknown"]
    frac = counts["in_window"] / known if known else None
    return LcsSummary(N, len(records), pred.lo, pred.hi, pred.x, pred.eps, counts,
                      counts["unknown"], frac)


def run_lcs_trials(N: int, trials: int, master_seed: int, budget: SearchBudget = MCIS_BUDGET,
                   workers: int = 1):
    """Sample ``trials`` pairs of G(N, 1/2), solve MCIS for each, classify
    against the predicted window. Returns ``(records, summary)``."""
    if N < 2:
        raise ValueError("N must be at least 2")
    if trials < 1:
        raise ValueError("trials must be positive")
    jobs = [(N, t, master_seed, budget) for t in range(trials)]
    records = _pool_map(_lcs_trial, jobs, workers)
    for r in records:
        log.info("N=%d trial=%d L=%d %s nodes=%d", N, r.trial_index, r.L, r.classification,
                 r.nodes_explored)
    return records, summarize_lcs(N, records)


# ---------------------------------------------------------------------------
# induced containment


@dataclass
class SisTrialRecord:
    trial_index: int
    seed: tuple[int, int]
    n: int
    N: int
    found: bool | None
    nodes_explored: int
    witness: list[tuple[int, int]] | None = None
    elapsed: float = 0.0


@dataclass
class SisExperimentSummary:
    n: int
    N: int
    trials: int
    successes: int
    failures: int
    unknowns: int
    p_hat: float | None
    ci_low: float
    ci_high: float
    predicted_side: str
    inconclusive: bool
    records: list[SisTrialRecord] = field(default_factory=list)


def _sis_trial(job) -> SisTrialRecord:
    n, N, t, master, budget = job
    pattern = gnp_sample(n, 0.5, Seed(master, 2 * t))
    target = gnp_sample(N, 0.5, Seed(master, 2 * t + 1))
    res = contains_induced(pattern, target, budget)
    if res.found and not (len(res.witness) == n and is_induced_isomorphism(pattern, target, res.witness)):
        raise WitnessError(f"SIS witness failed verification (n={n}, N={N}, trial={t})")
    witness = res.witness if res.found and n <= MAX_STORED_WITNESS else None
    return SisTrialRecord(t, (master, 2 * t), n, N, res.found, res.nodes_explored, witness,
                          res.elapsed)


def summarize_sis(n: int, N: int, records: list[SisTrialRecord]) -> SisExperimentSummary:
    successes = sum(r.found is True for r in records)
    failures = sum(r.found is False for r in records)
    unknowns = sum(r.found is None for r in records)
    known = successes + failures
    p_hat = successes / known if known else None
    lo, hi = wilson_interval(successes, known)
    return SisExperimentSummary(
        n, N, len(records), successes, failures, unknowns, p_hat, lo, hi,
        sis_threshold(N).side(n), unknowns > INCONCLUSIVE_UNKNOWN_FRACTION * len(records),
        records,
    )


def run_sis_trials(n: int, N: int, trials: int, master_seed: int,
                   budget: SearchBudget = SIS_BUDGET, workers: int = 1) -> SisExperimentSummary:
    if not 1 <= n <= N:
        raise ValueError("need 1 <= n <= N")
    if trials < 1:
        raise ValueError("trials must be positive")
    jobs = [(n, N, t, master_seed, budget) for t in range(trials)]
    records = _pool_map(_sis_trial, jobs, workers)
    summary = summarize_sis(n, N, records)
    log.info("n=%d N=%d p_hat=%s unknowns=%d", n, N, summary.p_hat, summary.unknowns)
    return summary


@dataclass
class SweepResult:
    N: int
    summaries: list[SisExperimentSummary]
    transition: int | None  # largest n with p_hat >= 1/2
    y: float
    n_contain: int
    n_exclude: int


def sweep_sis_window(N: int, n_range, trials_per_n: int, master_seed: int,
                     budget: SearchBudget = SIS_BUDGET, workers: int = 1) -> SweepResult:
    ns = list(n_range)
    if not ns or any(not 1 <= n <= N for n in ns):
        raise ValueError("n_range must be a non-empty subset of 1..N")
    # one flat job list so workers stay busy across n values
    jobs = [(n, N, t, master_seed, budget) for n in ns for t in range(trials_per_n)]
    records = _pool_map(_sis_trial, jobs, workers)
    summaries = [summarize_sis(n, N, records[i * trials_per_n:(i + 1) * trials_per_n])
                 for i, n in enumerate(ns)]
    above = [s.n for s in summaries if s.p_hat is not None and s.p_hat >= 0.5]
    pred = sis_threshold(N)
    return SweepResult(N, summaries, max(above) if above else None, pred.y, pred.n_contain,
                       pred.n_exclude)


# ---------------------------------------------------------------------------
# output


def _millis(elapsed, include_timing):
    return str(round(elapsed * 1000)) if include_timing else ""


def lcs_csv_rows(records, include_timing=False):
    for r in records:
        yield [r.trial_index, r.seed[0], r.seed[1], "optimal" if r.optimal else "budget", r.L,
               r.nodes_explored, _millis(r.elapsed, include_timing), r.classification]


def sis_csv_rows(records, include_timing=False):
    for r in records:
        outcome = {True: "found", False: "not_found", None: "unknown"}[r.found]
        side = sis_threshold(r.N).side(r.n)
        yield [r.trial_index, r.seed[0], r.seed[1], outcome, r.n, r.nodes_explored,
               _millis(r.elapsed, include_timing), side]


def to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    return buf.getvalue()


def _record_dict(r, include_timing):
    d = asdict(r)
    if not include_timing:
        d.pop("elapsed", None)
    return d


def lcs_json(config: dict, records, summary: LcsSummary, include_timing=False) -> str:
    doc = {
        "config": config,
        "trials": [_record_dict(r, include_timing) for r in records],
        "aggregate": asdict(summary),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def sis_json(config: dict, summaries, include_timing=False, extra=None) -> str:
    blocks = []
    for s in summaries:
        agg = {k: v for k, v in asdict(s).items() if k != "records"}
        blocks.append({"aggregate": agg,
                       "trials": [_record_dict(r, include_timing) for r in s.records]})
    doc = {"config": config, "experiments": blocks}
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


CONFIG_KEYS = {
    "N": int, "n": int, "trials": int, "seed": int, "workers": int, "max_nodes": int,
    "max_time": float, "n_from": int, "n_to": int, "format": str, "output": str,
    "timing": lambda s: s.strip().lower() in ("1", "true", "yes"),
}


def load_config(path) -> dict:
    """Read a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = CONFIG_KEYS[key](value)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return out
