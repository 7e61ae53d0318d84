"""Estimate P(n, N) around the predicted containment threshold.

    python scripts/run_phase_transition.py --N 150 --trials 20

Prints one row per pattern size with the Wilson interval and the predicted
side, then the empirical transition point.
"""
import argparse

from isolab.experiments import SIS_BUDGET, sweep_sis_window
from isolab.mcis import SearchBudget
from isolab.theory import sis_threshold


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--N", type=int, default=150)
    ap.add_argument("--below", type=int, default=2, help="pattern sizes below the window")
    ap.add_argument("--above", type=int, default=1, help="pattern sizes above the window")
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--max-nodes", type=int)
    args = ap.parse_args()
    pred = sis_threshold(args.N)
    ns = range(max(1, pred.n_contain - args.below), min(args.N, pred.n_exclude + args.above) + 1)
    budget = SearchBudget(max_nodes=args.max_nodes) if args.max_nodes else SIS_BUDGET
    sw = sweep_sis_window(args.N, ns, args.trials, args.seed, budget, args.workers)
    print(f"N={args.N} y={pred.y:.3f} eps={pred.eps:.3f} "
          f"contain<={pred.n_contain} exclude>={pred.n_exclude}")
    print(f"{'n':>3} {'found':>5} {'not':>5} {'unk':>4} {'p_hat':>6}  ci95             side")
    for s in sw.summaries:
        p = "-" if s.p_hat is None else f"{s.p_hat:.3f}"
        print(f"{s.n:>3} {s.successes:>5} {s.failures:>5} {s.unknowns:>4} {p:>6}  "
              f"[{s.ci_low:.3f}, {s.ci_high:.3f}]  {s.predicted_side}"
              + ("  inconclusive" if s.inconclusive else ""))
    print(f"empirical transition (largest n with p_hat >= 1/2): {sw.transition}")


if __name__ == "__main__":
    main()
