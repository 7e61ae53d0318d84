"""Regenerate the L_N table: predicted window and observed optimum for a range of N.

    python scripts/run_table1.py --from 31 --to 35 --trials 1

Each N is solved to optimality unless --max-nodes/--max-time is given; N in
the low 40s can take hours per sample.
"""
import argparse
import csv
import sys

from isolab.experiments import run_lcs_trials
from isolab.mcis import SearchBudget


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--from", dest="lo", type=int, default=31)
    ap.add_argument("--to", dest="hi", type=int, default=35)
    ap.add_argument("--trials", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--max-nodes", type=int)
    ap.add_argument("--max-time", type=float)
    args = ap.parse_args()
    budget = SearchBudget(max_nodes=args.max_nodes, max_time=args.max_time)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["N", "floor(x-eps)", "floor(x+eps)", "trial", "L", "optimal", "nodes", "seconds"])
    for N in range(args.lo, args.hi + 1):
        records, s = run_lcs_trials(N, args.trials, args.seed, budget, args.workers)
        for r in records:
            w.writerow([N, s.lo, s.hi, r.trial_index, r.L, int(r.optimal), r.nodes_explored,
                        f"{r.elapsed:.1f}"])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
