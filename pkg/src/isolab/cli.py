"""Command-line interface: ``python -m isolab <command> ...``.

Exit status is 0 on success, 1 when a solver result fails verification and 2
on usage or input errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import experiments as ex
from .graph_core import DimacsError, Seed, gnp_sample, is_induced_isomorphism, rado_prefix, read_dimacs, write_dimacs
from .mcis import SearchBudget, max_common_induced_subgraph
from .sis import contains_induced, count_induced_embeddings
from .theory import lcs_threshold, phi_exact, sis_threshold

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# fallbacks used when neither a flag nor the config file sets a value
DEFAULTS = {"seed": 0, "trials": 20, "format": "text", "timing": False}


class UsageError(Exception):
    pass


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _prob(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError("p must lie in [0, 1]")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _add_common(p, formats=("text", "csv", "json")):
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    p.add_argument("--format", choices=formats, default=None)


def _add_budget(p):
    p.add_argument("--max-nodes", type=_nonneg, default=None, help="search node cap (0 = none)")
    p.add_argument("--max-time", type=float, default=None, help="wall-clock cap in seconds")


def _add_experiment(p):
    _add_common(p)
    _add_budget(p)
    p.add_argument("--seed", type=_seed, default=None, help="master seed")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--workers", type=int, default=None,
                   help=f"worker processes (default: ${ex.WORKERS_ENV} or 1)")
    p.add_argument("--config", help="flat key=value file supplying defaults")
    p.add_argument("--timing", action="store_true", default=None,
                   help="include wall-clock columns (output is then not reproducible)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isolab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("gen", help="sample G(n, p) as DIMACS")
    p.add_argument("n", type=_nonneg)
    p.add_argument("p", type=_prob)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--stream", type=_seed, default=0)
    p.add_argument("-o", "--output")

    p = sub.add_parser("rado", help="first n vertices of the Rado graph as DIMACS")
    p.add_argument("n", type=_nonneg)
    p.add_argument("-o", "--output")

    p = sub.add_parser("predict", help="threshold predictions")
    p.add_argument("kind", choices=("lcs", "sis"))
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n-for", type=int, metavar="N")
    g.add_argument("--from", dest="n_from", type=int, metavar="N")
    p.add_argument("--to", dest="n_to", type=int, metavar="N")
    _add_common(p)

    p = sub.add_parser("mcis", help="maximum common induced subgraph of two DIMACS graphs")
    p.add_argument("first", help="DIMACS file or - for stdin")
    p.add_argument("second", help="DIMACS file or - for stdin")
    _add_common(p, ("text", "json"))
    _add_budget(p)

    p = sub.add_parser("sis", help="induced subgraph isomorphism")
    p.add_argument("pattern", help="DIMACS file or - for stdin")
    p.add_argument("target", help="DIMACS file or - for stdin")
    p.add_argument("--count", action="store_true", help="count ordered embeddings")
    _add_common(p, ("text", "json"))
    _add_budget(p)

    p = sub.add_parser("phi", help="exact permutation-agreement sum phi(m, n)")
    p.add_argument("m", type=_nonneg)
    p.add_argument("n", type=_nonneg)
    _add_common(p, ("text", "json"))

    p = sub.add_parser("experiment", help="Monte Carlo trials")
    esub = p.add_subparsers(dest="kind", required=True, metavar="kind")
    e = esub.add_parser("lcs", help="L_N over pairs of G(N, 1/2)")
    e.add_argument("--N", type=int, default=None)
    _add_experiment(e)
    e = esub.add_parser("sis", help="P(n, N) for fixed n")
    e.add_argument("--n", type=int, default=None)
    e.add_argument("--N", type=int, default=None)
    _add_experiment(e)
    e = esub.add_parser("sweep", help="P(n, N) over a range of n")
    e.add_argument("--N", type=int, default=None)
    e.add_argument("--from", dest="n_from", type=int, default=None)
    e.add_argument("--to", dest="n_to", type=int, default=None)
    _add_experiment(e)
    return parser


# ---------------------------------------------------------------------------


def _budget(args, default=None) -> SearchBudget:
    nodes = args.max_nodes
    time_cap = args.max_time
    if nodes is None and time_cap is None and default is not None:
        return default
    return SearchBudget(max_nodes=nodes or None, max_time=time_cap or None)


def _load(path, stdin):
    if path == "-":
        return read_dimacs(stdin)
    return read_dimacs(path)


def _load_pair(a, b, stdin):
    if a == "-" and b == "-":
        raise UsageError("at most one graph may come from stdin")
    return _load(a, stdin), _load(b, stdin)


def _fmt_mapping(mapping):
    return " ".join(f"{u}->{v}" for u, v in mapping)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table(header, rows):
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def _predict_range(args):
    if args.n_for is not None:
        if args.n_to is not None:
            raise UsageError("--to requires --from")
        return [args.n_for]
    hi = args.n_to if args.n_to is not None else args.n_from
    if hi < args.n_from:
        raise UsageError("--to must not be below --from")
    return list(range(args.n_from, hi + 1))


def cmd_predict(args, stdin):
    Ns = _predict_range(args)
    if min(Ns) < 2:
        raise UsageError("N must be at least 2")
    fmt = args.format or "text"
    if args.kind == "lcs":
        preds = [lcs_threshold(N) for N in Ns]
        header = ["N", "x", "eps", "floor(x-eps)", "floor(x+eps)", "boundary"]
        rows = [[p.N, f"{p.x:.4f}", f"{p.eps:.4f}", p.lo, p.hi, "yes" if p.boundary_flag else "no"]
                for p in preds]
        records = [{"N": p.N, "x": p.x, "eps": p.eps, "lo": p.lo, "hi": p.hi,
                    "boundary_flag": p.boundary_flag} for p in preds]
    else:
        preds = [sis_threshold(N) for N in Ns]
        header = ["N", "y", "eps", "contain_upto", "exclude_from", "boundary"]
        rows = [[p.N, f"{p.y:.4f}", f"{p.eps:.4f}", p.n_contain, p.n_exclude,
                 "yes" if p.boundary_flag else "no"] for p in preds]
        records = [{"N": p.N, "y": p.y, "eps": p.eps, "n_contain": p.n_contain,
                    "n_exclude": p.n_exclude, "boundary_flag": p.boundary_flag} for p in preds]
    if fmt == "json":
        return json.dumps(records, indent=2, sort_keys=True) + "\n", EXIT_OK
    if fmt == "csv":
        return _csv(header, rows), EXIT_OK
    return _table(header, rows), EXIT_OK


def cmd_mcis(args, stdin):
    g1, g2 = _load_pair(args.first, args.second, stdin)
    res = max_common_induced_subgraph(g1, g2, _budget(args))
    ok = len(res.mapping) == res.size and is_induced_isomorphism(g1, g2, res.mapping)
    if (args.format or "text") == "json":
        doc = {"size": res.size, "optimal": res.optimal, "nodes_explored": res.nodes_explored,
               "mapping": res.mapping}
        text = json.dumps(doc, sort_keys=True) + "\n"
    else:
        text = (f"size {res.size}\noptimal {'yes' if res.optimal else 'no'}\n"
                f"nodes {res.nodes_explored}\nmapping {_fmt_mapping(res.mapping)}\n")
    return text, EXIT_OK if ok else EXIT_FAIL


def cmd_sis(args, stdin):
    pattern, target = _load_pair(args.pattern, args.target, stdin)
    res = contains_induced(pattern, target, _budget(args))
    ok = not res.found or is_induced_isomorphism(pattern, target, res.witness)
    count = count_induced_embeddings(pattern, target) if args.count else None
    if count is not None and (count > 0) != bool(res.found) and res.found is not None:
        ok = False
    found = {True: "yes", False: "no", None: "unknown"}[res.found]
    if (args.format or "text") == "json":
        doc = {"found": res.found, "witness": res.witness, "nodes_explored": res.nodes_explored}
        if count is not None:
            doc["count"] = count
        text = json.dumps(doc, sort_keys=True) + "\n"
    else:
        text = f"found {found}\nnodes {res.nodes_explored}\n"
        if res.witness:
            text += f"witness {_fmt_mapping(res.witness)}\n"
        if count is not None:
            text += f"count {count}\n"
    return text, EXIT_OK if ok else EXIT_FAIL


def cmd_phi(args, stdin):
    if args.m > args.n:
        raise UsageError("need m <= n")
    if args.n > 8:
        raise UsageError("phi is computed exactly only for n <= 8")
    r = phi_exact(args.m, args.n)
    if (args.format or "text") == "json":
        doc = {"m": r.m, "n": r.n, "numerator": r.numerator, "exponent": r.exponent,
               "value": float(r)}
        return json.dumps(doc, sort_keys=True) + "\n", EXIT_OK
    return f"phi({r.m},{r.n}) = {r.value} = {float(r):.10g}\n", EXIT_OK


def _resolve(args, required):
    """Fill unset flags from --config, then from DEFAULTS."""
    conf = ex.load_config(args.config) if args.config else {}
    for key in ("N", "n", "trials", "seed", "workers", "max_nodes", "max_time", "n_from", "n_to",
                "format", "output", "timing"):
        if getattr(args, key, None) is None and (key in conf or hasattr(args, key)):
            setattr(args, key, conf.get(key, DEFAULTS.get(key)))
    if args.workers is None:
        args.workers = ex.default_workers()
    missing = [k for k in required if getattr(args, k, None) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + k.replace("_", "-") for k in missing))
    if args.trials < 1 or args.workers < 1:
        raise UsageError("--trials and --workers must be positive")


def _config_echo(args, keys):
    return {k: getattr(args, k) for k in keys}


def cmd_experiment(args, stdin):
    if args.kind == "lcs":
        _resolve(args, ["N"])
        if args.N < 2:
            raise UsageError("--N must be at least 2")
        budget = _budget(args, ex.MCIS_BUDGET)
        records, summary = ex.run_lcs_trials(args.N, args.trials, args.seed, budget, args.workers)
        conf = _config_echo(args, ["N", "trials", "seed", "max_nodes", "max_time"])
        if args.format == "json":
            return ex.lcs_json(conf, records, summary, args.timing), EXIT_OK
        fmt_rows = ex.lcs_csv_rows(records, args.timing)
        text = _lcs_text(summary)
    elif args.kind == "sis":
        _resolve(args, ["n", "N"])
        if not 1 <= args.n <= args.N:
            raise UsageError("need 1 <= --n <= --N")
        budget = _budget(args, ex.SIS_BUDGET)
        s = ex.run_sis_trials(args.n, args.N, args.trials, args.seed, budget, args.workers)
        conf = _config_echo(args, ["n", "N", "trials", "seed", "max_nodes", "max_time"])
        if args.format == "json":
            return ex.sis_json(conf, [s], args.timing), EXIT_OK
        fmt_rows = ex.sis_csv_rows(s.records, args.timing)
        text = _sis_text([s])
    else:
        _resolve(args, ["N", "n_from", "n_to"])
        if not 1 <= args.n_from <= args.n_to <= args.N:
            raise UsageError("need 1 <= --from <= --to <= --N")
        budget = _budget(args, ex.SIS_BUDGET)
        sw = ex.sweep_sis_window(args.N, range(args.n_from, args.n_to + 1), args.trials, args.seed,
                                 budget, args.workers)
        conf = _config_echo(args, ["N", "n_from", "n_to", "trials", "seed", "max_nodes", "max_time"])
        if args.format == "json":
            extra = {"transition": sw.transition, "y": sw.y, "n_contain": sw.n_contain,
                     "n_exclude": sw.n_exclude}
            return ex.sis_json(conf, sw.summaries, args.timing, extra), EXIT_OK
        fmt_rows = (row for s in sw.summaries for row in ex.sis_csv_rows(s.records, args.timing))
        text = _sis_text(sw.summaries) + (
            f"transition {sw.transition}  predicted contain<= {sw.n_contain} exclude>= {sw.n_exclude}\n")
    if args.format == "csv":
        return ex.to_csv(fmt_rows), EXIT_OK
    return text, EXIT_OK


def _lcs_text(s: ex.LcsSummary) -> str:
    head = f"N={s.N} x={s.x:.4f} eps={s.eps:.4f} window=[{s.lo},{s.hi}] trials={s.trials}\n"
    return head + _table(list(s.counts), [list(s.counts.values())])


def _sis_text(summaries) -> str:
    header = ["n", "N", "trials", "found", "not_found", "unknown", "p_hat", "ci95", "side", "note"]
    rows = []
    for s in summaries:
        p = "-" if s.p_hat is None else f"{s.p_hat:.3f}"
        rows.append([s.n, s.N, s.trials, s.successes, s.failures, s.unknowns, p,
                     f"[{s.ci_low:.3f},{s.ci_high:.3f}]", s.predicted_side,
                     "inconclusive" if s.inconclusive else ""])
    return _table(header, rows)


def cmd_gen(args, stdin):
    g = gnp_sample(args.n, args.p, Seed(args.seed, args.stream))
    return write_dimacs(g, comment=f"G({args.n}, {args.p}) seed={args.seed} stream={args.stream}"), EXIT_OK


def cmd_rado(args, stdin):
    return write_dimacs(rado_prefix(args.n), comment=f"Rado graph prefix n={args.n}"), EXIT_OK


COMMANDS = {
    "gen": cmd_gen, "rado": cmd_rado, "predict": cmd_predict, "mcis": cmd_mcis, "sis": cmd_sis,
    "phi": cmd_phi, "experiment": cmd_experiment,
}


def cli_run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse has already printed usage
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        text, code = COMMANDS[args.command](args, stdin)
    except UsageError as e:
        parser.print_usage(stderr)
        print(f"isolab: error: {e}", file=stderr)
        return EXIT_USAGE
    except (DimacsError, OSError, ValueError) as e:
        print(f"isolab: {e}", file=stderr)
        return EXIT_USAGE
    except ex.WitnessError as e:
        print(f"isolab: {e}", file=stderr)
        return EXIT_FAIL
    out = getattr(args, "output", None)
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main():
    sys.exit(cli_run())
