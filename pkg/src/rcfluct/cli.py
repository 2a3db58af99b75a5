"""Command line entry point: ``rcfluct <subcommand> [flags]``.

Exit status is 0 on success, 1 when a check fails or a budget is exceeded,
and 2 for usage errors (bad flags or invalid parameter values).
"""

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from ._budget import BudgetExceeded, IntegrityError
from .combinatorics import (
    MODES,
    cluster_ratio_scan,
    count_A,
    count_A_s_closed_form,
    enumerate_A,
    write_count_table_csv,
    write_enumeration_csv,
)
from .config import CENTERINGS, TRACE_PATHS, ExperimentConfig, load_config
from .distributions import BUILTIN_KINDS, get_distribution
from .harness import run_experiment, verify_wick
from .model import w_samples, write_replicates_csv
from .oracle import exact_cov_w, exact_expected_trace
from .theory import PolynomialQ, sigma_pq, sigma_Q

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def fmt(x):
    return format(float(x), ".17g")


def _ints(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _frac(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number, got {text!r}") from None


def _exact_fields(value):
    value = Fraction(value)
    return {"numerator": value.numerator, "denominator": value.denominator,
            "exact": str(value), "float": float(value)}


def _emit_rows(args, header, rows, out):
    """Write dict rows as CSV (floats at 17 significant digits) or as a JSON list."""
    if args.format == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(row[h]) if isinstance(row[h], float) else row[h] for h in header])


# ---------------------------------------------------------------------------
# subcommands


def cmd_count(args, out):
    if args.n is None or args.p is None:
        raise _Usage("count needs --n and --p")
    n, p = args.n, _single(args.p, "--p")
    levels = [args.s] if args.s is not None else list(range(-(p - 1), p))
    rows, mismatch = [], False
    for s in levels:
        row = {"n": n, "p": p, "s": s, "count": count_A_s_closed_form(n, p, s)}
        if args.check:
            row["enumerated"] = count_A(n, 2 * p, "exact_sum", s=s, budget=args.budget)
            mismatch |= row["enumerated"] != row["count"]
        rows.append(row)
    if args.format == "json":
        json.dump(rows if args.s is None else rows[0], out, indent=2)
        out.write("\n")
    elif args.s is not None and not args.check:
        out.write(f"{rows[0]['count']}\n")
    else:
        extra = ("enumerated",) if args.check else ()
        write_count_table_csv(([r[k] for k in ("n", "p", "s", "count", *extra)] for r in rows), out, extra)
    return EXIT_FAIL if mismatch else EXIT_OK


def cmd_sigma(args, out):
    mu4 = args.mu4 if args.mu4 is not None else get_distribution(args.dist).mu4
    rows = []
    if args.Q is not None:
        Q = PolynomialQ(args.Q)
        rows.append({"statistic": "Q", "p": "", "q": "", "mu4": str(mu4), **_exact_fields(sigma_Q(Q, mu4))})
    if args.p is not None:
        qs = args.q if args.q is not None else args.p
        for p in args.p:
            for q in qs:
                rows.append({"statistic": "w", "p": p, "q": q, "mu4": str(mu4),
                             **_exact_fields(sigma_pq(p, q, mu4))})
    if not rows:
        raise _Usage("sigma needs --p (optionally --q) or --Q")
    _emit_rows(args, ["statistic", "p", "q", "mu4", "numerator", "denominator", "exact", "float"], rows, out)
    return EXIT_OK


def cmd_enumerate(args, out):
    if args.n is None or args.p is None:
        raise _Usage("enumerate needs --n and --p")
    p = _single(args.p, "--p")
    vectors = enumerate_A(args.n, 2 * p, args.mode, s=args.s, budget=args.budget)
    if args.format == "json":
        json.dump([{"entries": list(v.entries), "alt_sum": v.alt_sum} for v in vectors], out)
        out.write("\n")
    else:
        write_enumeration_csv(vectors, out)
    return EXIT_OK


def cmd_oracle(args, out):
    if args.n is None or args.p is None:
        raise _Usage("oracle needs --n and --p")
    p = _single(args.p, "--p")
    dist = get_distribution(args.dist)
    if args.q is None:
        value = exact_expected_trace(args.n, p, dist.moments, budget=args.budget)
        row = {"quantity": "expected_trace", "q": ""}
    else:
        q = _single(args.q, "--q")
        value = exact_cov_w(args.n, p, q, dist.moments, budget=args.budget)
        row = {"quantity": "cov_w", "q": q}
    row.update({"n": args.n, "p": p, "distribution": dist.kind, **_exact_fields(value)})
    _emit_rows(args, ["quantity", "n", "p", "q", "distribution", "numerator", "denominator", "exact", "float"],
               [row], out)
    return EXIT_OK


def _experiment_config(args):
    data = {}
    if args.config:
        data = load_config(args.config).to_dict()
    flags = {"n": args.n, "ps": args.p, "Q_coeffs": args.Q, "distribution": args.dist_flag,
             "replicates": args.reps, "seed": args.seed, "trace_path": args.path,
             "centering": args.centering, "budget": args.budget, "workers": args.workers}
    data.update({k: v for k, v in flags.items() if v is not None})
    if "n" not in data:
        raise _Usage("simulate needs --n (or a --config file that sets n)")
    if args.Q is not None and args.p is None and not args.config:
        data["ps"] = ()
    return ExperimentConfig.from_mapping(data)


def cmd_simulate(args, out):
    config = _experiment_config(args)
    if args.wick:
        result = verify_wick(config)
        if args.format == "json":
            json.dump(result.to_dict(), out, indent=2)
            out.write("\n")
        else:
            _emit_rows(args, ["ps", "empirical", "standard_error", "exact", "float", "degenerate", "passed"],
                       [{**result.to_dict(), "ps": " ".join(map(str, result.ps)), "exact": str(result.expected)}],
                       out)
        return EXIT_FAIL if args.check and not result.passed else EXIT_OK

    report = run_experiment(config)
    if args.replicates_out:
        with open(args.replicates_out, "w", newline="") as fh:
            write_replicates_csv(w_samples(config), config.ps, fh)
    if args.format == "json":
        out.write(report.to_json(meta=not args.no_meta))
        out.write("\n")
    else:
        rows = [{**c, "statistic": "w"} for c in report.comparisons]
        if report.polynomial is not None:
            pol = report.polynomial
            rows.append({"statistic": "Q", "p": "", "q": "", "empirical": pol["empirical_variance"],
                         "standard_error": pol["standard_error"],
                         "theoretical": pol["theoretical"]["float"], "passed": pol["passed"]})
        _emit_rows(args, ["statistic", "p", "q", "empirical", "standard_error", "theoretical", "passed"], rows, out)
    return EXIT_FAIL if args.check and not report.passed else EXIT_OK


def cmd_verify(args, out):
    from .verify import run_all

    if args.format == "json":
        results = run_all(echo=None)
        json.dump([{"number": r.number, "name": r.name, "passed": r.passed, "retried": r.retried,
                    "details": r.details} for r in results], out, indent=2)
        out.write("\n")
    else:
        results = run_all(echo=lambda line: print(line, file=out))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_cluster_scan(args, out):
    if args.P is None:
        raise _Usage("cluster-scan needs --P, e.g. --P 2,2,2")
    n_values = args.n_values or ((args.n,) if args.n is not None else None)
    if not n_values:
        raise _Usage("cluster-scan needs --n-values or --n")
    rows = [r._asdict() for r in cluster_ratio_scan(args.P, n_values, budget=args.budget)]
    _emit_rows(args, ["n", "count", "ratio"], rows, out)
    return EXIT_OK


COMMANDS = {
    "count": (cmd_count, "closed-form |A_2p,s| counts (with --check: cross-check by enumeration)"),
    "sigma": (cmd_sigma, "limiting covariances sigma_pq and sigma_Q"),
    "enumerate": (cmd_enumerate, "dump the index set A_2p as CSV"),
    "oracle": (cmd_oracle, "exact finite-n expected trace or covariance"),
    "simulate": (cmd_simulate, "Monte Carlo covariance report"),
    "verify": (cmd_verify, "run the acceptance checks"),
    "cluster-scan": (cmd_cluster_scan, "cluster count ratios |B_P| / n^(sum P/2 - l/2)"),
}


class _Usage(Exception):
    pass


def _single(values, flag):
    if len(values) != 1:
        raise _Usage(f"{flag} takes a single integer here, got {values}")
    return values[0]


def build_parser():
    parser = argparse.ArgumentParser(prog="rcfluct", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--budget", type=float, help="enumeration budget (overrides RC_FLUCT_BUDGET)")

    parser.subcommands = {}
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        parser.subcommands[name] = p
        if name in ("count", "enumerate", "oracle", "simulate", "cluster-scan"):
            p.add_argument("--n", type=int)
        if name in ("count", "sigma", "enumerate", "oracle", "simulate"):
            p.add_argument("--p", type=_ints, help="exponent(s), comma separated where a list is allowed")
        if name in ("sigma", "oracle"):
            p.add_argument("--q", type=_ints)
        if name in ("count", "enumerate"):
            p.add_argument("--s", type=int, help="alternating-sum level")
        if name == "count":
            p.add_argument("--check", action="store_true", help="also count by enumeration")
        if name == "enumerate":
            p.add_argument("--mode", choices=MODES, default="mod_n")
        if name in ("sigma", "simulate"):
            p.add_argument("--Q", type=lambda t: tuple(_frac(x) for x in t.split(",")),
                           help="coefficients a_1,...,a_d of Q(x) = sum a_k x^(2k)")
        if name == "sigma":
            p.add_argument("--mu4", type=_frac)
            p.add_argument("--dist", choices=BUILTIN_KINDS, default="gaussian")
        if name == "oracle":
            p.add_argument("--dist", choices=BUILTIN_KINDS, default="gaussian")
        if name == "simulate":
            p.add_argument("--dist", dest="dist_flag", choices=BUILTIN_KINDS)
            p.add_argument("--reps", type=int)
            p.add_argument("--seed", type=int)
            p.add_argument("--path", choices=TRACE_PATHS)
            p.add_argument("--centering", choices=CENTERINGS)
            p.add_argument("--workers", type=int)
            p.add_argument("--config", help="JSON or TOML experiment file; flags override it")
            p.add_argument("--no-meta", action="store_true", help="omit the timing/version block")
            p.add_argument("--replicates-out", help="also write the w_p replicate table as CSV")
            p.add_argument("--wick", action="store_true",
                           help="compare E[w_p1 ... w_pl] over the --p list with the Gaussian-family value")
            p.add_argument("--check", action="store_true", help="exit 1 if any comparison fails")
        if name == "cluster-scan":
            p.add_argument("--P", type=_ints, help="even lengths 2p_1,...,2p_l")
            p.add_argument("--n-values", type=_ints)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command][0]
    buffer = io.StringIO()
    try:
        code = handler(args, buffer)
    except _Usage as exc:
        parser.subcommands[args.command].print_usage(sys.stderr)
        print(f"rcfluct {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceeded, IntegrityError) as exc:
        print(f"rcfluct {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, OSError) as exc:
        print(f"rcfluct {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = buffer.getvalue()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
