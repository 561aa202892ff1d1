"""Command line: ``eval``, ``sweep``, ``solve`` and ``mc``.

Exit codes: 0 success, 2 bad arguments, 3 solver target not reachable,
4 cross-method disagreement in a sweep row.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from ._validation import NotReachable
from .closedform import approx_success_probability, closed_form_evaluation
from .core import InterferometerConfig, PhotonState, evolve_state, exact_success_probability_product
from .montecarlo import estimate_probabilities
from .solver import DesignQuery, min_beam_splitters, success_probability

EXIT_OK, EXIT_USAGE, EXIT_UNREACHABLE, EXIT_MISMATCH = 0, 2, 3, 4
SWEEP_HEADER = ("n", "eta", "p_exact", "p_closed", "p_approx")
CROSS_METHOD_TOL = 1e-10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(v):
    if v is None:
        return ""
    return format(v, ".12g")


def _round12(v):
    return None if v is None else float(format(v, ".12g"))


def _emit(stream, record, fmt):
    if fmt == "json":
        stream.write(json.dumps(record, allow_nan=False) + "\n")
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(record.keys())
        writer.writerow(_fmt(v) if isinstance(v, float) else v for v in record.values())
        stream.write(buf.getvalue())


def _config(n, eta, theta):
    try:
        return InterferometerConfig(n, eta, theta)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_eval(args, out):
    cfg = _config(args.n, args.eta, args.theta)
    fallback = False
    if args.method == "product":
        p = exact_success_probability_product(cfg)
    elif args.method == "closed":
        p, fallback = closed_form_evaluation(cfg)
    else:
        if cfg.eta == 1.0:
            raise UsageError("approx method is undefined at eta = 1")
        p = approx_success_probability(cfg.n_splitters, cfg.eta)
    record = {
        "n": cfg.n_splitters,
        "eta": cfg.eta,
        "theta": cfg.theta,
        "method": args.method,
        "p_success": p,
        "fallback_used": fallback,
    }
    _emit(out, record, args.format or "json")
    return EXIT_OK


def sweep_rows(eta_list, n_min, n_max, step, theta=None):
    """Rows in eta-outer, n-inner order."""
    for eta in eta_list:
        for n in range(n_min, n_max + 1, step):
            cfg = InterferometerConfig(n, eta, theta)
            p_exact = exact_success_probability_product(cfg)
            p_closed = closed_form_evaluation(cfg).p_success
            p_approx = None if eta == 1.0 else approx_success_probability(n, eta)
            yield {"n": n, "eta": eta, "p_exact": p_exact, "p_closed": p_closed, "p_approx": p_approx}


def cmd_sweep(args, out):
    try:
        etas = [float(tok) for tok in args.eta_list.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --eta-list: {exc}") from exc
    if not etas:
        raise UsageError("--eta-list is empty")
    n_max = args.n_min if args.n_max is None else args.n_max
    if args.n_min < 1 or n_max < args.n_min or args.step < 1:
        raise UsageError("need 1 <= n-min <= n-max and step >= 1")
    for eta in etas:
        _config(args.n_min, eta, args.theta)

    fmt = args.format or "csv"
    rows = []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in sweep_rows(etas, args.n_min, n_max, args.step, args.theta):
        if abs(row["p_exact"] - row["p_closed"]) > CROSS_METHOD_TOL:
            print(
                f"error: evaluators disagree at n={row['n']}, eta={row['eta']}: "
                f"{row['p_exact']!r} vs {row['p_closed']!r}",
                file=sys.stderr,
            )
            return EXIT_MISMATCH
        if fmt == "csv":
            writer.writerow(_fmt(row[k]) if k != "n" else row[k] for k in SWEEP_HEADER)
        else:
            rows.append({k: (row[k] if k == "n" else _round12(row[k])) for k in SWEEP_HEADER})
    if fmt == "csv":
        out.write(buf.getvalue())
    else:
        out.write(json.dumps(rows, allow_nan=False) + "\n")
    return EXIT_OK


def cmd_solve(args, out):
    try:
        query = DesignQuery(args.eta, args.target, args.n_max)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    try:
        n = min_beam_splitters(query)
    except NotReachable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    record = {
        "eta": query.eta,
        "target": query.target_p,
        "n_min": n,
        "p_at_n_min": success_probability(n, query.eta),
        "p_at_n_min_minus_1": success_probability(n - 1, query.eta) if n > 1 else None,
    }
    _emit(out, record, args.format or "json")
    return EXIT_OK


def cmd_mc(args, out):
    cfg = _config(args.n, args.eta, args.theta)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.seed < 0:
        raise UsageError("--seed must be >= 0")
    report = estimate_probabilities(cfg, args.trials, args.seed, n_jobs=args.jobs)
    exact = evolve_state(PhotonState.input_port(), cfg)
    p_exact = exact_success_probability_product(cfg)
    diff = report.p_detect_b - p_exact
    if report.se_detect_b > 0:
        z = diff / report.se_detect_b
    else:
        # zero-variance sample: only exact agreement (up to round-off) has a z
        z = 0.0 if abs(diff) <= 1e-12 else None
    record = {"n": cfg.n_splitters, "eta": cfg.eta, "theta": cfg.theta}
    record.update(report.to_dict())
    record.update({"p_exact": p_exact, "p_absorbed_exact": exact.p_absorbed, "z_score": z})
    _emit(out, record, args.format or "json")
    return EXIT_OK


def build_parser():
    parser = _Parser(
        prog="imperfect-ifm",
        description="Success probability of interaction-free measurement with an imperfect absorber.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, n_required=True):
        if n_required:
            p.add_argument("--n", type=int, required=True, help="number of beam splitters")
        p.add_argument("--theta", type=float, default=None, help="splitter angle in radians (default pi/2N)")
        p.add_argument("--format", choices=("csv", "json"), default=None)

    p = sub.add_parser("eval", help="evaluate P(N, eta) once")
    common(p)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--method", choices=("product", "closed", "approx"), default="product")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="table of P over N for several eta")
    common(p, n_required=False)
    p.add_argument("--eta-list", required=True, help="comma separated eta values")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--step", "--n-step", dest="step", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("solve", help="fewest splitters reaching a target P")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--n-max", type=int, default=10**6)
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("mc", help="Monte Carlo trajectory estimate")
    common(p)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1, help="worker threads (does not change results)")
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv=None, stdout=None):
    out = sys.stdout if stdout is None else stdout
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be >= 1")
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
