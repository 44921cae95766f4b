"""Command-line entry points.

Exit codes: 0 when every asserted tolerance holds, 2 on a tolerance
failure, 1 on usage or config errors.  The environment variable LRDX_SEED
overrides the configured master seed.
"""

from __future__ import annotations

import argparse
import sys

from .harness import (
    ConfigError,
    ExperimentConfig,
    ResultRecord,
    export,
    load_record,
    run_experiment,
)


def _finish(rec: ResultRecord, out: str | None) -> int:
    for row in rec.rows:
        print(f"  {row['stat_name']:<38} n={row['n']:<8} "
              f"estimate={row['estimate']:.6g}")
    ok = True
    for chk in rec.checks:
        status = "PASS" if chk["passed"] else "FAIL"
        ok = ok and chk["passed"]
        print(f"[{status}] {chk['name']} {chk['detail']}")
    if out:
        export(rec, "json", out)
        print(f"wrote {out}")
    return 0 if ok else 2


def _add_common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write the JSON record here")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="lrdx")
    sub = parser.add_subparsers(dest="command", required=True)

    p_tails = sub.add_parser("tails", help="tail-family diagnostics")
    tails_sub = p_tails.add_subparsers(dest="subcommand", required=True)
    p_tc = tails_sub.add_parser("check")
    p_tc.add_argument("--gamma", type=float, default=2.0)
    p_tc.add_argument("--family", default="lognormal",
                      choices=["lognormal", "superlognormal"])
    p_tc.add_argument("--depth", type=int, default=1)
    p_tc.add_argument("--c-scale", type=float, default=1.0)
    _add_common(p_tc)

    p_ren = sub.add_parser("renewal", help="renewal-dynamics experiments")
    ren_sub = p_ren.add_subparsers(dest="subcommand", required=True)
    p_q = ren_sub.add_parser("qlaw")
    p_q.add_argument("--beta", type=float, default=0.6)
    p_q.add_argument("--m", type=int, default=2)
    p_q.add_argument("--n", type=int, default=5000)
    p_q.add_argument("--reps", type=int, default=5000)
    _add_common(p_q)

    p_lim = sub.add_parser("limits", help="limit-object experiments")
    lim_sub = p_lim.add_subparsers(dest="subcommand", required=True)
    p_sa = lim_sub.add_parser("selfaffine")
    p_sa.add_argument("--m", type=int, default=2)
    p_sa.add_argument("--beta", type=float, default=0.6)
    p_sa.add_argument("--a", type=float, default=0.5)
    p_sa.add_argument("--k", type=int, default=64)
    p_sa.add_argument("--n-res", type=int, default=4096)
    p_sa.add_argument("--reps", type=int, default=20000)
    _add_common(p_sa)

    p_sim = sub.add_parser("simulate", help="run a simulation-backed config")
    p_sim.add_argument("--config", required=True)

    p_exp = sub.add_parser("experiment", help="run any experiment config")
    exp_sub = p_exp.add_subparsers(dest="subcommand", required=True)
    p_run = exp_sub.add_parser("run")
    p_run.add_argument("config")

    p_rep = sub.add_parser("report", help="convert a result record")
    p_rep.add_argument("--in", dest="infile", required=True)
    p_rep.add_argument("--format", dest="fmt", default="csv",
                       choices=["csv", "json"])
    p_rep.add_argument("--out", default=None)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0

    try:
        if args.command == "tails":
            cfg = ExperimentConfig(experiment="tails-check", family=args.family,
                                   gamma=args.gamma, depth=args.depth,
                                   c_scale=args.c_scale, seed=args.seed)
            return _finish(run_experiment(cfg), args.out)
        if args.command == "renewal":
            cfg = ExperimentConfig(experiment="qlaw", beta=args.beta, m=args.m,
                                   n_grid=(max(2, args.n // 10), args.n),
                                   replicas=args.reps, seed=args.seed)
            return _finish(run_experiment(cfg), args.out)
        if args.command == "limits":
            cfg = ExperimentConfig(experiment="selfaffine", beta=args.beta,
                                   m=args.m, scale_a=args.a, k_trunc=args.k,
                                   n_res=args.n_res, replicas=args.reps,
                                   seed=args.seed)
            return _finish(run_experiment(cfg), args.out)
        if args.command == "simulate":
            cfg = ExperimentConfig.from_file(args.config)
            if cfg.experiment not in ("main-trend", "big-jump"):
                print("simulate expects a simulation-backed experiment "
                      "(main-trend or big-jump)", file=sys.stderr)
                return 1
            return _finish(run_experiment(cfg), cfg.output)
        if args.command == "experiment":
            cfg = ExperimentConfig.from_file(args.config)
            return _finish(run_experiment(cfg), cfg.output)
        if args.command == "report":
            rec = load_record(args.infile)
            out = args.out or (args.infile.rsplit(".", 1)[0] + "." + args.fmt)
            export(rec, args.fmt, out)
            print(f"wrote {out}")
            return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return 1
    return 1


if __name__ == "__main__":
    sys.exit(main())
