"""Command-line interface.

Three subcommands: `compute` runs the period pipeline and emits the potential
with its counts and checks, `gw` runs the reconstruction oracle alone, and
`verify` runs the whole property suite (every check group, the stability
re-run, and the seeded random frame tests).

Reports are deterministic byte for byte for a fixed config and seed: keys are
sorted, rationals are exact "p/q" strings, and the in-file timing field is
always null (real timings go to stderr, which is not part of the report).
Exit status: 0 all requested checks passed, 1 check failure, 2 bad config,
3 window or resource overflow.
"""

import argparse
import json
import sys

from ._coeff import rat_str
from .gw import reconstruct
from .pipeline import CHECK_GROUPS, ConfigError, RunConfig, run_pipeline
from .reports import all_pass
from .series import MAX_TRUNCATION, WindowOverflowError


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mirrorcp",
        description="Exact curve counts on projective spaces from mirror periods, "
        "with a full verification report.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser(
        "compute", help="run the period pipeline; emit potential, counts, checks"
    )
    _pipeline_flags(compute, defaults=False, with_checks=True)
    compute.add_argument(
        "--compare-oracle",
        action="store_true",
        help="also reconstruct the counts independently and compare potentials",
    )
    compute.add_argument(
        "--dmax", type=int, default=None, help="override the oracle reconstruction depth"
    )

    gw = sub.add_parser("gw", help="reconstruction oracle only: emit the count table")
    gw.add_argument("--n", type=int, required=True, help="projective space dimension")
    gw.add_argument("--dmax", type=int, required=True, help="largest curve degree")
    _output_flags(gw)

    verify = sub.add_parser(
        "verify",
        help="full property suite: all check groups, stability re-run, random frames",
    )
    _pipeline_flags(verify, defaults=True, with_checks=False)
    verify.add_argument("--compare-oracle", action="store_true")
    return parser


def _pipeline_flags(p, defaults, with_checks):
    if defaults:
        p.add_argument("--n", type=int, default=2, help="projective space dimension")
        p.add_argument("--degree", type=int, default=6, help="deformation truncation order")
    else:
        p.add_argument("--n", type=int, required=True, help="projective space dimension")
        p.add_argument(
            "--degree", type=int, required=True, help="deformation truncation order"
        )
    p.add_argument(
        "--hbar-depth",
        type=int,
        default=None,
        dest="hbar_depth",
        help="instanton terms kept in the base period (default: degree + 2)",
    )
    p.add_argument(
        "--window-top",
        type=int,
        default=None,
        dest="window_top",
        help="override the top hbar level of the working window",
    )
    if with_checks:
        p.add_argument(
            "--checks",
            default="all",
            help="comma list from {%s}, or all/none" % ",".join(CHECK_GROUPS),
        )
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    _output_flags(p)


def _output_flags(p):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except WindowOverflowError as exc:
        print("window error: %s" % exc, file=sys.stderr)
        return 3


def _dispatch(args):
    if args.command == "gw":
        return _cmd_gw(args)
    config = RunConfig(
        n=args.n,
        t_degree=args.degree,
        depth=args.hbar_depth,
        window_top=args.window_top,
        checks=getattr(args, "checks", "all"),
        compare_oracle=args.compare_oracle,
        seed=args.seed,
        oracle_dmax=getattr(args, "dmax", None),
    )
    result = run_pipeline(config)
    report = {
        "config": dict(config.echo(), command=args.command),
        "gw": _gw_entries(result.gw),
        "checks": result.checks,
        "timings_ms": None,
    }
    if args.command == "compute":
        report["phi_coefficients"] = {
            ",".join(str(e) for e in exps): rat_str(c)
            for exps, c in result.potential.phi.iter_terms()
        }
    _emit(report, args, config.n)
    print("timings_ms %s" % json.dumps(result.timings, sort_keys=True), file=sys.stderr)
    return 0 if all_pass(result.checks) else 1


def _cmd_gw(args):
    if args.n < 1:
        raise ConfigError("n must be an integer >= 1")
    if args.dmax < 1:
        raise ConfigError("dmax must be an integer >= 1")
    if args.n >= 2 and (args.n + 1) * args.dmax + args.n - 3 > MAX_TRUNCATION:
        raise ConfigError(
            "dmax too large for the packed-exponent limit (%d)" % MAX_TRUNCATION
        )
    table = reconstruct(args.n, args.dmax)
    report = {
        "config": {"command": "gw", "n": args.n, "dmax": args.dmax},
        "gw": _gw_entries(table),
        "checks": [],
        "timings_ms": None,
    }
    _emit(report, args, args.n)
    return 0


def _gw_entries(table):
    return [
        {"d": d, "m": list(m), "N": rat_str(v)}
        for (d, m), v in sorted(table.entries.items())
        if v
    ]


def _emit(report, args, n):
    if args.format == "csv":
        text = _csv(report["gw"], n)
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(entries, n):
    header = ["d"] + ["m_%d" % k for k in range(2, n + 1)] + ["N"]
    lines = [",".join(header)]
    for e in entries:
        lines.append(",".join([str(e["d"])] + [str(x) for x in e["m"]] + [e["N"]]))
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    sys.exit(main())
