"""Command-line runner.

Subcommands: verify, amgm, search, kaczmarz, wedge.  Exit codes:
0 success, 1 proved-case failure, 2 usage or config error, 3 verified
counterexample candidate.
"""

import argparse
import json
import sys

from . import report_io
from .amgm import MatrixFamily, amgm_gap, recht_gap
from .densecore import GENERATOR_KINDS, random_psd
from .kaczmarz import BenchConfig, bench_compare, random_system
from .norms import CATALOG, parse_norm
from .rng import Rng, derive
from .search import SearchConfig, search_counterexample
from .sweeps import run_verify_sweep
from .wedge import verify_wedge_properties

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_VIOLATION = 3


def _add_common(p):
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--epsilon", type=float, default=1e-8)
    p.add_argument("--out", default=None, help="output file path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1,
                   help="accepted for compatibility; trials use derived "
                        "seeds so results never depend on parallelism")
    p.add_argument("--config", default=None,
                   help="JSON file of defaults using the flag names")


def build_parser():
    parser = argparse.ArgumentParser(prog="amgmlab")
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers = {}

    p = sub.add_parser("verify", help="run the full proved-inequality sweep")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--norm", action="append", type=parse_norm, default=None,
                   help="restrict the norm catalog (repeatable)")
    _add_common(p)
    subparsers["verify"] = p

    p = sub.add_parser("amgm", help="with/without-replacement mean sweep")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--norm", action="append", type=parse_norm, default=None)
    p.add_argument("--trials", type=int, default=100)
    _add_common(p)
    subparsers["amgm"] = p

    p = sub.add_parser("search", help="randomized counterexample search")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--n", type=int, nargs="+", default=[4, 5])
    p.add_argument("--d", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--norm", action="append", type=parse_norm, default=None)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--perturb-steps", type=int, default=0)
    _add_common(p)
    subparsers["search"] = p

    p = sub.add_parser("kaczmarz", help="row-sampling order benchmark")
    p.add_argument("--rows", type=int, default=12)
    p.add_argument("--cols", type=int, default=4)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--steps", type=int, default=120)
    _add_common(p)
    subparsers["kaczmarz"] = p

    p = sub.add_parser("wedge", help="compound-matrix property sweep")
    p.add_argument("--d-max", type=int, default=6)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--trials", type=int, default=100)
    _add_common(p)
    subparsers["wedge"] = p

    return parser, subparsers


def _emit(args, config, reports):
    if args.format == "csv":
        text = report_io.gap_reports_csv(config, reports)
    else:
        text = report_io.gap_reports_json(config, reports)
    if args.out:
        report_io.write_text(args.out, text)
    else:
        sys.stdout.write(text)


def _norm_list(args):
    return list(args.norm) if args.norm else list(CATALOG)


def cmd_verify(args) -> int:
    config = {"command": "verify", "trials": args.trials, "seed": args.seed,
              "epsilon": args.epsilon,
              "norms": [s.label() for s in _norm_list(args)]}
    reports = run_verify_sweep(args.trials, args.seed, args.epsilon,
                               norms=_norm_list(args))
    _emit(args, config, reports)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        print(f"FAIL {r.check} {r.context} rel_gap={r.rel_gap:.3e}",
              file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_amgm(args) -> int:
    if args.m > args.n:
        print(f"error: m={args.m} exceeds n={args.n} for the "
              "without-replacement mean", file=sys.stderr)
        return EXIT_USAGE
    norms = _norm_list(args)
    config = {"command": "amgm", "m": args.m, "n": args.n, "d": args.d,
              "norms": [s.label() for s in norms], "trials": args.trials,
              "seed": args.seed, "epsilon": args.epsilon}
    reports = []
    proved_failure = False
    for t in range(args.trials):
        rng = derive(args.seed, t)
        kind = GENERATOR_KINDS[rng.randint(len(GENERATOR_KINDS))]
        family = MatrixFamily([random_psd(rng, args.d, kind)
                               for _ in range(args.n)])
        for spec in norms:
            rep = amgm_gap(family, args.m, spec, args.epsilon, seed=t)
            reports.append(rep)
            if rep.params["regime"] == "proved" and not rep.passed:
                proved_failure = True
        rg = recht_gap(family, args.m, args.epsilon, seed=t)
        reports.append(rg)
        if rg.params["regime"] == "proved" and not rg.passed:
            proved_failure = True
    _emit(args, config, reports)
    return EXIT_FAIL if proved_failure else EXIT_OK


def cmd_search(args) -> int:
    cfg = SearchConfig(
        m=args.m, n_values=tuple(args.n), d_values=tuple(args.d),
        norms=tuple(s.label() for s in _norm_list(args)),
        trials=args.trials, perturb_steps=args.perturb_steps,
        seed=args.seed, epsilon=args.epsilon)
    report = search_counterexample(cfg)
    text = report.to_json() + "\n"
    if args.out:
        report_io.write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_VIOLATION if report.violation_found else EXIT_OK


def cmd_kaczmarz(args) -> int:
    rng = Rng(args.seed)
    system = random_system(rng, args.rows, args.cols)
    cfg = BenchConfig(trials=args.trials, steps=args.steps, seed=args.seed)
    report = bench_compare(system, cfg)
    report.config["command"] = "kaczmarz"
    report.config["underdetermined"] = args.rows < args.cols
    if args.out:
        header = report_io.config_header(report.config)
        report_io.write_text(args.out + ".csv",
                             header + "\n" + "\n".join(report.csv_lines()) + "\n")
        report_io.write_text(args.out + ".json", report.to_json() + "\n")
    else:
        sys.stdout.write(report.to_json() + "\n")
    return EXIT_OK


def cmd_wedge(args) -> int:
    import math

    if math.comb(args.d_max, min(args.k_max, args.d_max // 2)) > 10 ** 4:
        print("error: compound dimension guard exceeded", file=sys.stderr)
        return EXIT_USAGE
    config = {"command": "wedge", "d_max": args.d_max, "k_max": args.k_max,
              "trials": args.trials, "seed": args.seed,
              "epsilon": args.epsilon}
    results = []
    all_ok = True
    for t in range(args.trials):
        rng = derive(args.seed, t)
        d = 2 + rng.randint(args.d_max - 1)
        k = 1 + rng.randint(min(args.k_max, d))
        A = random_psd(rng, d, GENERATOR_KINDS[rng.randint(len(GENERATOR_KINDS))])
        B = random_psd(rng, d, GENERATOR_KINDS[rng.randint(len(GENERATOR_KINDS))])
        rep = verify_wedge_properties(A, B, k, tol=max(args.epsilon, 1e-8))
        results.append({"trial": t, "d": d, "k": k,
                        "properties": rep.entries})
        all_ok = all_ok and rep.all_ok
    text = json.dumps({"config": config, "results": results}, indent=2,
                      sort_keys=True) + "\n"
    if args.out:
        report_io.write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all_ok else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "amgm": cmd_amgm, "search": cmd_search,
            "kaczmarz": cmd_kaczmarz, "wedge": cmd_wedge}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = build_parser()
    # A --config file supplies defaults for its subcommand; explicit flags
    # still win because file values are installed before parsing.
    if "--config" in argv and argv:
        try:
            path = argv[argv.index("--config") + 1]
            with open(path) as fh:
                file_cfg = json.load(fh)
        except (IndexError, OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config file: {exc}", file=sys.stderr)
            return EXIT_USAGE
        command = argv[0]
        if command in subparsers:
            defaults = {}
            for key, value in file_cfg.items():
                dest = key.replace("-", "_")
                if dest in ("command",):
                    continue
                if dest in ("norm", "norms"):
                    value = [parse_norm(v) for v in value]
                    dest = "norm"
                if dest in ("n_values",):
                    dest = "n"
                if dest in ("d_values",):
                    dest = "d"
                defaults[dest] = value
            subparsers[command].set_defaults(**defaults)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
