"""Command-line entry point (`synth`)."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness as hn


def _cmd_gen_random(args) -> int:
    regexes, symbols = hn.gen_random_regexes(args.count, args.alphabet_size, args.seed)
    lines = [f"#alphabet {symbols}"] + regexes
    Path(args.output).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(regexes)} regexes over alphabet {symbols!r} to {args.output}")
    return 0


def _cmd_make_dataset(args) -> int:
    try:
        lines = Path(args.regexes).read_text(encoding="utf-8").splitlines()
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    config = hn.InstanceConfig(
        count_pos=args.count_pos, count_neg=args.count_neg, max_len=args.max_len,
        neg_mode=args.neg_mode, seed=args.seed, alphabet=args.alphabet)
    instances, skips = hn.make_instances(lines, config)
    hn.save_dataset(instances, args.output)
    print(f"wrote {len(instances)} instances to {args.output}")
    if skips:
        print(f"skipped {len(skips)} regexes:", file=sys.stderr)
        for skip in skips:
            print(f"  line {skip.line_no}: {skip.reason}: {skip.text}", file=sys.stderr)
    return 0


def _cmd_run(args) -> int:
    try:
        instances = hn.load_dataset(args.dataset)
    except (OSError, ValueError, KeyError) as err:
        print(f"error: cannot load dataset: {err}", file=sys.stderr)
        return 1
    if not instances:
        print("error: dataset is empty", file=sys.stderr)
        return 1
    methods = []
    if args.compare_vanilla and args.mode == "split":
        methods.append(hn.MethodConfig(engine=args.engine, mode="vanilla"))
    methods.append(hn.MethodConfig(
        engine=args.engine, mode=args.mode, splitter=args.splitter,
        strategy=args.strategy, fallback=args.fallback))
    report = hn.run_benchmark(instances, methods, timeout=args.timeout, jobs=args.jobs)
    hn.save_report(report, args.output)
    _print_aggregates(report)
    print(f"rows: {args.output}.jsonl  aggregates: {args.output}.csv")
    return 0


def _cmd_score(args) -> int:
    try:
        report = hn.load_report(args.report)
    except (OSError, ValueError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    _print_aggregates(report)
    return 0


def _print_aggregates(report: hn.RunReport):
    columns = ["method", "instances", "success_rate", "sem_acc",
               "fully_accurate", "runtime", "win_ratio", "runtime_joint_success"]
    present = [c for c in columns if any(c in a for a in report.aggregates)]
    widths = {c: max(len(c), *(len(str(a.get(c, ""))) for a in report.aggregates))
              for c in present}
    print("  ".join(c.ljust(widths[c]) for c in present))
    for agg in report.aggregates:
        print("  ".join(str(agg.get(c, "")).ljust(widths[c]) for c in present))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="synth",
        description="Regex synthesis from examples: engines, split framework, benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-random", help="generate random target regexes")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--alphabet-size", type=int, default=10,
                   choices=[2, 4, 6, 8, 10])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_gen_random)

    p = sub.add_parser("make-dataset", help="generate examples for target regexes")
    p.add_argument("--regexes", required=True, help="file with one regex per line")
    p.add_argument("--alphabet", default=None,
                   help="explicit alphabet symbols (default: #alphabet directive or induced)")
    p.add_argument("--count-pos", type=int, default=20)
    p.add_argument("--count-neg", type=int, default=20)
    p.add_argument("--max-len", type=int, default=10)
    p.add_argument("--neg-mode", default="symbol-perturb",
                   choices=["symbol-perturb", "regex-perturb"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_make_dataset)

    p = sub.add_parser("run", help="run a benchmark over a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--engine", default="alpharegex",
                   choices=["alpharegex", "bluefringe"])
    p.add_argument("--mode", default="vanilla", choices=["vanilla", "split"])
    p.add_argument("--splitter", default="gt",
                   help="gt | runs | file:PATH (split mode only)")
    p.add_argument("--strategy", default="seq",
                   choices=["seq", "par", "prefix-all"])
    p.add_argument("--timeout", type=float, default=3.0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--fallback", action="store_true",
                   help="retry the bare engine when a split fails")
    p.add_argument("--compare-vanilla", action="store_true",
                   help="also run the vanilla engine for pairwise stats")
    p.add_argument("-o", "--output", required=True,
                   help="report prefix (writes PREFIX.jsonl and PREFIX.csv)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("score", help="recompute and print report aggregates")
    p.add_argument("--report", required=True, help="report prefix")
    p.set_defaults(func=_cmd_score)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
