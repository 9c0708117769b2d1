"""Command-line front end: ``kbsmith {smith,hnf,homology,gen,bench,verify}``.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure,
3 budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from math import prod
from typing import Optional, Sequence

from .benchgen import ExperimentConfig, generate_instance, run_experiment, write_records
from .fileio import MatrixFormatError, read_matrix, write_matrix
from .hermite import BudgetExhausted, hnf1, hnf2
from .homology import format_vector, homology_group
from .matrix import rank_oracle
from .smith import KB3, VARIANTS, SmithDecomposition, SmithStats, smith, verify_decomposition

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for verification
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _variant(text: str) -> str:
    v = text.lower()
    if v not in VARIANTS:
        raise argparse.ArgumentTypeError(f"unknown variant {text!r} (choose from {', '.join(VARIANTS)})")
    return v


def _variant_list(text: str) -> list[str]:
    out = [_variant(v) for v in text.split(",") if v.strip()]
    if not out:
        raise argparse.ArgumentTypeError("no variants given")
    return out


def _config(text: str) -> ExperimentConfig:
    try:
        return ExperimentConfig.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _seconds_line(durations: Sequence[float]) -> str:
    return " - ".join(str(int(d)) for d in durations)


def _budget_message(exc: BudgetExhausted) -> str:
    d = exc.diagnostics
    return (f"budget exhausted: {exc}; {d['elementary_ops']} operations, "
            f"{d['columns_processed']} columns processed, mean digits below diagonal "
            f"{d['mean_digits_below_diagonal']:.1f}")


# -- subcommands ------------------------------------------------------------------


def cmd_smith(args) -> int:
    m = read_matrix(args.input)
    want = args.transforms or args.u_out or args.v_out
    kwargs = {}
    if args.budget is not None:
        kwargs["max_ops"] = args.budget
    if args.time_budget is not None:
        kwargs["max_seconds"] = args.time_budget
    try:
        dec = smith(m, args.variant, bool(want), **kwargs)
    except BudgetExhausted as exc:
        print(_budget_message(exc), file=sys.stderr)
        return EXIT_BUDGET
    print(dec.run_length.render())
    if args.stats:
        print(f"passes: {dec.stats.hnf_invocations}")
        if not args.no_timing:
            print(f"pass seconds: {_seconds_line(dec.stats.per_pass_durations)}")
            print(f"total seconds: {dec.stats.total_seconds:.3f}")
    if args.s_out:
        write_matrix(dec.s, args.s_out)
    if want:
        write_matrix(dec.u, args.u_out or "u.txt")
        write_matrix(dec.v, args.v_out or "v.txt")
    return EXIT_OK


def cmd_hnf(args) -> int:
    m = read_matrix(args.input)
    res = (hnf1 if args.style == 1 else hnf2)(m)
    diag = res.matrix.diagonal()[: res.rank]
    print(f"rank: {res.rank}")
    print("diagonal: " + " ".join(map(str, res.matrix.diagonal())))
    print(f"diagonal product: {prod(diag)}")
    if not args.no_timing:
        print(f"seconds: {res.elapsed:.3f}")
    if args.output:
        write_matrix(res.matrix, args.output)
    return EXIT_OK


def cmd_homology(args) -> int:
    dprime = read_matrix(args.dprime)
    d = read_matrix(args.d)
    try:
        res = homology_group(dprime, d, args.variant)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(res.group_string())
    if args.generators:
        lines = [f"{o} {format_vector(g)}" for o, g in zip(res.orders, res.generators)]
        if args.generators == "-":
            print("\n".join(lines))
        else:
            with open(args.generators, "w", encoding="ascii", newline="\n") as fh:
                fh.write("".join(line + "\n" for line in lines))
    return EXIT_OK


def cmd_gen(args) -> int:
    cfg = args.config
    os.makedirs(args.out, exist_ok=True)
    width = len(str(cfg.repetitions - 1))
    manifest = {"config": cfg.label(), "seed": args.seed, "instances": []}
    for i in range(cfg.repetitions):
        inst = generate_instance(cfg, args.seed, i)
        name = f"instance_{i:0{width}d}.txt"
        write_matrix(inst.matrix, os.path.join(args.out, name))
        manifest["instances"].append({
            "file": name,
            "index": i,
            "derived_seed": inst.seed,
            "planted_diagonal": inst.planted_diagonal,
            "planted_smith": inst.planted_smith.render(),
        })
    with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {cfg.repetitions} matrices to {args.out}")
    return EXIT_OK


def cmd_bench(args) -> int:
    variants = args.variants
    budgets = {}
    if args.budget is not None or args.time_budget is not None:
        for v in variants:
            budgets[v] = (args.budget, args.time_budget)
    report = run_experiment(args.config, args.seed, variants, budgets, jobs=args.jobs)
    for line in report.text_lines(timing=not args.no_timing):
        print(line)
    if args.records:
        write_records(report.records, args.records)
    if report.failures():
        return EXIT_VERIFY
    if any(report.exhausted(v) for v in variants):
        return EXIT_BUDGET
    return EXIT_OK


def cmd_verify(args) -> int:
    d = read_matrix(args.input)
    s, u, v = read_matrix(args.s), read_matrix(args.u), read_matrix(args.v)
    # the rank comes from d itself, so a truncated s fails the chain check
    dec = SmithDecomposition(s, rank_oracle(d), None, "external", SmithStats(), u, v)
    report = verify_decomposition(d, dec)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_VERIFY


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kbsmith", description="Exact Hermite/Smith normal forms and homology.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("smith", help="Smith normal form of a matrix file")
    s.add_argument("input")
    s.add_argument("--variant", type=_variant, default=KB3)
    s.add_argument("--transforms", action="store_true", help="write u and v (default u.txt, v.txt)")
    s.add_argument("--u-out")
    s.add_argument("--v-out")
    s.add_argument("--s-out")
    s.add_argument("--stats", action="store_true", help="print HNF pass count and durations")
    s.add_argument("--no-timing", action="store_true")
    s.add_argument("--budget", type=int, help="elementary operation budget")
    s.add_argument("--time-budget", type=float, help="wall-clock budget in seconds")
    s.set_defaults(func=cmd_smith)

    h = sub.add_parser("hnf", help="one Hermite reduction")
    h.add_argument("input")
    h.add_argument("--style", type=int, choices=(1, 2), default=1)
    h.add_argument("-o", "--output")
    h.add_argument("--no-timing", action="store_true")
    h.set_defaults(func=cmd_hnf)

    g = sub.add_parser("homology", help="ker d' / im d with generating cycles")
    g.add_argument("dprime")
    g.add_argument("d")
    g.add_argument("--variant", type=_variant, default=KB3)
    g.add_argument("--generators", metavar="PATH", help="write cycles ('-' for stdout)")
    g.set_defaults(func=cmd_homology)

    gen = sub.add_parser("gen", help="generate matrices with planted Smith forms")
    gen.add_argument("--config", type=_config, required=True, help="reps,rows,cols,rank,diag_max,steps,alpha_max")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", default=".")
    gen.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="run an experiment over generated matrices")
    b.add_argument("--config", type=_config, required=True)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--variants", type=_variant_list, default=list(VARIANTS))
    b.add_argument("--budget", type=int, help="elementary operation budget per run")
    b.add_argument("--time-budget", type=float, help="seconds per run")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--records", help="write JSON Lines records here")
    b.add_argument("--no-timing", action="store_true")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify", help="check s = v d u for given matrix files")
    v.add_argument("input")
    v.add_argument("--s", required=True)
    v.add_argument("--u", required=True)
    v.add_argument("--v", required=True)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be positive")
    try:
        return args.func(args)
    except (MatrixFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
