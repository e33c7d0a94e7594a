"""Command-line frontend.

Exit codes: 0 success, 1 validation error, 2 usage error (argparse).
Randomized subcommands require an explicit --seed.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import analysis, core, matcher, signed, tcam, worstcase
from .errors import TcamSplitError


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _partition_from_args(args) -> core.Partition:
    return core.partition_from_text(args.weights, args.width)


def cmd_compile(args) -> int:
    p = _partition_from_args(args)
    table = tcam.synthesize_lpm(p)
    lo, hi = signed.lpm_bounds(p)
    lam = len(table)
    if args.format == "json":
        obj = {
            "width": table.width,
            "rules": [{"pattern": str(r.pattern), "target": r.target} for r in table.rules],
            "lambda": lam,
            "lpm_lower": lo,
            "lpm_upper": hi,
        }
        if args.emit_sequence:
            obj["sequence"] = core.sequence_to_json_obj(matcher.bit_matcher(p))
        _emit(json.dumps(obj, indent=2), args.out)
    else:
        lines = [tcam.table_to_text(table)]
        lines.append(f"# lambda={lam} lpm_lower={lo} lpm_upper={hi}")
        if args.emit_sequence:
            for t in matcher.bit_matcher(p):
                lines.append(f"# tx {t.src} {t.size} {t.dst}")
        _emit("\n".join(lines), args.out)
    return 0


def cmd_bounds(args) -> int:
    p = _partition_from_args(args)
    rep = signed.bounds_report(p)
    lam = matcher.min_rules(p)
    fields = {
        "trivial_lower": rep.trivial_lower,
        "lpm_lower": rep.lpm_lower,
        "lpm_upper": rep.lpm_upper,
        "general_lower": rep.general_lower,
        "worstcase_cap": rep.worstcase_cap,
        "lambda": lam,
        "phi_total": rep.phi_total,
        "phi_max": rep.phi_max,
    }
    if args.format == "json":
        _emit(json.dumps(fields), args.out)
    else:
        _emit("\n".join(f"{k}={v}" for k, v in fields.items()), args.out)
    return 0


def cmd_verify(args) -> int:
    table = tcam.table_from_text(_read_input(args.rules), args.width)
    counts = tcam.evaluate_table(table)
    if args.format == "json":
        _emit(json.dumps({"unmatched": counts[0], "counts": counts[1:]}), args.out)
    elif args.format == "csv":
        _emit(",".join(str(c) for c in counts[1:]), args.out)
    else:
        lines = [f"{t} {c}" for t, c in enumerate(counts) if t > 0]
        if counts[0]:
            lines.append(f"unmatched {counts[0]}")
        _emit("\n".join(lines), args.out)
    return 0


def cmd_sequence(args) -> int:
    p = _partition_from_args(args)
    if args.matcher == "bm":
        seq = matcher.bit_matcher(p)
    elif args.matcher == "sm":
        seq = matcher.signed_matcher(p)
    elif args.matcher == "anchor":
        seq = matcher.anchor_sequence(p)
    else:
        if args.seed is None:
            raise TcamSplitError("--seed is required for the random matcher")
        seq = matcher.random_matcher(p, random.Random(args.seed))
    if args.format == "json":
        _emit(json.dumps(core.sequence_to_json_obj(seq)), args.out)
    else:
        _emit(core.sequence_to_text(seq), args.out)
    return 0


def cmd_sample(args) -> int:
    stats = analysis.run_experiment(args.k, args.width, args.trials, args.seed)
    if args.format == "json":
        _emit(json.dumps(stats.__dict__), args.out)
    else:
        _emit(stats.csv_header() + "\n" + stats.csv_row(), args.out)
    return 0


def cmd_worstcase(args) -> int:
    if args.kind == "k2":
        p = worstcase.gen_k2(args.width)
    elif args.kind == "k3":
        p = worstcase.gen_k3(args.width)
    elif args.kind == "triplets":
        p = worstcase.gen_triplets(args.k, args.width)
    else:
        p = worstcase.gen_general_hard(args.k, args.width)
    lam = matcher.min_rules(p)
    if args.format == "json":
        _emit(
            json.dumps({"width": p.width, "weights": list(p.weights), "lambda": lam}),
            args.out,
        )
    else:
        _emit(",".join(str(w) for w in p.weights) + f" lambda={lam}", args.out)
    return 0


def cmd_normalize(args) -> int:
    counts = analysis.read_counts(_read_input(args.counts))
    p = analysis.normalize_counts(counts, args.multiple)
    if args.format == "json":
        _emit(core.partition_to_json(p), args.out)
    else:
        _emit(f"width={p.width}\n" + ",".join(str(w) for w in p.weights), args.out)
    return 0


def cmd_rw(args) -> int:
    p = Fraction(args.p)
    val = analysis.rw(p, args.n)
    _emit(str(val), args.out)
    return 0


def cmd_game(args) -> int:
    trace = analysis.play_game(args.strategy, args.m, random.Random(args.seed))
    mean_gain = sum(trace.gains) / len(trace.gains) if trace.gains else 0.0
    if args.format == "json":
        _emit(
            json.dumps(
                {
                    "strategy": trace.strategy,
                    "m": trace.m,
                    "turns": trace.turns,
                    "mean_gain": mean_gain,
                }
            ),
            args.out,
        )
    else:
        _emit(f"turns={trace.turns} mean_gain={mean_gain:.4f}", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tcamsplit",
        description="Compile weighted traffic splits into minimal prefix rule tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("table", "json", "csv"), default="table")
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("compile", help="partition -> minimal prefix rule table")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--width", type=int, default=None)
    sp.add_argument("--emit-sequence", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("bounds", help="size bounds for a partition")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--width", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("verify", help="evaluate a rule table (file or '-')")
    sp.add_argument("--rules", required=True)
    sp.add_argument("--width", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sequence", help="emit a zeroing transaction sequence")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--width", type=int, default=None)
    sp.add_argument("--matcher", choices=("bm", "rm", "sm", "anchor"), default="bm")
    sp.add_argument("--seed", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_sequence)

    sp = sub.add_parser("sample", help="Monte Carlo partition statistics")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--width", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("worstcase", help="extremal partition generators")
    sp.add_argument("--kind", choices=("k2", "k3", "triplets", "general"), required=True)
    sp.add_argument("--width", type=int, required=True)
    sp.add_argument("--k", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_worstcase)

    sp = sub.add_parser("normalize", help="round raw counts to a partition")
    sp.add_argument("--counts", required=True, help="file of counts or '-'")
    sp.add_argument("--multiple", type=int, default=8)
    common(sp)
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("rw", help="expected walk displacement, exact")
    sp.add_argument("--p", required=True, help="probability as a fraction, e.g. 1/6")
    sp.add_argument("--n", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_rw)

    sp = sub.add_parser("game", help="bit-zeroing game simulator")
    sp.add_argument("--strategy", choices=("opt", "rnd", "mix"), required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_game)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TcamSplitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
