"""Command-line front end: ``pww {generate,run,baseline,bench-delay,bench-work}``."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
from contextlib import contextmanager
from typing import Iterable, Sequence

from . import bench
from .detect import REMOTE_SHELL, EpisodeMatch, get_detector
from .engine import COST_MODELS, SEQUENTIAL, CONCURRENT, WorkLedger, get_cost_model, run_pww
from .errors import ConfigError
from .stream import StreamConfig
from .synth import DEFAULT_ALPHABET, InjectionError, InjectionSpec, gen_background, inject_episode
from .trace import TraceParseError, read_trace, write_trace

MATCH_HEADER = ["episode", "start", "end", "detection_time", "delay", "crosses_gap", "level"]


def _default_seed() -> int:
    raw = os.environ.get("PWW_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"pww: error: PWW_SEED must be an integer, got {raw!r}")


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def int_list(text: str) -> list[int]:
    """``4,8,16`` or a doubling range ``4..512``."""
    if ".." in text:
        lo, _, hi = text.partition("..")
        a, b = int(lo), int(hi)
        if a < 1 or b < a:
            raise argparse.ArgumentTypeError(f"bad range {text!r}")
        out = []
        while a <= b:
            out.append(a)
            a *= 2
        return out
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def parse_injection(text: str, index: int, seed: int) -> InjectionSpec:
    """``start=500,gap=32[,x=5,y=6,exe=sh,max_span=100]``."""
    fields = {}
    for part in text.split(","):
        key, sep, value = part.strip().partition("=")
        if not sep:
            raise ValueError(f"bad --inject field {part!r}")
        fields[key] = value
    unknown = set(fields) - {"start", "gap", "x", "y", "exe", "max_span"}
    if unknown:
        raise ValueError(f"unknown --inject fields: {sorted(unknown)}")
    if "start" not in fields or "gap" not in fields:
        raise ValueError("--inject needs start= and gap=")
    max_span = fields.get("max_span")
    return InjectionSpec(
        int(fields["start"]),
        int(fields["gap"]),
        (fields.get("x", "5"), fields.get("y", "6")),
        fields.get("exe", "sh"),
        int(max_span) if max_span is not None else None,
        seed=seed * 1000 + index,
    )


@contextmanager
def _open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            yield f


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(int(x)) if x.is_integer() else f"{x:.6f}".rstrip("0")
    return str(x)


def matches_csv(matches: Iterable[EpisodeMatch]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MATCH_HEADER)
    for m in matches:
        w.writerow([
            m.episode, m.pattern_start, m.pattern_end, m.detection_time, m.delay,
            "true" if m.crosses_gap else "false", "" if m.level is None else m.level,
        ])
    return buf.getvalue()


def ledger_csv(ledger: WorkLedger) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "windows", "work"])
    for lw in ledger.per_level:
        w.writerow([lw.level, lw.windows, _fmt(float(lw.work))])
    return buf.getvalue()


def summary_csv(rho_measured: float, rho_bound: float) -> str:
    return f"rho_measured,rho_bound\n{_fmt(float(rho_measured))},{_fmt(float(rho_bound))}\n"


def cmd_generate(args: argparse.Namespace) -> int:
    alphabet = tuple(a for a in args.alphabet.split(",") if a) if args.alphabet else DEFAULT_ALPHABET
    records = gen_background(args.n, args.rate, args.seed, alphabet)
    for i, text in enumerate(args.inject or ()):
        records = inject_episode(records, parse_injection(text, i, args.seed))
    if args.output in (None, "-"):
        for r in records:
            sys.stdout.write(f"@{r.time} {r.event}\n")
    else:
        write_trace(args.output, records)
    return 0


def _config(args: argparse.Namespace) -> StreamConfig:
    if args.depth is not None:
        return StreamConfig.from_depth(args.t0, args.l_max, args.depth)
    return StreamConfig.from_t_max(args.t0, args.l_max, args.t_max)


def cmd_run(args: argparse.Namespace) -> int:
    records = read_trace(args.input)
    config = _config(args)
    cost = get_cost_model(args.cost)
    result = run_pww(records, config, get_detector(args.detector), cost, args.mode)
    with _open_out(args.output) as f:
        f.write(matches_csv(result.matches))
    if args.ledger:
        with _open_out(args.ledger) as f:
            f.write(ledger_csv(result.ledger))
    summary = summary_csv(result.ledger.rho_measured, result.ledger.rho_bound)
    if args.summary:
        with _open_out(args.summary) as f:
            f.write(summary)
    else:
        sys.stderr.write(summary)
    return 0


def cmd_baseline(args: argparse.Namespace) -> int:
    records = read_trace(args.input)
    result = bench.run_baseline_fixed(
        records, args.window, args.step, get_detector(args.detector), get_cost_model(args.cost)
    )
    with _open_out(args.output) as f:
        f.write(matches_csv(result.matches))
    summary = f"windows,work,duration,rho\n{result.windows},{_fmt(float(result.work))},{result.duration},{_fmt(result.rho)}\n"
    if args.summary:
        with _open_out(args.summary) as f:
            f.write(summary)
    else:
        sys.stderr.write(summary)
    return 0


def cmd_bench_delay(args: argparse.Namespace) -> int:
    t_max = args.t_max if args.t_max is not None else max(max(args.durations), args.t0)
    config = StreamConfig.from_t_max(args.t0, args.l_max, t_max)
    points = bench.run_delay_experiment(args.durations, args.trials, config, args.seed, args.n, args.rate)
    with _open_out(args.output) as f:
        f.write(bench.delay_csv(points))
    return 0


def cmd_bench_work(args: argparse.Namespace) -> int:
    points = bench.run_work_experiment(
        args.t0, args.l_max, args.t_max, args.seed, args.n, args.rate,
        get_cost_model(args.cost), args.window, args.step,
    )
    with _open_out(args.output) as f:
        f.write(bench.work_csv(points))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pww",
        description="Progressive window widening over syscall traces.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def seed_arg(p):
        p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $PWW_SEED or 0)")

    def engine_args(p):
        p.add_argument("--t0", type=positive_int, default=1, help="initial batch duration (time units)")
        p.add_argument("--l-max", type=positive_int, default=100, help="max pattern length in records")
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--t-max", type=positive_int, help="upper bound on pattern duration; sets the level count")
        g.add_argument("--depth", type=positive_int, help="number of levels, level 0 included")

    def detector_args(p):
        p.add_argument("--detector", default=REMOTE_SHELL, choices=[REMOTE_SHELL], help="pattern recognizer")
        p.add_argument("--cost", default="linear", choices=sorted(COST_MODELS), help="work charged per window")

    p = sub.add_parser("generate", help="write a synthetic trace")
    p.add_argument("--n", type=non_negative_int, default=10_000, help="background record count")
    p.add_argument("--rate", type=positive_float, default=1.0, help="background records per time unit")
    p.add_argument("--alphabet", help="comma-separated background syscall names")
    p.add_argument(
        "--inject", action="append", metavar="SPEC",
        help="inject an episode: start=T,gap=G[,x=FD,y=FD,exe=NAME,max_span=N]; repeatable",
    )
    seed_arg(p)
    p.add_argument("-o", "--output", default="-", help="trace file (default: stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="run PWW over a trace")
    p.add_argument("-i", "--input", required=True, help="trace file")
    engine_args(p)
    detector_args(p)
    p.add_argument("--mode", choices=[SEQUENTIAL, CONCURRENT], default=SEQUENTIAL, help="engine scheduling")
    p.add_argument("-o", "--output", default="-", help="matches CSV (default: stdout)")
    p.add_argument("--ledger", help="per-level work CSV")
    p.add_argument("--summary", help="rho summary CSV (default: stderr)")
    seed_arg(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("baseline", help="run a single fixed-duration sliding window")
    p.add_argument("-i", "--input", required=True, help="trace file")
    p.add_argument("--window", type=positive_int, default=bench.FIXED_WINDOW, help="window duration")
    p.add_argument("--step", type=positive_int, default=bench.FIXED_STEP, help="window step")
    detector_args(p)
    p.add_argument("-o", "--output", default="-", help="matches CSV (default: stdout)")
    p.add_argument("--summary", help="work summary CSV (default: stderr)")
    seed_arg(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("bench-delay", help="detection delay vs episode duration")
    p.add_argument("--durations", type=int_list, default=int_list("4..512"), help="list or doubling range A..B")
    p.add_argument("--trials", type=positive_int, default=50, help="episodes per duration")
    p.add_argument("--t0", type=positive_int, default=1, help="initial batch duration")
    p.add_argument("--l-max", type=positive_int, default=100, help="max pattern length in records")
    p.add_argument("--t-max", type=positive_int, help="pattern duration bound (default: largest duration)")
    p.add_argument("--n", type=non_negative_int, default=10_000, help="background record count")
    p.add_argument("--rate", type=positive_float, default=1.0, help="background records per time unit")
    seed_arg(p)
    p.add_argument("-o", "--output", default="-", help="CSV output (default: stdout)")
    p.set_defaults(func=cmd_bench_delay)

    p = sub.add_parser("bench-work", help="work per time unit vs initial batch duration")
    p.add_argument("--t0", type=int_list, default=int_list("1..32"), help="list or doubling range A..B")
    p.add_argument("--l-max", type=positive_int, default=100, help="max pattern length in records")
    p.add_argument("--t-max", type=positive_int, default=512, help="pattern duration bound")
    p.add_argument("--n", type=non_negative_int, default=10_000, help="background record count")
    p.add_argument("--rate", type=positive_float, default=1.0, help="background records per time unit")
    p.add_argument("--cost", default="linear", choices=sorted(COST_MODELS), help="work charged per window")
    p.add_argument("--window", type=positive_int, default=bench.FIXED_WINDOW, help="baseline window duration")
    p.add_argument("--step", type=positive_int, default=bench.FIXED_STEP, help="baseline window step")
    seed_arg(p)
    p.add_argument("-o", "--output", default="-", help="CSV output (default: stdout)")
    p.set_defaults(func=cmd_bench_work)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (TraceParseError, InjectionError, ConfigError, ValueError, OSError, RuntimeError) as e:
        print(f"pww: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
