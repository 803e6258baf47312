"""Command line entry point.

Exit codes: 0 success, 1 an invariant check failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import oracle
from .adversary import AdversaryConfig, SlotCapExceeded, run_duel
from .formats import (
    format_blocks,
    format_instance,
    format_lanes,
    format_schedule,
    parse_schedule,
    read_instance,
)
from .harness import KINDS, GeneratorSpec, batch_ratio, generate
from .model import x_to_y
from .offline import optimal_prefix_family, optimal_schedule
from .online import hold_table, run_det, run_rand, verify_blocks

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _out(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _spec_from(args: argparse.Namespace, offset: int = 0) -> GeneratorSpec:
    return GeneratorSpec(
        kind=args.kind,
        d=args.d,
        T=args.T,
        m_range=(args.m_min, args.m_max),
        cost_seed=args.cost_seed + offset,
        load_seed=args.load_seed + offset,
        peak=args.peak,
        period=args.period,
        burst_prob=args.burst_prob,
        N=args.N,
    )


def cmd_gen(args: argparse.Namespace) -> int:
    _out(args.output, format_instance(generate(_spec_from(args))))
    return EXIT_OK


def cmd_opt(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    x, _ = optimal_schedule(inst, args.state_cap)
    _out(args.output, format_schedule(x, inst))
    if args.emit_prefix_family:
        out = Path(args.emit_prefix_family)
        out.mkdir(parents=True, exist_ok=True)
        family = optimal_prefix_family(inst, args.state_cap)
        width = len(str(max(inst.T, 1)))
        for t, (y, cost) in enumerate(zip(family.schedules, family.costs), start=1):
            text = f"# prefix {t} cost={cost}\n" + format_lanes(y)
            (out / f"prefix_{t:0{width}d}.lanes").write_text(text)
    return EXIT_OK


def cmd_online(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    if args.alg == "det":
        run = run_det(inst, args.state_cap)
    else:
        if args.seed is None:
            raise UsageError("--alg rand needs --seed")
        run = run_rand(inst, args.seed, state_cap=args.state_cap)
    text = format_schedule(run.x, inst)
    if run.gamma is not None:
        text += f"# gamma={run.gamma!r}\n"
    _out(args.output, text)
    if args.trace_blocks:
        Path(args.trace_blocks).write_text(format_blocks(run.blocks))
    if args.emit_lanes:
        Path(args.emit_lanes).write_text(format_lanes(run.y))
    report = verify_blocks(run.blocks, inst, run.gamma, run.y)
    feasible = oracle.check_feasible(run.x, inst)
    if not (report.passed and feasible.passed):
        sys.stderr.write(report.summary() + "\n" + feasible.summary() + "\n")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_duel(args: argparse.Namespace) -> int:
    stop = Fraction(args.stop_multiplier) if args.stop_multiplier is not None else None
    cfg = AdversaryConfig(args.d, args.N, stop, args.cap)
    trace = open(args.emit_trace, "w") if args.emit_trace else None
    try:
        result = run_duel(cfg, args.alg, seed=args.seed or 0, trace=trace)
    except SlotCapExceeded as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_VIOLATION
    finally:
        if trace is not None:
            trace.close()
    lo, hi = cfg.lower_bound(), cfg.upper_bound()
    print(f"slots={result.T_used} jobs={len(result.jobs)} stepped={result.steps}")
    print(f"alg_cost={result.alg_cost}")
    print(f"opt_cost={result.opt_cost}")
    print(f"ratio={result.ratio} ({float(result.ratio):.6f})")
    print(f"bracket=[{lo}, {hi}]")
    if args.alg == "det" and cfg.stop_multiplier is None and not lo <= result.ratio <= hi:
        return EXIT_VIOLATION
    return EXIT_OK


def verify_reports(inst, x, lemmas: Sequence[str]) -> list[oracle.LemmaReport]:
    y = x_to_y(x, inst)
    reports = []
    need_run = {"L2.6", "L2.8"} & set(lemmas)
    run = run_det(inst) if need_run else None
    for lemma in lemmas:
        if lemma == "L2.1":
            reports.append(oracle.check_no_lane_switching(y))
        elif lemma == "L2.2":
            if inst.has_idle_free_type():
                reports.append(oracle.LemmaReport("L2.2", skipped="some type has zero operating cost"))
            else:
                reports.append(oracle.check_power_events(y, inst))
        elif lemma == "L2.3":
            reports.append(oracle.check_no_immediate_change(y))
        elif lemma == "L2.5":
            reports.append(oracle.check_hold_monotone(hold_table(inst, None, inst.T + 1)[1:]))
        elif lemma == "L2.6":
            reports.append(oracle.check_sorted(run.y.rows, "L2.6"))
        elif lemma == "L2.7":
            reports.append(oracle.check_feasible(x, inst))
        elif lemma == "L2.8":
            reports.append(verify_blocks(run.blocks, inst, None, run.y))
        elif lemma == "SORTED":
            reports.append(oracle.check_sorted(y.rows))
        elif lemma == "IDENTITY":
            reports.append(oracle.check_lane_identity(x, inst))
    return reports


def cmd_verify(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    x = parse_schedule(Path(args.schedule).read_text(), inst.d)
    if x.T != inst.T:
        raise UsageError(f"schedule has {x.T} rows, instance has T={inst.T}")
    if args.lemmas == "all":
        lemmas = list(oracle.LEMMA_IDS)
    else:
        lemmas = [s.strip() for s in args.lemmas.split(",") if s.strip()]
        unknown = [s for s in lemmas if s not in oracle.LEMMA_IDS]
        if unknown:
            raise UsageError(f"unknown lemma ids: {', '.join(unknown)}")
    reports = verify_reports(inst, x, lemmas)
    for r in reports:
        print(r.summary())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


def cmd_batch(args: argparse.Namespace) -> int:
    specs = [_spec_from(args, i) for i in range(args.count)]
    report = batch_ratio(specs, det=True, rand_trials=args.rand_trials, seed=args.seed, state_cap=args.state_cap)
    _out(args.output, report.to_csv())
    return EXIT_VIOLATION if report.violations() else EXIT_OK


def _add_gen_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=KINDS, default="random")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--T", type=int, default=20)
    p.add_argument("--m-min", type=int, default=1)
    p.add_argument("--m-max", type=int, default=2)
    p.add_argument("--cost-seed", type=int, default=0)
    p.add_argument("--load-seed", type=int, default=0)
    p.add_argument("--peak", type=int, default=None)
    p.add_argument("--period", type=int, default=8)
    p.add_argument("--burst-prob", type=float, default=0.3)
    p.add_argument("--N", type=int, default=None, help="scale for the adversarial kind")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rightsize", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    _add_gen_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("opt", help="offline optimal schedule")
    p.add_argument("instance")
    p.add_argument("-o", "--output")
    p.add_argument("--emit-prefix-family", metavar="DIR")
    p.add_argument("--state-cap", type=int, default=10**5)
    p.set_defaults(func=cmd_opt)

    p = sub.add_parser("online", help="run the online algorithm")
    p.add_argument("instance")
    p.add_argument("--alg", choices=("det", "rand"), default="det")
    p.add_argument("--seed", type=int)
    p.add_argument("--trace-blocks", metavar="FILE")
    p.add_argument("--emit-lanes", metavar="FILE")
    p.add_argument("-o", "--output")
    p.add_argument("--state-cap", type=int, default=10**5)
    p.set_defaults(func=cmd_online)

    p = sub.add_parser("duel", help="adversarial lower-bound duel")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--alg", choices=("det", "rand"), default="det")
    p.add_argument("--seed", type=int)
    p.add_argument("--cap", type=int, default=10**6, help="maximum stepped slots")
    p.add_argument("--stop-multiplier", help="stop once cost >= this times beta_d (default N)")
    p.add_argument("--emit-trace", metavar="FILE")
    p.set_defaults(func=cmd_duel)

    p = sub.add_parser("verify", help="check a schedule against the structural lemmas")
    p.add_argument("instance")
    p.add_argument("schedule")
    p.add_argument("--lemmas", default="all", help="'all' or a comma list such as L2.1,L2.3")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("batch", help="competitive ratios over generated instances, as CSV")
    _add_gen_args(p)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--rand-trials", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--state-cap", type=int, default=10**5)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
