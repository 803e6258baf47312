"""Seeded instance generators and batch competitive-ratio experiments."""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .adversary import AdversaryConfig, adversary_instance, next_lambda
from .model import Instance
from .offline import DEFAULT_STATE_CAP, optimal_cost, prefix_tops
from .online import OnlinePlayer, run_det, run_rand

KINDS = ("random", "bursty", "sinusoidal", "adversarial")


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one instance. Costs come from ``cost_seed``, load from ``load_seed``.

    Operating and switching costs are multiples of 1/2 drawn from
    ``l_range`` and ``beta_range``.
    """

    kind: str = "random"
    d: int = 2
    T: int = 20
    m_range: tuple[int, int] = (1, 2)
    cost_seed: int = 0
    load_seed: int = 0
    peak: Optional[int] = None
    period: int = 8
    burst_prob: float = 0.3
    l_range: tuple[int, int] = (0, 10)
    beta_range: tuple[int, int] = (1, 20)
    N: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.d < 1 or self.T < 0:
            raise ValueError("need d >= 1 and T >= 0")
        lo, hi = self.m_range
        if not 1 <= lo <= hi:
            raise ValueError("m_range must satisfy 1 <= low <= high")
        if self.kind != "adversarial":
            if 2 * (self.l_range[1] - self.l_range[0]) + 1 < self.d:
                raise ValueError("l_range too narrow for d distinct values")
            if 2 * self.beta_range[1] - max(1, 2 * self.beta_range[0]) + 1 < self.d:
                raise ValueError("beta_range too narrow for d distinct values")
        if self.period < 1:
            raise ValueError("period must be positive")


def _costs(spec: GeneratorSpec, rng: random.Random) -> tuple[tuple[int, ...], list[Fraction], list[Fraction]]:
    m = tuple(rng.randint(*spec.m_range) for _ in range(spec.d))
    l_lo, l_hi = spec.l_range
    b_lo, b_hi = spec.beta_range
    halves_l = sorted(rng.sample(range(2 * l_lo, 2 * l_hi + 1), spec.d), reverse=True)
    halves_b = sorted(rng.sample(range(max(1, 2 * b_lo), 2 * b_hi + 1), spec.d))
    return m, [Fraction(v, 2) for v in halves_b], [Fraction(v, 2) for v in halves_l]


def sinusoid(t: int, peak: int, period: int, cap: int) -> int:
    value = math.floor(peak / 2 * (1 + math.sin(2 * math.pi * t / period)) + 0.5)
    return min(max(value, 0), cap)


def adversarial_load(inst: Instance, T: int) -> tuple[int, ...]:
    """Jobs issued against the deterministic algorithm for T slots."""
    player = OnlinePlayer(inst)
    prev = (0,) * inst.d
    lam = []
    for _ in range(T):
        v = next_lambda(prev)
        lam.append(v)
        prev = player.step(v)
    return tuple(lam)


def generate(spec: GeneratorSpec) -> Instance:
    if spec.kind == "adversarial":
        inst = adversary_instance(AdversaryConfig(spec.d, spec.N or 6 * spec.d))
        return inst.with_load(adversarial_load(inst, spec.T))
    m, beta, l = _costs(spec, random.Random(spec.cost_seed))
    cap = sum(m)
    rng = random.Random(spec.load_seed)
    if spec.kind == "random":
        lam = [rng.randint(0, cap) for _ in range(spec.T)]
    elif spec.kind == "bursty":
        lam = []
        on = False
        for _ in range(spec.T):
            if rng.random() < spec.burst_prob:
                on = not on
            lam.append(rng.randint(1, cap) if on else 0)
    else:
        peak = cap if spec.peak is None else spec.peak
        lam = [sinusoid(t, peak, spec.period, cap) for t in range(1, spec.T + 1)]
    return Instance(m, tuple(beta), tuple(l), tuple(lam))


@dataclass(frozen=True)
class RatioRow:
    instance_id: str
    d: int
    T: int
    opt_cost: Optional[Fraction]
    det_cost: Optional[Fraction]
    det_ratio: Optional[Fraction]
    rand_mean_ratio: Optional[Fraction]
    rand_trials: int
    seed: int
    error: str = ""


CSV_COLUMNS = (
    "instance_id",
    "d",
    "T",
    "opt_cost",
    "det_cost",
    "det_ratio",
    "det_ratio_float",
    "rand_mean_ratio",
    "rand_mean_ratio_float",
    "rand_trials",
    "seed",
    "error",
)


def _cell(v: Optional[Fraction]) -> str:
    return "" if v is None else str(v)


def _float_cell(v: Optional[Fraction]) -> str:
    return "" if v is None else f"{float(v):.6f}"


@dataclass
class RatioReport:
    rows: list[RatioRow] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow(
                [
                    r.instance_id,
                    r.d,
                    r.T,
                    _cell(r.opt_cost),
                    _cell(r.det_cost),
                    _cell(r.det_ratio),
                    _float_cell(r.det_ratio),
                    _cell(r.rand_mean_ratio),
                    _float_cell(r.rand_mean_ratio),
                    r.rand_trials,
                    r.seed,
                    r.error,
                ]
            )
        return buf.getvalue()

    def violations(self) -> list[RatioRow]:
        """Rows whose deterministic ratio breaks the 2d bound."""
        return [r for r in self.rows if r.det_ratio is not None and r.det_ratio > 2 * r.d]


def ratio_row(
    inst: Instance,
    instance_id: str,
    det: bool = True,
    rand_trials: int = 0,
    seed: int = 0,
    state_cap: int = DEFAULT_STATE_CAP,
) -> RatioRow:
    """One report row; trial i of the randomized algorithm uses seed + i."""
    try:
        opt = optimal_cost(inst, state_cap)
        det_cost = det_ratio = rand_mean = None
        error = ""
        if det:
            det_cost = run_det(inst, state_cap).cost.total
        if opt == 0:
            error = "ZeroOptimum"
        elif det_cost is not None:
            det_ratio = det_cost / opt
        if rand_trials > 0 and opt != 0:
            rand_mean = rand_mean_ratio(inst, range(seed, seed + rand_trials), opt, state_cap)
        return RatioRow(instance_id, inst.d, inst.T, opt, det_cost, det_ratio, rand_mean, rand_trials, seed, error)
    except Exception as exc:  # a bad row must not abort the batch
        return RatioRow(instance_id, inst.d, inst.T, None, None, None, None, rand_trials, seed, type(exc).__name__)


def batch_ratio(
    specs: Sequence[GeneratorSpec | Instance],
    det: bool = True,
    rand_trials: int = 0,
    seed: int = 0,
    state_cap: int = DEFAULT_STATE_CAP,
) -> RatioReport:
    report = RatioReport()
    for i, spec in enumerate(specs):
        try:
            inst = spec if isinstance(spec, Instance) else generate(spec)
        except Exception as exc:
            d = getattr(spec, "d", 0)
            T = getattr(spec, "T", 0)
            report.rows.append(RatioRow(f"i{i}", d, T, None, None, None, None, rand_trials, seed, type(exc).__name__))
            continue
        report.rows.append(ratio_row(inst, f"i{i}", det, rand_trials, seed, state_cap))
    return report


def rand_mean_ratio(
    inst: Instance,
    seeds: Sequence[int],
    opt: Optional[Fraction] = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> Fraction:
    """Mean randomized ratio over the given seeds, sharing one family."""
    if opt is None:
        opt = optimal_cost(inst, state_cap)
    tops = prefix_tops(inst, state_cap)
    total = Fraction(0)
    for s in seeds:
        total += run_rand(inst, s, tops=tops).cost.total / opt
    return total / len(seeds)



def write_artifacts(out_dir, seed: int = 2024) -> list:
    """Write the standard experiment outputs (ratio CSV, duel and block traces).

    Everything is derived from ``seed``; returns the written paths.
    """
    from pathlib import Path

    from .adversary import run_duel
    from .formats import format_blocks

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    specs = [
        GeneratorSpec(kind=KINDS[i % 3], d=1 + i % 3, T=24, cost_seed=seed + i, load_seed=seed + 7 * i)
        for i in range(12)
    ]
    paths = []
    csv_path = out / "ratios.csv"
    csv_path.write_text(batch_ratio(specs, det=True, rand_trials=10, seed=seed).to_csv())
    paths.append(csv_path)
    for d, N in ((1, 10), (2, 12)):
        trace_path = out / f"duel_d{d}_N{N}.trace"
        with open(trace_path, "w") as fh:
            run_duel(AdversaryConfig(d, N), "det", trace=fh)
        paths.append(trace_path)
    block_path = out / "blocks.txt"
    block_path.write_text(format_blocks(run_det(generate(specs[1])).blocks))
    paths.append(block_path)
    return paths
