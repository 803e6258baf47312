"""Reactive lower-bound workload: a unit job arrives exactly when the
online algorithm has nothing running.

Switching costs grow as N^(2j) and operating costs shrink as N^(-2j), so
every type is expensive to start and cheap to keep, and an algorithm that
powers down gets punished by the next job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Protocol, Sequence, TextIO

from .model import Instance, Row, ScheduleX
from .offline import integer_costs, optimal_cost_of_jobs
from .online import OnlinePlayer

DEFAULT_SLOT_CAP = 10**6


class ScaleTooSmall(ValueError):
    def __init__(self, d: int, N: int) -> None:
        super().__init__(f"N={N} is below 6*d={6 * d}")


class InvalidMove(ValueError):
    """The dueling algorithm returned a configuration it may not use."""


class Player(Protocol):
    def step(self, lam: int) -> Sequence[int]: ...


@dataclass(frozen=True)
class AdversaryConfig:
    d: int
    N: int
    stop_multiplier: Optional[Fraction] = None
    slot_cap: int = DEFAULT_SLOT_CAP

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("d must be positive")
        if self.N < 6 * self.d:
            raise ScaleTooSmall(self.d, self.N)

    @property
    def multiplier(self) -> Fraction:
        return Fraction(self.N) if self.stop_multiplier is None else Fraction(self.stop_multiplier)

    def lower_bound(self) -> Fraction:
        return Fraction(2 * self.d) - Fraction(9 * self.d**2, self.N)

    def upper_bound(self) -> Fraction:
        return Fraction(2 * self.d)


def adversary_costs(d: int, N: int) -> Instance:
    """One server per type with switching cost N^(2j) and operating cost N^(-2j)."""
    return Instance(
        m=(1,) * d,
        beta=tuple(Fraction(N ** (2 * j)) for j in range(1, d + 1)),
        l=tuple(Fraction(1, N ** (2 * j)) for j in range(1, d + 1)),
    )


def adversary_instance(cfg: AdversaryConfig) -> Instance:
    return adversary_costs(cfg.d, cfg.N)


def next_lambda(prev_x: Sequence[int]) -> int:
    return 1 if sum(prev_x) == 0 else 0


@dataclass(frozen=True)
class DuelResult:
    T_used: int
    alg_cost: Fraction
    opt_cost: Fraction
    jobs: tuple[int, ...]
    steps: int
    config: AdversaryConfig = field(repr=False)

    @property
    def ratio(self) -> Fraction:
        return self.alg_cost / self.opt_cost

    def lambda_at(self, t: int) -> int:
        import bisect

        i = bisect.bisect_left(self.jobs, t)
        return int(i < len(self.jobs) and self.jobs[i] == t)

    def lambda_trace(self) -> tuple[int, ...]:
        """Dense job sequence; only sensible for short duels."""
        if self.T_used > 10**7:
            raise ValueError(f"{self.T_used} slots are too many to materialize")
        seq = [0] * self.T_used
        for t in self.jobs:
            seq[t - 1] = 1
        return tuple(seq)

    def instance(self) -> Instance:
        """The realized workload as an explicit instance (short duels only)."""
        return adversary_instance(self.config).with_load(self.lambda_trace())


class SlotCapExceeded(RuntimeError):
    def __init__(self, partial: DuelResult) -> None:
        self.partial = partial
        super().__init__(f"stop rule not reached within {partial.steps} stepped slots")


def make_player(cfg: AdversaryConfig, alg: str = "det", seed: int = 0) -> OnlinePlayer:
    from .online import gamma_for_seed

    inst = adversary_instance(cfg)
    if alg == "det":
        return OnlinePlayer(inst)
    if alg == "rand":
        return OnlinePlayer(inst, gamma=gamma_for_seed(seed))
    raise ValueError(f"unknown algorithm {alg!r}")


def run_duel(
    cfg: AdversaryConfig,
    algorithm: Player | str = "det",
    seed: int = 0,
    trace: Optional[TextIO] = None,
) -> DuelResult:
    """Play the adversary against ``algorithm`` until the stop rule fires.

    Players that expose ``quiet_slots()``/``skip(n)`` are fast-forwarded over
    stretches where nothing changes; the cap counts stepped slots only.
    The trace gets one row per stepped slot plus one row closing each
    skipped stretch.
    """
    player = make_player(cfg, algorithm, seed) if isinstance(algorithm, str) else algorithm
    inst = adversary_instance(cfg)
    d = cfg.d
    scale, B, L = integer_costs(inst.beta, inst.l)
    stop = cfg.multiplier * inst.beta[-1] * scale
    can_skip = hasattr(player, "quiet_slots") and hasattr(player, "skip")

    t = 0
    steps = 0
    cost = 0
    prev: Row = (0,) * d
    jobs: list[int] = []

    def emit(slot: int, lam: int, row: Row) -> None:
        if trace is not None:
            cum = Fraction(cost, scale)
            trace.write(f"{slot} {lam} {' '.join(map(str, row))} {cum}\n")

    def result() -> DuelResult:
        opt = optimal_cost_of_jobs(inst.m, inst.beta, inst.l, ((s, 1) for s in jobs))
        return DuelResult(t, Fraction(cost, scale), opt, tuple(jobs), steps, cfg)

    if trace is not None:
        trace.write("t lambda " + " ".join(f"x_{j}" for j in range(1, d + 1)) + " alg_cost_cum\n")
    while cost < stop:
        if steps >= cfg.slot_cap:
            raise SlotCapExceeded(result())
        lam = next_lambda(prev)
        t += 1
        steps += 1
        row = tuple(int(v) for v in player.step(lam))
        if len(row) != d or any(v < 0 or v > 1 for v in row) or sum(row) < lam:
            raise InvalidMove(f"slot {t}: configuration {row} cannot serve {lam} job(s)")
        if lam:
            jobs.append(t)
        for j in range(d):
            cost += L[j] * row[j]
            if row[j] > prev[j]:
                cost += B[j]
        prev = row
        emit(t, lam, row)
        if cost >= stop or not can_skip or sum(row) == 0:
            continue
        quiet = player.quiet_slots()
        if quiet <= 0:
            continue
        per_slot = sum(L[j] * row[j] for j in range(d))
        n = quiet if per_slot == 0 else min(quiet, -(-(stop - cost) // per_slot))
        n = int(math.ceil(n))
        player.skip(n)
        t += n
        cost += per_slot * n
        emit(t, 0, row)
    return result()


def single_server_reduction(x: ScheduleX) -> ScheduleX:
    """Remove overlaps by postponing power-ups that start a second server.

    At the first slot with two or more active servers, one server that was
    powered up there (the lowest such type) starts one slot later instead.
    Repeats until no slot has more than one active server.
    """
    rows = [list(r) for r in x.rows]
    d = len(rows[0]) if rows else 0
    t = 0
    while t < len(rows):
        if sum(rows[t]) <= 1:
            t += 1
            continue
        before = rows[t - 1] if t > 0 else [0] * d
        ups = [j for j in range(d) if rows[t][j] > before[j]]
        rows[t][ups[0]] -= 1
    return ScheduleX(tuple(tuple(r) for r in rows))
