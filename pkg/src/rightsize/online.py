"""The deterministic and randomized online right-sizing algorithms.

Both follow the top row of the monotone optimal prefix family lane by
lane: a lane powers up whenever the offline optimum asks for a larger
type, and powers down only after its hold timer runs out. The randomized
variant shortens every hold by one factor drawn once per run.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .model import (
    CostBreakdown,
    Instance,
    Row,
    ScheduleX,
    ScheduleY,
    counts_of,
    total_cost,
    y_to_x,
)
from .offline import DEFAULT_STATE_CAP, PrefixTracker
from .oracle import LemmaReport

GUARD = Fraction(1, 2**40)


class UnsortedInput(ValueError):
    pass


def tbar(inst: Instance, j: int, gamma: Optional[float | Fraction] = None) -> Optional[int]:
    """Idle slots a type-j server is held for; None means it never idles out.

    With a float ``gamma`` the product is evaluated exactly on the float's
    binary value, and anything within 2**-40 of an integer snaps to it.
    """
    beta, l = inst.beta[j - 1], inst.l[j - 1]
    if l == 0:
        return None
    if gamma is None:
        return math.floor(beta / l)
    value = Fraction(gamma) * beta / l
    if isinstance(gamma, float):
        nearest = round(value)
        if abs(value - nearest) <= GUARD:
            return int(nearest)
    return math.floor(value)


def hold_table(inst: Instance, gamma: Optional[float | Fraction], horizon: int) -> Row:
    """Holds indexed by type with index 0 for an empty lane; unbounded -> horizon."""
    holds = [0]
    for j in range(1, inst.d + 1):
        h = tbar(inst, j, gamma)
        holds.append(horizon if h is None else min(h, horizon))
    return tuple(holds)


def sample_gamma(u: float) -> float:
    """Inverse CDF of the density e^x/(e-1) on [0, 1]."""
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"u={u} outside [0, 1]")
    gamma = math.log1p(u * (math.e - 1.0))
    gamma = min(gamma, 1.0)
    if gamma <= 0.0:
        gamma = math.ulp(0.0)
    return gamma


def gamma_for_seed(seed: int) -> float:
    return sample_gamma(random.Random(seed).random())


@dataclass(frozen=True)
class Block:
    """Cost attribution unit created in ``lane`` at slot ``creation``.

    The type ``stype`` is held over ``[start, end)``.
    """

    creation: int
    lane: int
    stype: int
    start: int
    end: int
    kind: str

    @property
    def duration(self) -> int:
        return self.end - self.start

    def line(self) -> str:
        return f"{self.creation} {self.lane} {self.stype} {self.start} {self.end} {self.kind}"


NEW = "New"
EXTENDED = "Extended"


def attributed_cost(block: Block, inst: Instance) -> Fraction:
    """Cost charged to a block: power-up plus hold for New, running time for Extended."""
    beta, l = inst.beta[block.stype - 1], inst.l[block.stype - 1]
    if block.kind == NEW:
        return beta + l * block.duration
    return l * block.duration


@dataclass
class OnlineState:
    """Mutable state of one run: current slot, lane types and timers."""

    holds: Row
    prev_y: list[int]
    e: list[int]
    t: int = 0
    blocks: list[Block] = field(default_factory=list)

    @classmethod
    def fresh(cls, holds: Sequence[int], lanes: int) -> "OnlineState":
        holds = tuple(holds)
        if holds[0] != 0:
            raise ValueError("an empty lane must have hold 0")
        return cls(holds=holds, prev_y=[0] * lanes, e=[0] * lanes)


def step_det(state: OnlineState, yhat_now: Sequence[int]) -> tuple[OnlineState, Row]:
    """Advance one slot given the top row of the current family member."""
    if len(yhat_now) != len(state.prev_y):
        raise ValueError("lane count mismatch")
    if any(yhat_now[k] < yhat_now[k + 1] for k in range(len(yhat_now) - 1)):
        raise UnsortedInput(f"top row {tuple(yhat_now)} is not sorted descending")
    t = state.t + 1
    holds = state.holds
    for k, target in enumerate(yhat_now):
        prev, due = state.prev_y[k], state.e[k]
        if prev < target or t >= due:
            new_due = t + holds[target]
            if target > 0:
                if target != prev:
                    state.blocks.append(Block(t, k + 1, target, t, new_due, NEW))
                else:
                    state.blocks.append(Block(t, k + 1, target, due, new_due, EXTENDED))
            state.prev_y[k] = target
            state.e[k] = new_due
        else:
            new_due = max(due, t + holds[target])
            if new_due > due:
                state.blocks.append(Block(t, k + 1, prev, due, new_due, EXTENDED))
            state.e[k] = new_due
    state.t = t
    return state, tuple(state.prev_y)


@dataclass(frozen=True)
class OnlineRun:
    x: ScheduleX
    blocks: tuple[Block, ...]
    cost: CostBreakdown
    y: ScheduleY
    tops: tuple[Row, ...]
    holds: Row
    gamma: Optional[float] = None


def run_with_holds(
    inst: Instance,
    holds: Row,
    tops: Optional[Sequence[Row]] = None,
    state_cap: int = DEFAULT_STATE_CAP,
    gamma: Optional[float] = None,
) -> OnlineRun:
    """Run the stepper against precomputed or freshly tracked top rows."""
    if tops is None:
        tracker = PrefixTracker.for_instance(inst, state_cap)
        tops = [tracker.push(v) for v in inst.lam]
    state = OnlineState.fresh(holds, inst.capacity)
    lanes = []
    for row in tops:
        _, y_row = step_det(state, row)
        lanes.append(y_row)
    y = ScheduleY(tuple(lanes))
    x = y_to_x(y, inst)
    return OnlineRun(x, tuple(state.blocks), total_cost(x, inst), y, tuple(tops), holds, gamma)


def run_det(inst: Instance, state_cap: int = DEFAULT_STATE_CAP) -> OnlineRun:
    return run_with_holds(inst, hold_table(inst, None, inst.T + 1), state_cap=state_cap)


def run_rand(
    inst: Instance,
    seed: int,
    gamma: Optional[float] = None,
    tops: Optional[Sequence[Row]] = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> OnlineRun:
    """Randomized variant; ``gamma`` overrides the seeded draw."""
    if gamma is None:
        gamma = gamma_for_seed(seed)
    holds = hold_table(inst, gamma, inst.T + 1)
    return run_with_holds(inst, holds, tops=tops, state_cap=state_cap, gamma=gamma)


class OnlinePlayer:
    """Drives the algorithm one slot at a time for reactive workloads.

    ``step`` consumes the job volume of the next slot and returns the
    per-type active counts. Between demand slots the configuration only
    changes when a timer runs out, so ``quiet_slots``/``skip`` let a caller
    jump over idle stretches in constant time.
    """

    def __init__(
        self,
        inst: Instance,
        gamma: Optional[float] = None,
        horizon: int = 2**62,
        state_cap: int = DEFAULT_STATE_CAP,
    ) -> None:
        self.d = inst.d
        self.gamma = gamma
        self.tracker = PrefixTracker.for_instance(inst, state_cap)
        self.state = OnlineState.fresh(hold_table(inst, gamma, horizon), inst.capacity)

    def step(self, lam: int) -> Row:
        top = self.tracker.push(lam)
        _, lanes = step_det(self.state, top)
        return counts_of(lanes, self.d)

    def quiet_slots(self) -> int:
        """Upcoming slots that keep the current configuration if no jobs arrive."""
        active = [e for y, e in zip(self.state.prev_y, self.state.e) if y > 0]
        if not active:
            return 0
        return max(min(active) - (self.state.t + 1), 0)

    def skip(self, n: int) -> None:
        if n > self.quiet_slots():
            raise ValueError("cannot skip past a timer expiry")
        self.tracker.advance(n)
        self.state.t += n


def verify_blocks(
    blocks: Sequence[Block],
    inst: Instance,
    gamma: Optional[float] = None,
    lanes: Optional[ScheduleY] = None,
) -> LemmaReport:
    """Check block cost bounds and, given the lanes, that blocks tile them.

    A block's realized span starts at its creation (New) or where the
    previous block of the lane stopped (Extended), and stops at its end,
    at the next New block of the lane, or at the horizon.
    """
    report = LemmaReport("L2.8")
    T = inst.T
    holds = hold_table(inst, gamma, T + 1)
    by_lane: dict[int, list[Block]] = {}
    for b in blocks:
        by_lane.setdefault(b.lane, []).append(b)
        if not 1 <= b.stype <= inst.d:
            report.add(b.creation, b.lane, f"block type {b.stype} out of range")
            continue
        beta = inst.beta[b.stype - 1]
        if b.kind == NEW:
            attributed = attributed_cost(b, inst)
            if b.start != b.creation or b.end != b.creation + holds[b.stype]:
                report.add(b.creation, b.lane, "new block span does not match the hold time")
            if attributed > 2 * beta:
                report.add(b.creation, b.lane, f"new block cost {attributed} exceeds 2*beta={2 * beta}")
        elif b.kind != EXTENDED:
            report.add(b.creation, b.lane, f"unknown block kind {b.kind}")

    for k, seq in by_lane.items():
        last_type = 0
        for b in seq:
            if b.kind == EXTENDED and b.stype != last_type:
                report.add(b.creation, k, f"extension of type {b.stype} follows type {last_type}")
            last_type = b.stype

    if lanes is None:
        return report
    width = lanes.lanes
    for k in range(1, width + 1):
        seq = by_lane.get(k, [])
        covered: dict[int, int] = {}
        prev_end = 0
        for i, b in enumerate(seq):
            lo = b.creation if b.kind == NEW else max(b.start, prev_end)
            nxt = next((c.creation for c in seq[i + 1:] if c.kind == NEW), T + 1)
            hi = min(max(b.end, b.creation + 1), nxt, T + 1)
            realized = max(hi - lo, 0)
            if realized > max(b.duration, 1):
                report.add(b.creation, k, f"realized span {realized} longer than attributed {b.duration}")
            for s in range(lo, hi):
                if s in covered:
                    report.add(s, k, "slot covered by two blocks")
                covered[s] = b.stype
            prev_end = max(prev_end, hi)
        for t in range(1, T + 1):
            v = lanes.at(t, k)
            got = covered.get(t, 0)
            if v != got:
                report.add(t, k, f"lane holds type {v} but blocks cover it with {got}")
    return report
