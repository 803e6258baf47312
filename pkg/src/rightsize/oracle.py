"""Independent ground truth: exhaustive optimum and structural checkers.

Nothing here reuses the dynamic program. The exhaustive search walks raw
configuration sequences, and the checkers read lane schedules directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Optional, Sequence

from .model import Instance, ScheduleX, ScheduleY

DEFAULT_SEARCH_CAP = 10**6

LEMMA_IDS = ("L2.1", "L2.2", "L2.3", "L2.5", "L2.6", "L2.7", "L2.8", "SORTED", "IDENTITY")


class SearchSpaceTooLarge(ValueError):
    def __init__(self, size: int, cap: int) -> None:
        self.size = size
        self.cap = cap
        super().__init__(f"{size} feasible sequences exceed the search cap of {cap}")


class ZeroOptimum(ValueError):
    def __init__(self) -> None:
        super().__init__("optimal cost is zero, the ratio is undefined")


@dataclass(frozen=True)
class Violation:
    t: int
    k: int
    detail: str

    def __str__(self) -> str:
        return f"t={self.t} k={self.k}: {self.detail}"


@dataclass
class LemmaReport:
    lemma_id: str
    violations: list[Violation] = field(default_factory=list)
    skipped: str = ""

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, t: int, k: int, detail: str) -> None:
        self.violations.append(Violation(t, k, detail))

    def summary(self) -> str:
        if self.skipped:
            return f"{self.lemma_id}: SKIP ({self.skipped})"
        if self.passed:
            return f"{self.lemma_id}: PASS"
        lines = [f"{self.lemma_id}: FAIL ({len(self.violations)} violations)"]
        lines += [f"  {v}" for v in self.violations[:20]]
        return "\n".join(lines)


def brute_force_opt(inst: Instance, cap: int = DEFAULT_SEARCH_CAP) -> tuple[ScheduleX, Fraction]:
    """Exhaustive minimum of the cost over all feasible count sequences.

    Among equal-cost sequences the one with the fewest active server-slots
    wins, then the lexicographically smallest. Branches whose partial
    (cost, activity) already reaches the incumbent are cut, since every
    further slot only adds non-negative amounts to both.
    """
    d = inst.d
    den = 1
    for v in (*inst.beta, *inst.l):
        den = den * v.denominator // math.gcd(den, v.denominator)
    beta = [int(v * den) for v in inst.beta]
    run = [int(v * den) for v in inst.l]
    configs = list(product(*(range(c + 1) for c in inst.m)))
    choices = [[c for c in configs if sum(c) >= demand] for demand in inst.lam]
    size = math.prod(len(c) for c in choices)
    if size > cap:
        raise SearchSpaceTooLarge(size, cap)

    T = inst.T
    best: list = [None, None, None]
    path: list[tuple[int, ...]] = []

    def step_cost(prev: tuple[int, ...], cur: tuple[int, ...]) -> int:
        total = 0
        for j in range(d):
            total += run[j] * cur[j]
            if cur[j] > prev[j]:
                total += beta[j] * (cur[j] - prev[j])
        return total

    def search(t: int, prev: tuple[int, ...], cost: int, act: int) -> None:
        if best[0] is not None and (cost, act) >= (best[0], best[1]):
            return
        if t == T:
            best[0], best[1], best[2] = cost, act, list(path)
            return
        for cur in choices[t]:
            path.append(cur)
            search(t + 1, cur, cost + step_cost(prev, cur), act + sum(cur))
            path.pop()

    search(0, (0,) * d, 0, 0)
    rows = tuple(best[2]) if best[2] is not None else ()
    return ScheduleX(rows), Fraction(best[0], den)


def check_no_lane_switching(y: ScheduleY) -> LemmaReport:
    """A type that leaves lane k must not appear in a lane that lacked it."""
    report = LemmaReport("L2.1")
    for t in range(1, y.T + 2):
        for k in range(1, y.lanes + 1):
            j = y.at(t - 1, k)
            if j == 0 or y.at(t, k) == j:
                continue
            for k2 in range(1, y.lanes + 1):
                if k2 != k and y.at(t - 1, k2) != j and y.at(t, k2) == j:
                    report.add(t, k, f"type {j} leaves lane {k} and appears in lane {k2}")
    return report


def check_power_events(y: ScheduleY, inst: Instance) -> LemmaReport:
    """Lanes switch on or off only where the job indicator does the same."""
    report = LemmaReport("L2.2")

    def job(t: int, k: int) -> int:
        if 1 <= t <= inst.T:
            return int(k <= inst.lam[t - 1])
        return 0

    for t in range(1, y.T + 2):
        for k in range(1, y.lanes + 1):
            before, now = y.at(t - 1, k), y.at(t, k)
            if before > 0 and now == 0 and not (job(t - 1, k) == 1 and job(t, k) == 0):
                report.add(t, k, "powered down without the lane's demand ending")
            if before == 0 and now > 0 and not (job(t - 1, k) == 0 and job(t, k) == 1):
                report.add(t, k, "powered up without the lane's demand starting")
    return report


def check_no_immediate_change(y: ScheduleY) -> LemmaReport:
    report = LemmaReport("L2.3")
    for t in range(2, y.T + 1):
        for k in range(1, y.lanes + 1):
            a, b = y.at(t - 1, k), y.at(t, k)
            if a > 0 and b > 0 and a != b:
                report.add(t, k, f"type {a} replaced by {b} without an idle slot")
    return report


def check_sorted(rows: Sequence[Sequence[int]], lemma_id: str = "SORTED") -> LemmaReport:
    report = LemmaReport(lemma_id)
    for t, row in enumerate(rows, start=1):
        for k in range(len(row) - 1):
            if row[k] < row[k + 1]:
                report.add(t, k + 1, f"lane {k + 1} holds {row[k]} below lane {k + 2} with {row[k + 1]}")
    return report


def check_feasible(x: ScheduleX, inst: Instance) -> LemmaReport:
    report = LemmaReport("L2.7")
    if x.T != inst.T:
        report.add(0, 0, f"schedule covers {x.T} slots, instance has {inst.T}")
        return report
    for t, (row, demand) in enumerate(zip(x.rows, inst.lam), start=1):
        if sum(row) < demand:
            report.add(t, 0, f"{sum(row)} active servers for {demand} jobs")
        for j, (v, cap) in enumerate(zip(row, inst.m), start=1):
            if v < 0 or v > cap:
                report.add(t, 0, f"type {j} count {v} outside [0, {cap}]")
    return report


def check_hold_monotone(holds: Sequence[Optional[int]]) -> LemmaReport:
    """Hold durations never shrink with the type index (None is unbounded)."""
    report = LemmaReport("L2.5")
    for j in range(len(holds) - 1):
        a, b = holds[j], holds[j + 1]
        if b is not None and (a is None or a > b):
            report.add(0, 0, f"hold of type {j + 1} is {a}, type {j + 2} only {b}")
    return report


def check_lane_identity(x: ScheduleX, inst: Instance) -> LemmaReport:
    """Per-lane cost sums to the schedule cost when no lane switches occur."""
    from .model import lane_cost_sum, total_cost, x_to_y

    report = LemmaReport("IDENTITY")
    y = x_to_y(x, inst)
    lanes = lane_cost_sum(y, inst)
    total = total_cost(x, inst).total
    switch_free = check_no_lane_switching(y).passed
    if switch_free and lanes != total:
        report.add(0, 0, f"lane sum {lanes} differs from total {total}")
    if lanes < total:
        report.add(0, 0, f"lane sum {lanes} below total {total}")
    return report


def empirical_ratio(
    alg_cost: Fraction,
    inst: Instance,
    opt_cost: Optional[Fraction] = None,
    solver: Optional[Callable[[Instance], Fraction]] = None,
) -> Fraction:
    """Exact ratio of an online cost to the offline optimum."""
    if opt_cost is None:
        if solver is None:
            from .offline import optimal_cost as solver
        opt_cost = solver(inst)
    if opt_cost == 0:
        raise ZeroOptimum()
    return Fraction(alg_cost) / opt_cost
