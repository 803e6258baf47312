"""Exact offline optima, prefix optima and the min/max schedule merges.

The solver is a forward dynamic program over configurations. Slots without
demand are collapsed: across a run of g idle slots each type either keeps
``min(a_j, b_j)`` servers running (when that is cheaper than cycling them)
or powers everything down, so a whole idle run is one transition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

from .model import (
    CostBreakdown,
    DimensionMismatch,
    Infeasible,
    Instance,
    Row,
    ScheduleX,
    ScheduleY,
    lanes_of,
    total_cost,
    x_to_y,
)

DEFAULT_STATE_CAP = 10**5


class StateSpaceTooLarge(ValueError):
    def __init__(self, states: int, cap: int) -> None:
        self.states = states
        self.cap = cap
        super().__init__(f"{states} configurations exceed the cap of {cap}")


def integer_costs(beta: Sequence[Fraction], l: Sequence[Fraction]) -> tuple[int, list[int], list[int]]:
    """Common denominator and the costs scaled onto it."""
    scale = math.lcm(*(Fraction(v).denominator for v in (*beta, *l)))
    return scale, [int(b * scale) for b in beta], [int(c * scale) for c in l]


class ForwardDP:
    """Incremental optimum over the slots that carry demand.

    Call :meth:`push` with strictly increasing slot indices. Position ``p``
    is the p-th pushed slot; the virtual start (all servers off) sits at
    position -1. For every position and reachable configuration the DP
    keeps the best (cost, activity) of a prefix ending there, a rank that
    orders those prefixes lexicographically, the chosen predecessor and
    the per-type counts held through the idle run in between.
    """

    def __init__(
        self,
        m: Sequence[int],
        beta: Sequence[Fraction],
        l: Sequence[Fraction],
        state_cap: int = DEFAULT_STATE_CAP,
    ) -> None:
        size = math.prod(v + 1 for v in m)
        if size > state_cap:
            raise StateSpaceTooLarge(size, state_cap)
        self.m = tuple(m)
        self.d = len(m)
        self.scale, self.B, self.L = integer_costs(beta, l)
        self.states: list[Row] = list(product(*(range(v + 1) for v in m)))
        self.index = {s: i for i, s in enumerate(self.states)}
        self.sums = [sum(s) for s in self.states]
        self.capacity = sum(m)
        self.slots: list[int] = []
        self.gaps: list[int] = []
        self.cost: list[dict[int, int]] = []
        self.act: list[dict[int, int]] = []
        self.rank: list[dict[int, int]] = []
        self.pred: list[dict[int, int]] = []
        self.held: list[dict[int, Row]] = []
        self._best: list[int] = []
        self._tables: dict[int, list] = {}
        zero = self.index[(0,) * self.d]
        self._start = ({zero: 0}, {zero: 0}, {zero: 0})

    def _edge_tables(self, gap: int) -> list:
        """Per type: table[a][b] = (scaled cost, activity, held count)."""
        if gap in self._tables:
            return self._tables[gap]
        tables = []
        for j in range(self.d):
            bj, lj = self.B[j], self.L[j]
            keep = gap > 0 and lj * gap < bj
            tab = []
            for a in range(self.m[j] + 1):
                row = []
                for b in range(self.m[j] + 1):
                    c = min(a, b) if keep else 0
                    if gap == 0:
                        row.append((bj * max(b - a, 0), 0, 0))
                    else:
                        row.append((c * lj * gap + bj * (b - c), c * gap, c))
                tab.append(row)
            tables.append(tab)
        if len(self._tables) < 4096:
            self._tables[gap] = tables
        return tables

    @property
    def positions(self) -> int:
        return len(self.slots)

    @property
    def last_slot(self) -> int:
        return self.slots[-1] if self.slots else 0

    def push(self, t: int, demand: int) -> int:
        """Add a slot with positive demand; returns its position."""
        if demand <= 0:
            raise ValueError("only slots with demand are pushed")
        if demand > self.capacity:
            raise Infeasible(t, demand, self.capacity)
        if t <= self.last_slot:
            raise ValueError("slots must be pushed in increasing order")
        gap = t - self.last_slot - 1
        if self.slots:
            pv, pa, pr = self.cost[-1], self.act[-1], self.rank[-1]
        else:
            pv, pa, pr = self._start
        tables = self._edge_tables(gap)
        d = self.d
        prev_items = [(s, self.states[s], pv[s], pa[s], pr[s]) for s in pv]
        cost: dict[int, int] = {}
        act: dict[int, int] = {}
        pred: dict[int, int] = {}
        held: dict[int, Row] = {}
        keys: dict[int, tuple] = {}
        for bi, b in enumerate(self.states):
            if self.sums[bi] < demand:
                continue
            own_cost = sum(self.L[j] * b[j] for j in range(d))
            own_act = self.sums[bi]
            best = None
            for ai, a, va, aa, ra in prev_items:
                ec = va
                ea = aa
                for j in range(d):
                    cj, acj, _ = tables[j][a[j]][b[j]]
                    ec += cj
                    ea += acj
                key = (ec, ea, ra)
                if best is None or key < best[0]:
                    best = (key, ai)
            (ec, ea, ra), ai = best
            a = self.states[ai]
            hold = tuple(tables[j][a[j]][b[j]][2] for j in range(d)) if gap else ()
            cost[bi] = ec + own_cost
            act[bi] = ea + own_act
            pred[bi] = ai
            held[bi] = hold
            keys[bi] = (ra, hold, b)
        order = sorted(keys, key=keys.__getitem__)
        rank = {s: r for r, s in enumerate(order)}
        self.slots.append(t)
        self.gaps.append(gap)
        self.cost.append(cost)
        self.act.append(act)
        self.rank.append(rank)
        self.pred.append(pred)
        self.held.append(held)
        self._best.append(min(cost, key=lambda s: (cost[s], act[s], rank[s])))
        return len(self.slots) - 1

    def best(self, p: int) -> int:
        return self._best[p]

    def best_cost(self, p: int) -> Fraction:
        """Optimal cost of the prefix ending at position ``p`` (-1: empty)."""
        if p < 0:
            return Fraction(0)
        return Fraction(self.cost[p][self._best[p]], self.scale)

    def walk(self, p: int, s: int) -> Iterator[tuple[int, int]]:
        """(position, state) pairs from ``(p, s)`` back to the first position."""
        while p >= 0:
            yield p, s
            s = self.pred[p][s]
            p -= 1

    def schedule_rows(self, p: int, T: int) -> list[Row]:
        """Count rows of the canonical optimum for slots 1..T ending at ``p``."""
        zero = (0,) * self.d
        rows = [zero] * T
        if p < 0:
            return rows
        for q, s in self.walk(p, self._best[p]):
            t = self.slots[q]
            rows[t - 1] = self.states[s]
            hold = self.held[q][s]
            for g in range(t - self.gaps[q], t):
                rows[g - 1] = hold
        return rows


def _dp_for(inst: Instance, state_cap: int) -> ForwardDP:
    dp = ForwardDP(inst.m, inst.beta, inst.l, state_cap)
    for t, demand in enumerate(inst.lam, start=1):
        if demand > 0:
            dp.push(t, demand)
    return dp


def optimal_schedule(inst: Instance, state_cap: int = DEFAULT_STATE_CAP) -> tuple[ScheduleX, CostBreakdown]:
    """Minimum-cost schedule; ties go to fewer active server-slots, then lex order."""
    dp = _dp_for(inst, state_cap)
    x = ScheduleX(tuple(dp.schedule_rows(dp.positions - 1, inst.T)))
    cost = total_cost(x, inst)
    assert cost.total == dp.best_cost(dp.positions - 1)
    return x, cost


def optimal_cost(inst: Instance, state_cap: int = DEFAULT_STATE_CAP) -> Fraction:
    dp = _dp_for(inst, state_cap)
    return dp.best_cost(dp.positions - 1)


def optimal_cost_of_jobs(
    m: Sequence[int],
    beta: Sequence[Fraction],
    l: Sequence[Fraction],
    jobs: Iterable[tuple[int, int]],
    state_cap: int = DEFAULT_STATE_CAP,
) -> Fraction:
    """Optimum for a workload given sparsely as (slot, demand) pairs."""
    dp = ForwardDP(m, beta, l, state_cap)
    for t, demand in jobs:
        if demand > 0:
            dp.push(t, demand)
    return dp.best_cost(dp.positions - 1)


def _check_pair(yu: ScheduleY, yv: ScheduleY) -> None:
    if yu.T > yv.T:
        raise DimensionMismatch(f"first schedule covers {yu.T} slots, second only {yv.T}")
    if yu.T and yv.T and yu.lanes != yv.lanes:
        raise DimensionMismatch(f"lane counts differ: {yu.lanes} vs {yv.lanes}")


def min_schedule(yu: ScheduleY, yv: ScheduleY) -> ScheduleY:
    """Pointwise minimum over the shorter horizon."""
    _check_pair(yu, yv)
    return ScheduleY(
        tuple(tuple(min(a, b) for a, b in zip(ru, rv)) for ru, rv in zip(yu.rows, yv.rows))
    )


def max_schedule(yu: ScheduleY, yv: ScheduleY) -> ScheduleY:
    """Pointwise maximum with each lane's nonzero runs raised to their peak.

    A slot where both inputs are empty stays empty and separates runs.
    """
    _check_pair(yu, yv)
    T = yv.T
    if T == 0:
        return yv
    width = yv.lanes
    zero = (0,) * width
    urows = list(yu.rows) + [zero] * (T - yu.T)
    merged = [[max(a, b) for a, b in zip(ru, rv)] for ru, rv in zip(urows, yv.rows)]
    for k in range(width):
        t = 0
        while t < T:
            if merged[t][k] == 0:
                t += 1
                continue
            end = t
            peak = 0
            while end < T and merged[end][k] > 0:
                peak = max(peak, merged[end][k])
                end += 1
            for s in range(t, end):
                merged[s][k] = peak
            t = end
    return ScheduleY(tuple(tuple(r) for r in merged))


@dataclass(frozen=True)
class OptimalPrefixFamily:
    """Monotone optimal schedules for every prefix instance.

    ``schedules[t-1]`` covers slots 1..t and ``costs[t-1]`` is its cost.
    """

    schedules: tuple[ScheduleY, ...]
    costs: tuple[Fraction, ...]

    def top(self, t: int) -> Row:
        """Last row of the schedule for prefix t."""
        return self.schedules[t - 1].rows[t - 1]


def optimal_prefix_family(inst: Instance, state_cap: int = DEFAULT_STATE_CAP) -> OptimalPrefixFamily:
    """Each prefix solved on its own, then merged with the previous member."""
    schedules: list[ScheduleY] = []
    costs: list[Fraction] = []
    prev = ScheduleY(())
    for t in range(1, inst.T + 1):
        sub = inst.prefix(t)
        x, cost = optimal_schedule(sub, state_cap)
        merged = max_schedule(prev, x_to_y(x, sub)) if schedules else x_to_y(x, sub)
        schedules.append(merged)
        costs.append(cost.total)
        prev = merged
    return OptimalPrefixFamily(tuple(schedules), tuple(costs))


class PrefixTracker:
    """Last columns of the monotone prefix family, computed online.

    Merging the canonical prefix optima one after another equals taking the
    pointwise maximum of all of them and then raising each lane run to its
    peak. So every lane keeps a union-find over time cells (one per demand
    slot, one per idle run before it) whose roots store the run peak, and
    each new canonical optimum is folded in by walking its predecessor chain
    only until it joins a chain that was already folded in.
    """

    def __init__(
        self,
        m: Sequence[int],
        beta: Sequence[Fraction],
        l: Sequence[Fraction],
        state_cap: int = DEFAULT_STATE_CAP,
    ) -> None:
        self.dp = ForwardDP(m, beta, l, state_cap)
        self.width = sum(m)
        self.t = 0
        self._peak: list[list[int]] = [[] for _ in range(self.width)]
        self._on: list[list[bool]] = [[] for _ in range(self.width)]
        self._lane_parent: list[list[int]] = [[] for _ in range(self.width)]
        self._slot_cell: list[int] = []
        self._gap_cell: list[int] = []
        self._seen: list[set[int]] = []
        self._lane_rows: dict[Row, Row] = {}

    @classmethod
    def for_instance(cls, inst: Instance, state_cap: int = DEFAULT_STATE_CAP) -> "PrefixTracker":
        return cls(inst.m, inst.beta, inst.l, state_cap)

    def _new_cell(self) -> int:
        cell = len(self._on[0]) if self.width else 0
        for k in range(self.width):
            self._on[k].append(False)
            self._peak[k].append(0)
            self._lane_parent[k].append(cell)
        return cell

    def _find(self, k: int, c: int) -> int:
        parent = self._lane_parent[k]
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def _union(self, k: int, a: int, b: int) -> None:
        ra, rb = self._find(k, a), self._find(k, b)
        if ra != rb:
            self._lane_parent[k][rb] = ra
            self._peak[k][ra] = max(self._peak[k][ra], self._peak[k][rb])

    def _raise(self, cell: int, lane_row: Row) -> None:
        ncells = len(self._on[0])
        for k, v in enumerate(lane_row):
            if v == 0:
                break
            on = self._on[k]
            if not on[cell]:
                on[cell] = True
                self._peak[k][cell] = v
                if cell > 0 and on[cell - 1]:
                    self._union(k, cell - 1, cell)
                if cell + 1 < ncells and on[cell + 1]:
                    self._union(k, cell + 1, cell)
            else:
                root = self._find(k, cell)
                if v > self._peak[k][root]:
                    self._peak[k][root] = v

    def _lanes(self, counts: Row) -> Row:
        row = self._lane_rows.get(counts)
        if row is None:
            row = lanes_of(counts, self.width)
            self._lane_rows[counts] = row
        return row

    def advance(self, n: int) -> None:
        """Skip ``n`` slots without demand (their top rows are empty)."""
        self.t += n

    def push(self, demand: int) -> Row:
        """Consume the next slot and return the top row of its family member."""
        self.t += 1
        if demand == 0:
            return (0,) * self.width
        p = self.dp.push(self.t, demand)
        if self.dp.gaps[p] > 0:
            self._gap_cell.append(self._new_cell())
        else:
            self._gap_cell.append(-1)
        self._slot_cell.append(self._new_cell())
        self._seen.append(set())
        states = self.dp.states
        for q, s in self.dp.walk(p, self.dp.best(p)):
            seen = self._seen[q]
            if s in seen:
                break
            seen.add(s)
            self._raise(self._slot_cell[q], self._lanes(states[s]))
            if self._gap_cell[q] >= 0:
                self._raise(self._gap_cell[q], self._lanes(self.dp.held[q][s]))
        cell = self._slot_cell[p]
        return tuple(
            self._peak[k][self._find(k, cell)] if self._on[k][cell] else 0 for k in range(self.width)
        )

    @property
    def prefix_cost(self) -> Fraction:
        return self.dp.best_cost(self.dp.positions - 1)


def prefix_tops(inst: Instance, state_cap: int = DEFAULT_STATE_CAP) -> list[Row]:
    """Top rows of the monotone family for t = 1..T."""
    tracker = PrefixTracker.for_instance(inst, state_cap)
    return [tracker.push(v) for v in inst.lam]
