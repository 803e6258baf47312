"""Instances, schedules in count and lane form, and exact cost accounting.

Server types are indexed 1..d in the public API (type 0 means an empty
lane). Internally rows are plain tuples indexed from 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Row = tuple[int, ...]


class InstanceError(ValueError):
    """Base class for malformed problem instances."""


class EmptyInstance(InstanceError):
    def __init__(self) -> None:
        super().__init__("instance has no server types")


class InvalidInstance(InstanceError):
    pass


class Infeasible(InstanceError):
    """Some slot asks for more capacity than the data center owns."""

    def __init__(self, t: int, demand: int, capacity: int) -> None:
        self.t = t
        self.demand = demand
        self.capacity = capacity
        super().__init__(f"slot {t}: demand {demand} exceeds capacity {capacity}")


class InfeasibleLoad(Infeasible):
    pass


class InefficientType(InstanceError):
    """Type ``j`` is dominated by type ``j2`` (1-based, input order)."""

    def __init__(self, j: int, j2: int) -> None:
        self.j = j
        self.j2 = j2
        super().__init__(f"server type {j} is inefficient relative to type {j2}")


class ScheduleError(ValueError):
    pass


class CapacityExceeded(ScheduleError):
    def __init__(self, t: int, j: int, count: int, limit: int) -> None:
        self.t = t
        self.j = j
        super().__init__(f"slot {t}: {count} servers of type {j} but only {limit} exist")


class UnsortedLanes(ScheduleError):
    def __init__(self, t: int, row: Sequence[int]) -> None:
        self.t = t
        super().__init__(f"slot {t}: lane row {tuple(row)} is not sorted descending")


class DimensionMismatch(ScheduleError):
    pass


def as_rational(value: int | str | Fraction) -> Fraction:
    """Parse an integer, ``p/q`` token, or existing Fraction exactly."""
    if isinstance(value, float):
        raise InvalidInstance(f"refusing inexact float cost {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInstance(f"bad rational token {value!r}") from exc


@dataclass(frozen=True)
class Instance:
    """A right-sizing problem: d server types and a job-volume sequence.

    Types are kept sorted with operating cost strictly decreasing and
    switching cost strictly increasing; construct through
    :func:`normalize_instance` when the input may be unsorted.
    """

    m: Row
    beta: tuple[Fraction, ...]
    l: tuple[Fraction, ...]
    lam: Row = ()

    def __post_init__(self) -> None:
        d = len(self.m)
        if d == 0:
            raise EmptyInstance()
        if len(self.beta) != d or len(self.l) != d:
            raise InvalidInstance("m, beta and l must have equal length")
        object.__setattr__(self, "m", tuple(int(v) for v in self.m))
        object.__setattr__(self, "beta", tuple(as_rational(v) for v in self.beta))
        object.__setattr__(self, "l", tuple(as_rational(v) for v in self.l))
        object.__setattr__(self, "lam", tuple(int(v) for v in self.lam))
        if any(v < 1 for v in self.m):
            raise InvalidInstance("every m_j must be positive")
        if any(b <= 0 for b in self.beta):
            raise InvalidInstance("every beta_j must be positive")
        if any(c < 0 for c in self.l):
            raise InvalidInstance("every l_j must be non-negative")
        for j in range(d - 1):
            if not (self.l[j] > self.l[j + 1] and self.beta[j] < self.beta[j + 1]):
                raise InefficientType(j + 1, j + 2)
        cap = self.capacity
        for t, v in enumerate(self.lam, start=1):
            if v < 0:
                raise InvalidInstance(f"slot {t}: negative job volume")
            if v > cap:
                raise InfeasibleLoad(t, v, cap)

    @property
    def d(self) -> int:
        return len(self.m)

    @property
    def T(self) -> int:
        return len(self.lam)

    @property
    def capacity(self) -> int:
        """Total server count, which is also the number of lanes."""
        return sum(self.m)

    def prefix(self, t: int) -> "Instance":
        return Instance(self.m, self.beta, self.l, self.lam[:t])

    def with_load(self, lam: Iterable[int]) -> "Instance":
        return Instance(self.m, self.beta, self.l, tuple(lam))

    def has_idle_free_type(self) -> bool:
        return any(c == 0 for c in self.l)


@dataclass(frozen=True)
class ServerType:
    """One entry of an unordered instance description."""

    m: int
    beta: Fraction | int | str
    l: Fraction | int | str


def normalize_instance(types: Sequence[ServerType | tuple], lam: Iterable[int] = ()) -> Instance:
    """Merge duplicate types, sort by operating cost and validate.

    ``types`` holds ``ServerType`` records or ``(m, beta, l)`` triples in any
    order. Error indices refer to positions in ``types`` (1-based).
    """
    if len(types) == 0:
        raise EmptyInstance()
    parsed: list[tuple[int, Fraction, Fraction, int]] = []
    for idx, item in enumerate(types, start=1):
        if isinstance(item, ServerType):
            m, beta, l = item.m, item.beta, item.l
        else:
            m, beta, l = item
        m, beta, l = int(m), as_rational(beta), as_rational(l)
        if m < 1:
            raise InvalidInstance(f"type {idx}: m must be positive")
        if beta <= 0:
            raise InvalidInstance(f"type {idx}: beta must be positive")
        if l < 0:
            raise InvalidInstance(f"type {idx}: l must be non-negative")
        parsed.append((m, beta, l, idx))

    merged: dict[tuple[Fraction, Fraction], list] = {}
    for m, beta, l, idx in parsed:
        key = (l, beta)
        if key in merged:
            merged[key][0] += m
        else:
            merged[key] = [m, idx]

    keys = list(merged)
    for a in range(len(keys)):
        for b in range(len(keys)):
            if a == b:
                continue
            la, ba = keys[a]
            lb, bb = keys[b]
            if la >= lb and ba >= bb:
                raise InefficientType(merged[keys[a]][1], merged[keys[b]][1])

    ordered = sorted(keys, key=lambda k: k[0], reverse=True)
    lam = tuple(int(v) for v in lam)
    cap = sum(merged[k][0] for k in ordered)
    for t, v in enumerate(lam, start=1):
        if v > cap:
            raise InfeasibleLoad(t, v, cap)
    return Instance(
        m=tuple(merged[k][0] for k in ordered),
        beta=tuple(k[1] for k in ordered),
        l=tuple(k[0] for k in ordered),
        lam=lam,
    )


@dataclass(frozen=True)
class ScheduleX:
    """Active server counts: ``rows[t-1][j-1]`` is x_{t,j}."""

    rows: tuple[Row, ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise DimensionMismatch("rows of a count schedule must share one width")
        for t, r in enumerate(rows, start=1):
            if any(v < 0 for v in r):
                raise ScheduleError(f"slot {t}: negative server count")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def zeros(cls, T: int, d: int) -> "ScheduleX":
        return cls(tuple((0,) * d for _ in range(T)))

    @property
    def T(self) -> int:
        return len(self.rows)

    def activity(self) -> int:
        return sum(sum(r) for r in self.rows)


@dataclass(frozen=True)
class ScheduleY:
    """Lane assignments: ``rows[t-1][k-1]`` is the type serving lane k."""

    rows: tuple[Row, ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise DimensionMismatch("rows of a lane schedule must share one width")
        for t, r in enumerate(rows, start=1):
            if any(v < 0 for v in r):
                raise ScheduleError(f"slot {t}: negative server type")
            if any(r[k] < r[k + 1] for k in range(len(r) - 1)):
                raise UnsortedLanes(t, r)
        object.__setattr__(self, "rows", rows)

    @property
    def T(self) -> int:
        return len(self.rows)

    @property
    def lanes(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def at(self, t: int, k: int) -> int:
        """Lane value with the zero boundary outside 1..T."""
        if t < 1 or t > len(self.rows):
            return 0
        return self.rows[t - 1][k - 1]


@dataclass(frozen=True)
class CostBreakdown:
    operating: Fraction
    switching: Fraction

    @property
    def total(self) -> Fraction:
        return self.operating + self.switching

    def __add__(self, other: "CostBreakdown") -> "CostBreakdown":
        return CostBreakdown(self.operating + other.operating, self.switching + other.switching)


def lanes_of(counts: Sequence[int], width: int) -> Row:
    """Lane row for one configuration: highest types first, then zeros."""
    out: list[int] = []
    for j in range(len(counts), 0, -1):
        out.extend([j] * counts[j - 1])
    if len(out) > width:
        raise ScheduleError(f"{len(out)} active servers do not fit in {width} lanes")
    out.extend([0] * (width - len(out)))
    return tuple(out)


def counts_of(lane_row: Sequence[int], d: int) -> Row:
    counts = [0] * d
    for v in lane_row:
        if v > d:
            raise ScheduleError(f"lane holds type {v} but only {d} types exist")
        if v:
            counts[v - 1] += 1
    return tuple(counts)


def x_to_y(x: ScheduleX, inst: Instance) -> ScheduleY:
    width = inst.capacity
    return ScheduleY(tuple(lanes_of(r, width) for r in x.rows))


def y_to_x(y: ScheduleY, inst: Instance) -> ScheduleX:
    rows = []
    for t, r in enumerate(y.rows, start=1):
        counts = counts_of(r, inst.d)
        for j, (c, cap) in enumerate(zip(counts, inst.m), start=1):
            if c > cap:
                raise CapacityExceeded(t, j, c, cap)
        rows.append(counts)
    return ScheduleX(tuple(rows))


def is_feasible(x: ScheduleX, inst: Instance) -> bool:
    if x.T != inst.T:
        return False
    for r, demand in zip(x.rows, inst.lam):
        if len(r) != inst.d:
            return False
        if any(v < 0 or v > cap for v, cap in zip(r, inst.m)):
            return False
        if sum(r) < demand:
            return False
    return True


def total_cost(x: ScheduleX, inst: Instance) -> CostBreakdown:
    operating = Fraction(0)
    switching = Fraction(0)
    prev: Row = (0,) * inst.d
    for r in x.rows:
        for j in range(inst.d):
            operating += inst.l[j] * r[j]
            if r[j] > prev[j]:
                switching += inst.beta[j] * (r[j] - prev[j])
        prev = r
    return CostBreakdown(operating, switching)


def lane_cost(y: ScheduleY, inst: Instance, t: int, k: int) -> Fraction:
    cur = y.at(t, k)
    if cur == 0:
        return Fraction(0)
    if y.at(t - 1, k) != cur:
        return inst.l[cur - 1] + inst.beta[cur - 1]
    return inst.l[cur - 1]


def lane_cost_sum(y: ScheduleY, inst: Instance) -> Fraction:
    return sum(
        (lane_cost(y, inst, t, k) for t in range(1, y.T + 1) for k in range(1, y.lanes + 1)),
        Fraction(0),
    )
