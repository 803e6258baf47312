"""Plain-text instance, schedule, lane and block files."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .model import (
    Instance,
    InstanceError,
    ScheduleX,
    ScheduleY,
    as_rational,
    normalize_instance,
    total_cost,
)


class FormatError(ValueError):
    pass


def _content_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            continue
        out.append(line)
    return out


def parse_instance(text: str) -> Instance:
    """Six lines: d, m, beta, l, T, lambda (blank lambda line when T = 0)."""
    lines = [ln for ln in _content_lines(text) if ln]
    if len(lines) == 5:
        lines.append("")
    if len(lines) != 6:
        raise FormatError(f"expected 6 instance lines, found {len(lines)}")
    try:
        d = int(lines[0])
        m = [int(v) for v in lines[1].split()]
        beta = [as_rational(v) for v in lines[2].split()]
        l = [as_rational(v) for v in lines[3].split()]
        T = int(lines[4])
        lam = [int(v) for v in lines[5].split()]
    except ValueError as exc:
        if isinstance(exc, InstanceError):
            raise
        raise FormatError(f"malformed token: {exc}") from exc
    if not (len(m) == len(beta) == len(l) == d):
        raise FormatError(f"d={d} but m, beta, l have {len(m)}, {len(beta)}, {len(l)} entries")
    if len(lam) != T:
        raise FormatError(f"T={T} but {len(lam)} job volumes given")
    if any(v < 0 for v in lam):
        raise FormatError("job volumes must be non-negative")
    return normalize_instance(list(zip(m, beta, l)), lam)


def format_instance(inst: Instance) -> str:
    return "\n".join(
        [
            str(inst.d),
            " ".join(map(str, inst.m)),
            " ".join(map(str, inst.beta)),
            " ".join(map(str, inst.l)),
            str(inst.T),
            " ".join(map(str, inst.lam)),
        ]
    ) + "\n"


def format_schedule(x: ScheduleX, inst: Instance) -> str:
    cost = total_cost(x, inst)
    lines = [" ".join(map(str, row)) for row in x.rows]
    lines.append(f"# cost total={cost.total} operating={cost.operating} switching={cost.switching}")
    return "\n".join(lines) + "\n"


def parse_schedule(text: str, d: int) -> ScheduleX:
    rows = []
    for line in _content_lines(text):
        if not line:
            continue
        try:
            row = tuple(int(v) for v in line.split())
        except ValueError as exc:
            raise FormatError(f"malformed schedule row {line!r}") from exc
        if len(row) != d:
            raise FormatError(f"schedule row {line!r} has {len(row)} entries, expected {d}")
        rows.append(row)
    return ScheduleX(tuple(rows))


def format_lanes(y: ScheduleY) -> str:
    return "".join(" ".join(map(str, row)) + "\n" for row in y.rows)


def format_blocks(blocks: Iterable) -> str:
    return "".join(b.line() + "\n" for b in blocks)


def read_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text())


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text)

