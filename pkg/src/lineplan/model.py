"""Shared domain types for production lines: workstations, routings, deltas.

All types are immutable values; treat instances as read-only after
construction. Construction itself never validates, so that invalid data can
be represented and reported: `validate_line` returns violations as data,
while `apply_delta` raises because a bad edit is a caller fault.

Unit conventions, fixed globally: time in minutes, capacity in units/day,
one working day = `available_minutes` (default 600, a 10-hour day).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

DEFAULT_AVAILABLE_MINUTES = 600.0


class LinePlanError(Exception):
    """Base class for faults raised by this package."""


class LineValidationError(LinePlanError):
    """An operation required a valid line but got violations instead."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


class DeltaError(LinePlanError):
    """A scenario edit could not be applied. Carries the offending edit index."""

    def __init__(self, message: str, edit_index: int):
        self.edit_index = edit_index
        super().__init__(f"edit {edit_index}: {message}")


@dataclass(frozen=True)
class MachinePool:
    """A group of identical parallel machines at one workstation."""

    unit_capacity: float  # units/day one machine can produce
    machine_count: int


@dataclass(frozen=True)
class Workstation:
    """One process step in the routing.

    `total_batch_time` is carried and reported as descriptive metadata but is
    never used in capacity arithmetic; only `cycle_time` and resource counts
    enter the daily-output math.
    """

    id: str
    name: str
    batch_qty: int
    total_batch_time: float  # minutes per transfer batch, metadata only
    cycle_time: float  # minutes per unit
    labor_resources: int  # operators or teams; both are parallel labor units
    machine_pool: MachinePool | None = None


@dataclass(frozen=True)
class StyleRouting:
    """Standard applied minutes per station for one garment style."""

    style_id: str
    sam_per_station: Mapping[str, float]  # station id -> minutes per unit
    demand_qty: int | None = None
    unit_profit: float = 1.0


@dataclass(frozen=True)
class ProductionLine:
    """An ordered sequence of workstations plus calendar and style routings."""

    id: str
    workstations: tuple[Workstation, ...]
    available_minutes: float = DEFAULT_AVAILABLE_MINUTES
    styles: tuple[StyleRouting, ...] = ()

    def station(self, station_id: str) -> Workstation:
        for ws in self.workstations:
            if ws.id == station_id:
                return ws
        raise KeyError(station_id)

    def station_ids(self) -> list[str]:
        return [ws.id for ws in self.workstations]


@dataclass(frozen=True)
class Violation:
    """One invariant violation, located by station id (or '<line>')."""

    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.where}: {self.message}"


def validate_line(line: ProductionLine) -> list[Violation]:
    """Check every line invariant; empty result means the line is valid."""
    violations: list[Violation] = []

    if not line.workstations:
        violations.append(Violation("<line>", "workstation sequence is empty"))
    if line.available_minutes <= 0:
        violations.append(Violation("<line>", "available_minutes must be > 0"))

    seen: set[str] = set()
    for ws in line.workstations:
        if ws.id in seen:
            violations.append(Violation(ws.id, "duplicate id"))
        seen.add(ws.id)

        if ws.cycle_time <= 0:
            violations.append(Violation(ws.id, "cycle_time must be > 0"))
        if ws.labor_resources < 0:
            violations.append(Violation(ws.id, "labor_resources must be >= 0"))
        if ws.batch_qty < 1:
            violations.append(Violation(ws.id, "batch_qty must be >= 1"))
        if ws.machine_pool is not None:
            if ws.machine_pool.unit_capacity < 0:
                violations.append(Violation(ws.id, "unit_capacity must be >= 0"))
            if ws.machine_pool.machine_count < 0:
                violations.append(Violation(ws.id, "machine_count must be >= 0"))

    style_ids: set[str] = set()
    for style in line.styles:
        if style.style_id in style_ids:
            violations.append(Violation(style.style_id, "duplicate style id"))
        style_ids.add(style.style_id)
        for station_id, sam in style.sam_per_station.items():
            if station_id not in seen:
                violations.append(
                    Violation(style.style_id, f"unknown station {station_id!r} in routing")
                )
            if sam < 0:
                violations.append(
                    Violation(style.style_id, f"SAM for {station_id!r} must be >= 0")
                )
        if style.demand_qty is not None and style.demand_qty < 0:
            violations.append(Violation(style.style_id, "demand_qty must be >= 0"))

    return violations


def require_valid(line: ProductionLine) -> None:
    """Raise LineValidationError unless the line passes validate_line."""
    violations = validate_line(line)
    if violations:
        raise LineValidationError(violations)


ADJUST_LABOR = "adjust_labor"
ADJUST_MACHINES = "adjust_machines"
SET_CYCLE_TIME = "set_cycle_time"

EDIT_KINDS = (ADJUST_LABOR, ADJUST_MACHINES, SET_CYCLE_TIME)


@dataclass(frozen=True)
class Edit:
    """One atomic what-if edit.

    kind is one of: adjust_labor (value = signed team count),
    adjust_machines (value = signed machine count), set_cycle_time
    (value = new minutes per unit).
    """

    kind: str
    station_id: str
    value: float


@dataclass(frozen=True)
class ScenarioDelta:
    """An ordered list of atomic edits applied as a unit."""

    edits: tuple[Edit, ...] = ()

    @staticmethod
    def of(*edits: Edit) -> ScenarioDelta:
        return ScenarioDelta(tuple(edits))

    def concat(self, other: ScenarioDelta) -> ScenarioDelta:
        return ScenarioDelta(self.edits + other.edits)


def _apply_edit(line: ProductionLine, edit: Edit, index: int) -> ProductionLine:
    stations = list(line.workstations)
    for pos, ws in enumerate(stations):
        if ws.id == edit.station_id:
            break
    else:
        raise DeltaError(f"unknown station {edit.station_id!r}", index)

    if edit.kind == ADJUST_LABOR:
        if edit.value != int(edit.value):
            raise DeltaError("labor adjustment must be a whole number", index)
        new_count = ws.labor_resources + int(edit.value)
        if new_count < 0:
            raise DeltaError(f"labor_resources would become {new_count}", index)
        stations[pos] = replace(ws, labor_resources=new_count)
    elif edit.kind == ADJUST_MACHINES:
        if ws.machine_pool is None:
            raise DeltaError(f"station {ws.id!r} has no machine pool", index)
        if edit.value != int(edit.value):
            raise DeltaError("machine adjustment must be a whole number", index)
        new_count = ws.machine_pool.machine_count + int(edit.value)
        if new_count < 0:
            raise DeltaError(f"machine_count would become {new_count}", index)
        stations[pos] = replace(
            ws, machine_pool=replace(ws.machine_pool, machine_count=new_count)
        )
    elif edit.kind == SET_CYCLE_TIME:
        if edit.value <= 0:
            raise DeltaError(f"cycle_time must be > 0, got {edit.value}", index)
        stations[pos] = replace(ws, cycle_time=float(edit.value))
    else:
        raise DeltaError(f"unknown edit kind {edit.kind!r}", index)

    return replace(line, workstations=tuple(stations))


def apply_delta(line: ProductionLine, delta: ScenarioDelta) -> ProductionLine:
    """Return a new line with the delta's edits applied in order.

    The input line is never mutated. Raises DeltaError (with the offending
    edit index) on an unknown station or an edit that would break an
    invariant; a successfully applied delta always yields a valid line.
    """
    result = line
    for index, edit in enumerate(delta.edits):
        result = _apply_edit(result, edit, index)
    require_valid(result)
    return result


def invert_delta(delta: ScenarioDelta, base: ProductionLine) -> ScenarioDelta:
    """Build the delta that undoes `delta` when applied after it.

    The base line is needed because set_cycle_time discards the prior value;
    edits are replayed to capture intermediate cycle times, then inverted in
    reverse order.
    """
    inverses: list[Edit] = []
    current = base
    for index, edit in enumerate(delta.edits):
        if edit.kind == ADJUST_LABOR or edit.kind == ADJUST_MACHINES:
            inverses.append(Edit(edit.kind, edit.station_id, -edit.value))
        elif edit.kind == SET_CYCLE_TIME:
            try:
                prior = current.station(edit.station_id).cycle_time
            except KeyError:
                raise DeltaError(f"unknown station {edit.station_id!r}", index) from None
            inverses.append(Edit(SET_CYCLE_TIME, edit.station_id, prior))
        else:
            raise DeltaError(f"unknown edit kind {edit.kind!r}", index)
        current = _apply_edit(current, edit, index)
    return ScenarioDelta(tuple(reversed(inverses)))
