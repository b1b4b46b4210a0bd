"""Station capacity math, bottleneck identification, and the CRP linear program.

Daily output of a labor resource is floor(available_minutes / cycle_time)
units; partial units cannot ship. A station's effective capacity is its
labor output capped by total machine capacity (unit capacity x machine
count) when a machine pool exists. The finished-goods throughput of the
line is the minimum effective capacity, and that station is the bottleneck.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from lineplan.model import ProductionLine, StyleRouting, Workstation, require_valid
from lineplan.simplex import MAXIMIZE, LpProblem

CONSTRAINT_LABOR = "labor"
CONSTRAINT_MACHINE = "machine"
CONSTRAINT_TIE = "tie"


def machine_capacity(unit_capacity: float, machine_count: int) -> float:
    """Total units/day of a work center: per-machine capacity x machine count."""
    if unit_capacity < 0:
        raise ValueError(f"unit_capacity must be >= 0, got {unit_capacity}")
    if machine_count < 0:
        raise ValueError(f"machine_count must be >= 0, got {machine_count}")
    return unit_capacity * machine_count


def labor_daily_output(station: Workstation, available_minutes: float) -> int:
    """Units/day the station's labor can produce: floor(minutes/cycle) per resource."""
    return math.floor(available_minutes / station.cycle_time) * station.labor_resources


class EffectiveCapacity(NamedTuple):
    capacity: float
    constraint_kind: str  # labor | machine | tie


def effective_capacity(station: Workstation, available_minutes: float) -> EffectiveCapacity:
    """Binding daily capacity of a station and which resource bounds it.

    Labor-only stations are bounded by labor output. With a machine pool the
    demand side (labor output) is compared against the supply side (machine
    capacity); the smaller bound wins, "tie" when they are equal.
    """
    labor = labor_daily_output(station, available_minutes)
    if station.machine_pool is None:
        return EffectiveCapacity(labor, CONSTRAINT_LABOR)
    machines = machine_capacity(
        station.machine_pool.unit_capacity, station.machine_pool.machine_count
    )
    if machines < labor:
        return EffectiveCapacity(machines, CONSTRAINT_MACHINE)
    if labor < machines:
        return EffectiveCapacity(labor, CONSTRAINT_LABOR)
    return EffectiveCapacity(labor, CONSTRAINT_TIE)


@dataclass(frozen=True)
class StationCapacity:
    """One row of a capacity report."""

    station_id: str
    labor_daily_output: int
    machine_daily_capacity: float | None
    effective_capacity: float
    is_bottleneck: bool
    constraint_kind: str


@dataclass(frozen=True)
class CapacityReport:
    """Per-station capacities plus the line's finished-goods throughput."""

    rows: tuple[StationCapacity, ...]
    fg_throughput: float

    def bottleneck(self) -> StationCapacity:
        return next(row for row in self.rows if row.is_bottleneck)


def analyze_capacity(line: ProductionLine) -> CapacityReport:
    """Compute every station's capacities and flag exactly one bottleneck.

    Among stations sharing the minimum effective capacity, machine-bound
    (or tie) stations are preferred over labor-only ones because labor is
    the cheaper resource to extend; remaining ties go to the latest station
    in routing order.
    """
    require_valid(line)

    capacities = []
    for station in line.workstations:
        cap = effective_capacity(station, line.available_minutes)
        machines = None
        if station.machine_pool is not None:
            machines = machine_capacity(
                station.machine_pool.unit_capacity, station.machine_pool.machine_count
            )
        capacities.append((station, cap, machines))

    fg = min(cap.capacity for _, cap, _ in capacities)
    bottleneck_pos = max(
        (pos for pos, (_, cap, _) in enumerate(capacities) if cap.capacity == fg),
        key=lambda pos: (capacities[pos][1].constraint_kind != CONSTRAINT_LABOR, pos),
    )

    rows = tuple(
        StationCapacity(
            station_id=station.id,
            labor_daily_output=labor_daily_output(station, line.available_minutes),
            machine_daily_capacity=machines,
            effective_capacity=cap.capacity,
            is_bottleneck=(pos == bottleneck_pos),
            constraint_kind=cap.constraint_kind,
        )
        for pos, (station, cap, machines) in enumerate(capacities)
    )
    return CapacityReport(rows=rows, fg_throughput=fg)


def fg_machinery_throughput(report: CapacityReport) -> float | None:
    """Minimum total machine capacity across machine stations; None if none."""
    machine_caps = [
        row.machine_daily_capacity
        for row in report.rows
        if row.machine_daily_capacity is not None
    ]
    return min(machine_caps) if machine_caps else None


def build_crp_lp(
    line: ProductionLine, styles: Iterable[StyleRouting] | None = None
) -> LpProblem:
    """Assemble the throughput LP: maximize profit over per-style quantities.

    One decision variable per style. Each station contributes a labor-time
    row (sum of SAM x quantity <= available minutes x labor resources) and,
    when it has a machine pool, a machine-time row with machine count on the
    right-hand side. Styles with a demand quantity get an upper-bound row.
    """
    require_valid(line)
    selected = tuple(styles) if styles is not None else line.styles

    station_ids = set(line.station_ids())
    for style in selected:
        unknown = sorted(set(style.sam_per_station) - station_ids)
        if unknown:
            raise ValueError(
                f"style {style.style_id!r} routes over unknown stations: {unknown}"
            )

    objective = tuple(style.unit_profit for style in selected)
    variable_names = tuple(style.style_id for style in selected)

    rows: list[tuple[float, ...]] = []
    rhs: list[float] = []
    names: list[str] = []

    for station in line.workstations:
        sams = tuple(
            float(style.sam_per_station.get(station.id, 0.0)) for style in selected
        )
        rows.append(sams)
        rhs.append(line.available_minutes * station.labor_resources)
        names.append(f"{station.id}:labor")
        if station.machine_pool is not None:
            rows.append(sams)
            rhs.append(line.available_minutes * station.machine_pool.machine_count)
            names.append(f"{station.id}:machine")

    for j, style in enumerate(selected):
        if style.demand_qty is not None:
            rows.append(tuple(1.0 if k == j else 0.0 for k in range(len(selected))))
            rhs.append(float(style.demand_qty))
            names.append(f"{style.style_id}:demand")

    return LpProblem(
        objective=objective,
        constraint_matrix=tuple(rows),
        rhs=tuple(rhs),
        sense=MAXIMIZE,
        variable_names=variable_names,
        constraint_names=tuple(names),
    )
