"""Value-stream metrics: lead time, value-added ratio, state comparison.

A map is an ordered chain of processes with an inventory buffer ahead of
each one. Per-unit lead time is the sum of effective cycle times
(cycle_time / uptime_fraction) plus the waiting time represented by each
buffer, converted to minutes as (pieces / daily demand) x the downstream
process's available minutes. Changeover minutes are excluded unless a
changeover frequency is supplied; defect rates never inflate lead time
but are surfaced as rolled yield when comparing states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from lineplan.model import LinePlanError, Violation


class VsmError(LinePlanError):
    """Raised for structurally invalid maps or degenerate metric inputs."""


@dataclass(frozen=True)
class VsmProcess:
    """One process box on the map. Times are minutes; fractions are 0..1."""

    name: str
    cycle_time: float
    value_added_time: float
    changeover_time: float = 0.0
    operators: int = 1
    available_time: float = 600.0
    uptime_fraction: float = 1.0
    defect_rate: float = 0.0


@dataclass(frozen=True)
class VsmMap:
    """Ordered processes, one buffer (pieces) ahead of each, and daily demand."""

    processes: tuple[VsmProcess, ...]
    buffers: tuple[float, ...]
    customer_demand: float


def validate_map(vsm_map: VsmMap) -> list[Violation]:
    """Structural checks. Empty result means the map is usable."""
    violations = []
    if not vsm_map.processes:
        violations.append(Violation("map", "must contain at least one process"))
    if len(vsm_map.buffers) != len(vsm_map.processes):
        violations.append(
            Violation(
                "map",
                f"buffers length {len(vsm_map.buffers)} != "
                f"processes length {len(vsm_map.processes)}",
            )
        )
    if vsm_map.customer_demand <= 0:
        violations.append(
            Violation("map", f"customer_demand must be > 0, got {vsm_map.customer_demand}")
        )
    for proc in vsm_map.processes:
        where = f"process {proc.name!r}"
        if proc.cycle_time < 0:
            violations.append(Violation(where, f"cycle_time must be >= 0, got {proc.cycle_time}"))
        if proc.changeover_time < 0:
            violations.append(
                Violation(where, f"changeover_time must be >= 0, got {proc.changeover_time}")
            )
        if proc.operators < 0:
            violations.append(Violation(where, f"operators must be >= 0, got {proc.operators}"))
        if proc.available_time <= 0:
            violations.append(
                Violation(where, f"available_time must be > 0, got {proc.available_time}")
            )
        if not 0.0 <= proc.uptime_fraction <= 1.0:
            violations.append(
                Violation(where, f"uptime_fraction must be in [0, 1], got {proc.uptime_fraction}")
            )
        if not 0.0 <= proc.defect_rate < 1.0:
            violations.append(
                Violation(where, f"defect_rate must be in [0, 1), got {proc.defect_rate}")
            )
        if not 0.0 <= proc.value_added_time <= proc.cycle_time:
            violations.append(
                Violation(
                    where,
                    f"value_added_time must be in [0, cycle_time], got {proc.value_added_time}",
                )
            )
    for i, buffer in enumerate(vsm_map.buffers):
        if buffer < 0:
            violations.append(Violation(f"buffer[{i}]", f"must be >= 0, got {buffer}"))
    return violations


def require_valid_map(vsm_map: VsmMap) -> None:
    violations = validate_map(vsm_map)
    if violations:
        raise VsmError("; ".join(str(v) for v in violations))


def lead_time(
    vsm_map: VsmMap, changeovers_per_day: Sequence[float] | None = None
) -> float:
    """Per-unit traversal minutes: effective cycle times plus buffer waits.

    Buffer i waits ahead of process i, so its pieces drain at customer
    demand against process i's available minutes. With a per-process
    changeover frequency, each unit also carries its amortized share
    changeover_time x count / demand.
    """
    require_valid_map(vsm_map)
    if changeovers_per_day is not None and len(changeovers_per_day) != len(
        vsm_map.processes
    ):
        raise VsmError(
            f"changeovers_per_day length {len(changeovers_per_day)} != "
            f"processes length {len(vsm_map.processes)}"
        )

    total = 0.0
    for i, proc in enumerate(vsm_map.processes):
        if proc.uptime_fraction == 0.0:
            raise VsmError(f"process {proc.name!r} never runs (uptime_fraction = 0)")
        total += proc.cycle_time / proc.uptime_fraction
        total += vsm_map.buffers[i] / vsm_map.customer_demand * proc.available_time
        if changeovers_per_day is not None:
            total += proc.changeover_time * changeovers_per_day[i] / vsm_map.customer_demand
    return total


def value_added_time(vsm_map: VsmMap) -> float:
    return sum(proc.value_added_time for proc in vsm_map.processes)


def va_ratio(vsm_map: VsmMap) -> float:
    """Fraction of lead time spent adding value, in [0, 1]."""
    lead = lead_time(vsm_map)
    if lead <= 0.0:
        raise VsmError("lead time is zero; ratio undefined")
    return value_added_time(vsm_map) / lead


def weighted_cycle_time(styles: Iterable[tuple[float, float]]) -> float:
    """Demand-weighted mean cycle time over (demand_qty, cycle_time) pairs."""
    pairs = list(styles)
    total_demand = sum(demand for demand, _ in pairs)
    if not pairs or total_demand <= 0:
        raise VsmError("weighted cycle time needs a positive total demand")
    return sum(demand * cycle for demand, cycle in pairs) / total_demand


def rolled_yield(vsm_map: VsmMap) -> float:
    """Fraction of units that survive every process defect-free."""
    result = 1.0
    for proc in vsm_map.processes:
        result *= 1.0 - proc.defect_rate
    return result


@dataclass(frozen=True)
class StateComparison:
    """Current-vs-future lead times plus the quality picture of each state."""

    lead_current: float
    lead_future: float
    reduction: float
    reduction_pct: float  # fraction of the current lead time
    rolled_yield_current: float
    rolled_yield_future: float


def compare_states(current: VsmMap, future: VsmMap) -> StateComparison:
    """Lead-time reduction from current to future, as minutes and a fraction."""
    lead_current = lead_time(current)
    lead_future = lead_time(future)
    reduction = lead_current - lead_future
    return StateComparison(
        lead_current=lead_current,
        lead_future=lead_future,
        reduction=reduction,
        reduction_pct=reduction / lead_current,
        rolled_yield_current=rolled_yield(current),
        rolled_yield_future=rolled_yield(future),
    )
