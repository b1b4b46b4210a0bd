"""Iterative line balancing: grow the bottleneck until the target is met.

Each round finds the bottleneck, applies one increment there, and
re-analyzes. Labor-bound stations gain one team; machine-bound (or tied)
stations gain a team and a machine set together, since a machine without
its crew adds nothing. The loop stops when the target is reached or the
bottleneck has no permitted increment left. Every step carries the exact
delta applied, so replaying the plan reproduces the final line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from lineplan.capacity import (
    CONSTRAINT_LABOR,
    CapacityReport,
    analyze_capacity,
    build_crp_lp,
)
from lineplan.model import (
    ADJUST_LABOR,
    ADJUST_MACHINES,
    Edit,
    LinePlanError,
    ProductionLine,
    ScenarioDelta,
    StyleRouting,
    apply_delta,
    require_valid,
)
from lineplan.simplex import LpSolution, solve


class BalanceError(LinePlanError):
    """Raised when a balancing policy is inconsistent with the line."""


@dataclass(frozen=True)
class StationActions:
    """What balancing may do at one station, and how far it may go."""

    may_add_labor: bool = True
    may_add_machines: bool = True
    max_labor: int = 0
    max_machines: int = 0


@dataclass(frozen=True)
class BalancePolicy:
    """Throughput target plus per-station increment permissions and costs."""

    target_throughput: float
    actions: Mapping[str, StationActions] = field(default_factory=dict)
    labor_cost: float = 1.0
    machine_cost: float = 1.0


@dataclass(frozen=True)
class BalanceStep:
    """One applied increment: where, what, and the throughput afterwards."""

    iteration: int
    station_id: str
    delta: ScenarioDelta
    fg_throughput: float


@dataclass(frozen=True)
class BalancePlan:
    steps: tuple[BalanceStep, ...]
    final_line: ProductionLine
    achieved: bool


def default_policy(
    line: ProductionLine,
    target_throughput: float,
    extra_labor: int = 20,
    extra_machines: int = 20,
) -> BalancePolicy:
    """Permissive policy: every station may grow by the given headroom."""
    actions = {}
    for station in line.workstations:
        has_pool = station.machine_pool is not None
        actions[station.id] = StationActions(
            may_add_labor=True,
            may_add_machines=has_pool,
            max_labor=station.labor_resources + extra_labor,
            max_machines=(
                station.machine_pool.machine_count + extra_machines if has_pool else 0
            ),
        )
    return BalancePolicy(target_throughput=target_throughput, actions=actions)


def validate_policy(line: ProductionLine, policy: BalancePolicy) -> list[str]:
    """Consistency problems between a policy and the line; empty means ok."""
    problems = []
    if policy.target_throughput <= 0:
        problems.append(f"target_throughput must be > 0, got {policy.target_throughput}")
    if policy.labor_cost < 0 or policy.machine_cost < 0:
        problems.append("cost weights must be >= 0")
    station_ids = set(line.station_ids())
    for station_id, actions in policy.actions.items():
        if station_id not in station_ids:
            problems.append(f"policy names unknown station {station_id!r}")
            continue
        station = line.station(station_id)
        if actions.max_labor < station.labor_resources:
            problems.append(
                f"station {station_id!r}: max_labor {actions.max_labor} is below "
                f"the current {station.labor_resources}"
            )
        if station.machine_pool is not None:
            if actions.max_machines < station.machine_pool.machine_count:
                problems.append(
                    f"station {station_id!r}: max_machines {actions.max_machines} is "
                    f"below the current {station.machine_pool.machine_count}"
                )
        elif actions.may_add_machines:
            problems.append(
                f"station {station_id!r}: may_add_machines set but the station has "
                "no machine pool"
            )
    return problems


def _require_valid_policy(line: ProductionLine, policy: BalancePolicy) -> None:
    problems = validate_policy(line, policy)
    if problems:
        raise BalanceError("; ".join(problems))


def _bottleneck_increment(
    line: ProductionLine, report: CapacityReport, policy: BalancePolicy
) -> tuple[str, ScenarioDelta] | None:
    """The next permitted increment at the bottleneck, or None if blocked."""
    bottleneck = report.bottleneck()
    actions = policy.actions.get(bottleneck.station_id)
    if actions is None:
        return None
    station = line.station(bottleneck.station_id)

    labor_ok = (
        actions.may_add_labor and station.labor_resources + 1 <= actions.max_labor
    )
    if bottleneck.constraint_kind == CONSTRAINT_LABOR:
        if not labor_ok:
            return None
        edits = (Edit(ADJUST_LABOR, station.id, 1),)
    else:
        # Machine-bound or tied: a lone machine is idle without its team,
        # so labor and machine advance together or not at all.
        pool = station.machine_pool
        machine_ok = (
            pool is not None
            and actions.may_add_machines
            and pool.machine_count + 1 <= actions.max_machines
        )
        if not (labor_ok and machine_ok):
            return None
        edits = (
            Edit(ADJUST_LABOR, station.id, 1),
            Edit(ADJUST_MACHINES, station.id, 1),
        )
    return station.id, ScenarioDelta(edits)


def balance_line(line: ProductionLine, policy: BalancePolicy) -> BalancePlan:
    """Greedy balancing loop; terminates because policy maxima cap every step."""
    require_valid(line)
    _require_valid_policy(line, policy)

    steps = []
    current = line
    report = analyze_capacity(current)
    while report.fg_throughput < policy.target_throughput:
        increment = _bottleneck_increment(current, report, policy)
        if increment is None:
            return BalancePlan(steps=tuple(steps), final_line=current, achieved=False)
        station_id, delta = increment
        current = apply_delta(current, delta)
        report = analyze_capacity(current)
        steps.append(
            BalanceStep(
                iteration=len(steps),
                station_id=station_id,
                delta=delta,
                fg_throughput=report.fg_throughput,
            )
        )
    return BalancePlan(steps=tuple(steps), final_line=current, achieved=True)


def plan_cost(plan: BalancePlan, policy: BalancePolicy) -> float:
    """Total weighted cost of every increment in the plan."""
    total = 0.0
    for step in plan.steps:
        for edit in step.delta.edits:
            if edit.kind == ADJUST_LABOR:
                total += policy.labor_cost * abs(edit.value)
            elif edit.kind == ADJUST_MACHINES:
                total += policy.machine_cost * abs(edit.value)
    return total


@dataclass(frozen=True)
class IterationOutcome:
    """One planning round: the numbers plus either convergence or a proposal."""

    capacity_report: CapacityReport
    lp_solution: LpSolution
    converged: bool
    recommended_delta: ScenarioDelta | None
    recommended_station: str | None


def methodology_iteration(
    line: ProductionLine,
    policy: BalancePolicy,
    styles: Iterable[StyleRouting] | None = None,
) -> IterationOutcome:
    """Analyze, solve the throughput LP, and propose (not apply) the next move.

    The proposal is left to the caller so a human can accept, amend, or
    discard it before anything changes.
    """
    require_valid(line)
    _require_valid_policy(line, policy)

    report = analyze_capacity(line)
    solution = solve(build_crp_lp(line, styles))
    if report.fg_throughput >= policy.target_throughput:
        return IterationOutcome(
            capacity_report=report,
            lp_solution=solution,
            converged=True,
            recommended_delta=None,
            recommended_station=None,
        )
    increment = _bottleneck_increment(line, report, policy)
    if increment is None:
        return IterationOutcome(
            capacity_report=report,
            lp_solution=solution,
            converged=False,
            recommended_delta=None,
            recommended_station=None,
        )
    station_id, delta = increment
    return IterationOutcome(
        capacity_report=report,
        lp_solution=solution,
        converged=False,
        recommended_delta=delta,
        recommended_station=station_id,
    )
