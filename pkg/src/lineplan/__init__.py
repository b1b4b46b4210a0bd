"""Capacity requirement planning and line balancing toolkit.

Models a production line as an ordered sequence of workstations with labor
and machine resources, computes per-station daily capacities and the
bottleneck, solves the throughput-maximization linear program, derives
value-stream metrics, and supports an iterative balancing workflow.
"""

from lineplan.model import (
    Edit,
    MachinePool,
    ProductionLine,
    ScenarioDelta,
    StyleRouting,
    Violation,
    Workstation,
    apply_delta,
    invert_delta,
    validate_line,
)
from lineplan.capacity import (
    CapacityReport,
    StationCapacity,
    analyze_capacity,
    build_crp_lp,
    effective_capacity,
    labor_daily_output,
    machine_capacity,
)
from lineplan.simplex import LpProblem, LpSolution, enumerate_vertices, solve
from lineplan.vsm import (
    StateComparison,
    VsmMap,
    VsmProcess,
    compare_states,
    lead_time,
    va_ratio,
    weighted_cycle_time,
)
from lineplan.balance import (
    BalancePlan,
    BalancePolicy,
    BalanceStep,
    IterationOutcome,
    StationActions,
    balance_line,
    default_policy,
    methodology_iteration,
)

__version__ = "0.1.0"
