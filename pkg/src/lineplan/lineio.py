"""JSON line documents and the fixed-layout capacity table.

Document format: a single JSON object with an explicit schema_version,
the production line fields (snake_case, exactly as the dataclasses name
them), and optional value-stream and balancing-policy sections. Parsing
either returns a fully validated document or raises DocumentError
carrying every located problem; serialize then parse is the identity on
valid documents.

Table rendering mirrors the capacity worksheet layout: columns (a)-(h),
right-aligned numerics, a "(Bottleneck)" marker on the limiting row, and
FG output footers. Output is deterministic byte-for-byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

from lineplan.balance import BalancePolicy, StationActions, validate_policy
from lineplan.capacity import (
    CapacityReport,
    StationCapacity,
    analyze_capacity,
    fg_machinery_throughput,
)
from lineplan.model import (
    DEFAULT_AVAILABLE_MINUTES,
    LinePlanError,
    MachinePool,
    ProductionLine,
    StyleRouting,
    Violation,
    Workstation,
    validate_line,
)
from lineplan.vsm import VsmMap, VsmProcess, validate_map

SCHEMA_VERSION = 1


class DocumentError(LinePlanError):
    """Parse or validation failure; problems carry field locations."""

    def __init__(self, problems: list[Violation]):
        self.problems = problems
        super().__init__("; ".join(str(p) for p in problems))


@dataclass(frozen=True)
class LineDocument:
    """A production line plus optional VSM data and balancing policy."""

    schema_version: int
    line: ProductionLine
    vsm: VsmMap | None = None
    balance_policy: BalancePolicy | None = None


def line_document(
    line: ProductionLine,
    vsm: VsmMap | None = None,
    balance_policy: BalancePolicy | None = None,
) -> LineDocument:
    return LineDocument(
        schema_version=SCHEMA_VERSION, line=line, vsm=vsm, balance_policy=balance_policy
    )


# --- reading -----------------------------------------------------------------


class _Problems:
    """Collects located violations while a document is picked apart."""

    def __init__(self):
        self.items: list[Violation] = []

    def add(self, where: str, message: str) -> None:
        self.items.append(Violation(where, message))

    def raise_if_any(self) -> None:
        if self.items:
            raise DocumentError(self.items)


def _field(obj: dict, key: str, path: str, problems: _Problems, default=None, required=True):
    if key not in obj:
        if required:
            problems.add(path, f"missing field {key!r}")
        return default
    return obj[key]


def _number(value, path: str, problems: _Problems, default=0.0) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        problems.add(path, f"expected a number, got {type(value).__name__}")
        return default
    if not math.isfinite(float(value)):
        problems.add(path, "must be finite")
        return default
    return float(value)


def _count(value, path: str, problems: _Problems, default=0) -> int:
    number = _number(value, path, problems, default=float(default))
    if not float(number).is_integer():
        problems.add(path, f"expected a whole number, got {value}")
        return default
    return int(number)


def _text(value, path: str, problems: _Problems) -> str:
    if not isinstance(value, str):
        problems.add(path, f"expected a string, got {type(value).__name__}")
        return ""
    return value


def _flag(value, path: str, problems: _Problems) -> bool:
    if not isinstance(value, bool):
        problems.add(path, f"expected true/false, got {type(value).__name__}")
        return False
    return value


def _object(value, path: str, problems: _Problems, keys: tuple[str, ...]) -> dict | None:
    if not isinstance(value, dict):
        problems.add(path, f"expected an object, got {type(value).__name__}")
        return None
    for key in value:
        if key not in keys:
            problems.add(path, f"unknown field {key!r}")
    return value


def _array(value, path: str, problems: _Problems) -> list | None:
    if not isinstance(value, list):
        problems.add(path, f"expected an array, got {type(value).__name__}")
        return None
    return value


_POOL_KEYS = ("unit_capacity", "machine_count")
_STATION_KEYS = (
    "id",
    "name",
    "batch_qty",
    "total_batch_time",
    "cycle_time",
    "labor_resources",
    "machine_pool",
)
_STYLE_KEYS = ("style_id", "sam_per_station", "demand_qty", "unit_profit")
_PROCESS_KEYS = (
    "name",
    "cycle_time",
    "value_added_time",
    "changeover_time",
    "operators",
    "available_time",
    "uptime_fraction",
    "defect_rate",
)
_VSM_KEYS = ("processes", "buffers", "customer_demand")
_ACTION_KEYS = ("may_add_labor", "may_add_machines", "max_labor", "max_machines")
_POLICY_KEYS = ("target_throughput", "actions", "labor_cost", "machine_cost")
_ROOT_KEYS = (
    "schema_version",
    "id",
    "workstations",
    "available_minutes",
    "styles",
    "vsm",
    "balance_policy",
)


def _read_station(data, path: str, problems: _Problems) -> Workstation | None:
    obj = _object(data, path, problems, _STATION_KEYS)
    if obj is None:
        return None
    pool = None
    pool_data = _field(obj, "machine_pool", path, problems, required=False)
    if pool_data is not None:
        pool_obj = _object(pool_data, f"{path}.machine_pool", problems, _POOL_KEYS)
        if pool_obj is not None:
            pool = MachinePool(
                unit_capacity=_number(
                    _field(pool_obj, "unit_capacity", f"{path}.machine_pool", problems),
                    f"{path}.machine_pool.unit_capacity",
                    problems,
                ),
                machine_count=_count(
                    _field(pool_obj, "machine_count", f"{path}.machine_pool", problems),
                    f"{path}.machine_pool.machine_count",
                    problems,
                ),
            )
    return Workstation(
        id=_text(_field(obj, "id", path, problems), f"{path}.id", problems),
        name=_text(_field(obj, "name", path, problems), f"{path}.name", problems),
        batch_qty=_count(
            _field(obj, "batch_qty", path, problems, default=1),
            f"{path}.batch_qty",
            problems,
            default=1,
        ),
        total_batch_time=_number(
            _field(obj, "total_batch_time", path, problems, default=0.0),
            f"{path}.total_batch_time",
            problems,
        ),
        cycle_time=_number(
            _field(obj, "cycle_time", path, problems, default=1.0),
            f"{path}.cycle_time",
            problems,
            default=1.0,
        ),
        labor_resources=_count(
            _field(obj, "labor_resources", path, problems, default=0),
            f"{path}.labor_resources",
            problems,
        ),
        machine_pool=pool,
    )


def _read_style(data, path: str, problems: _Problems) -> StyleRouting | None:
    obj = _object(data, path, problems, _STYLE_KEYS)
    if obj is None:
        return None
    sam = {}
    sam_data = _field(obj, "sam_per_station", path, problems, default={})
    if isinstance(sam_data, dict):
        for station_id, minutes in sam_data.items():
            sam[station_id] = _number(
                minutes, f"{path}.sam_per_station[{station_id!r}]", problems
            )
    else:
        problems.add(f"{path}.sam_per_station", "expected an object")
    demand = _field(obj, "demand_qty", path, problems, required=False)
    profit = _field(obj, "unit_profit", path, problems, default=1.0, required=False)
    return StyleRouting(
        style_id=_text(_field(obj, "style_id", path, problems), f"{path}.style_id", problems),
        sam_per_station=sam,
        demand_qty=None if demand is None else _count(demand, f"{path}.demand_qty", problems),
        unit_profit=_number(profit, f"{path}.unit_profit", problems, default=1.0),
    )


def _read_vsm(data, path: str, problems: _Problems) -> VsmMap | None:
    obj = _object(data, path, problems, _VSM_KEYS)
    if obj is None:
        return None
    processes = []
    for i, proc_data in enumerate(_array(_field(obj, "processes", path, problems, default=[]), f"{path}.processes", problems) or []):
        proc_path = f"{path}.processes[{i}]"
        proc_obj = _object(proc_data, proc_path, problems, _PROCESS_KEYS)
        if proc_obj is None:
            continue
        processes.append(
            VsmProcess(
                name=_text(_field(proc_obj, "name", proc_path, problems), f"{proc_path}.name", problems),
                cycle_time=_number(
                    _field(proc_obj, "cycle_time", proc_path, problems),
                    f"{proc_path}.cycle_time",
                    problems,
                ),
                value_added_time=_number(
                    _field(proc_obj, "value_added_time", proc_path, problems),
                    f"{proc_path}.value_added_time",
                    problems,
                ),
                changeover_time=_number(
                    _field(proc_obj, "changeover_time", proc_path, problems, default=0.0, required=False),
                    f"{proc_path}.changeover_time",
                    problems,
                ),
                operators=_count(
                    _field(proc_obj, "operators", proc_path, problems, default=1, required=False),
                    f"{proc_path}.operators",
                    problems,
                    default=1,
                ),
                available_time=_number(
                    _field(proc_obj, "available_time", proc_path, problems, default=600.0, required=False),
                    f"{proc_path}.available_time",
                    problems,
                    default=600.0,
                ),
                uptime_fraction=_number(
                    _field(proc_obj, "uptime_fraction", proc_path, problems, default=1.0, required=False),
                    f"{proc_path}.uptime_fraction",
                    problems,
                    default=1.0,
                ),
                defect_rate=_number(
                    _field(proc_obj, "defect_rate", proc_path, problems, default=0.0, required=False),
                    f"{proc_path}.defect_rate",
                    problems,
                ),
            )
        )
    buffers = tuple(
        _number(b, f"{path}.buffers[{i}]", problems)
        for i, b in enumerate(_array(_field(obj, "buffers", path, problems, default=[]), f"{path}.buffers", problems) or [])
    )
    vsm_map = VsmMap(
        processes=tuple(processes),
        buffers=buffers,
        customer_demand=_number(
            _field(obj, "customer_demand", path, problems, default=1.0),
            f"{path}.customer_demand",
            problems,
            default=1.0,
        ),
    )
    for violation in validate_map(vsm_map):
        problems.add(f"{path}: {violation.where}", violation.message)
    return vsm_map


def _read_policy(data, path: str, problems: _Problems) -> BalancePolicy | None:
    obj = _object(data, path, problems, _POLICY_KEYS)
    if obj is None:
        return None
    actions = {}
    actions_data = _field(obj, "actions", path, problems, default={}, required=False) or {}
    if isinstance(actions_data, dict):
        for station_id, action_data in actions_data.items():
            action_path = f"{path}.actions[{station_id!r}]"
            action_obj = _object(action_data, action_path, problems, _ACTION_KEYS)
            if action_obj is None:
                continue
            actions[station_id] = StationActions(
                may_add_labor=_flag(
                    _field(action_obj, "may_add_labor", action_path, problems),
                    f"{action_path}.may_add_labor",
                    problems,
                ),
                may_add_machines=_flag(
                    _field(action_obj, "may_add_machines", action_path, problems),
                    f"{action_path}.may_add_machines",
                    problems,
                ),
                max_labor=_count(
                    _field(action_obj, "max_labor", action_path, problems, default=0),
                    f"{action_path}.max_labor",
                    problems,
                ),
                max_machines=_count(
                    _field(action_obj, "max_machines", action_path, problems, default=0),
                    f"{action_path}.max_machines",
                    problems,
                ),
            )
    else:
        problems.add(f"{path}.actions", "expected an object")
    return BalancePolicy(
        target_throughput=_number(
            _field(obj, "target_throughput", path, problems, default=1.0),
            f"{path}.target_throughput",
            problems,
            default=1.0,
        ),
        actions=actions,
        labor_cost=_number(
            _field(obj, "labor_cost", path, problems, default=1.0, required=False),
            f"{path}.labor_cost",
            problems,
            default=1.0,
        ),
        machine_cost=_number(
            _field(obj, "machine_cost", path, problems, default=1.0, required=False),
            f"{path}.machine_cost",
            problems,
            default=1.0,
        ),
    )


def document_from_dict(data: Any) -> LineDocument:
    """Build and fully validate a LineDocument from parsed JSON."""
    problems = _Problems()
    obj = _object(data, "document", problems, _ROOT_KEYS)
    if obj is None:
        problems.raise_if_any()

    raw_version = _field(obj, "schema_version", "document", problems)
    if raw_version is not None:
        version = _count(
            raw_version, "document.schema_version", problems, default=SCHEMA_VERSION
        )
        if version != SCHEMA_VERSION:
            # An unrecognized layout: field-level errors below would be noise.
            problems.add("document.schema_version", f"unknown schema version {version}")
            problems.raise_if_any()

    stations = []
    for i, station_data in enumerate(
        _array(_field(obj, "workstations", "document", problems, default=[]), "document.workstations", problems) or []
    ):
        station = _read_station(station_data, f"workstations[{i}]", problems)
        if station is not None:
            stations.append(station)

    styles = []
    for i, style_data in enumerate(
        _array(_field(obj, "styles", "document", problems, default=[], required=False) or [], "document.styles", problems) or []
    ):
        style = _read_style(style_data, f"styles[{i}]", problems)
        if style is not None:
            styles.append(style)

    line = ProductionLine(
        id=_text(_field(obj, "id", "document", problems), "document.id", problems),
        workstations=tuple(stations),
        available_minutes=_number(
            _field(obj, "available_minutes", "document", problems, default=DEFAULT_AVAILABLE_MINUTES, required=False),
            "document.available_minutes",
            problems,
            default=DEFAULT_AVAILABLE_MINUTES,
        ),
        styles=tuple(styles),
    )

    vsm = None
    vsm_data = _field(obj, "vsm", "document", problems, required=False)
    if vsm_data is not None:
        vsm = _read_vsm(vsm_data, "vsm", problems)

    policy = None
    policy_data = _field(obj, "balance_policy", "document", problems, required=False)
    if policy_data is not None:
        policy = _read_policy(policy_data, "balance_policy", problems)

    # Structural problems make line-level validation noise; stop here first.
    problems.raise_if_any()

    for violation in validate_line(line):
        problems.add(violation.where, violation.message)
    if policy is not None:
        for problem in validate_policy(line, policy):
            problems.add("balance_policy", problem)
    problems.raise_if_any()

    return LineDocument(
        schema_version=SCHEMA_VERSION, line=line, vsm=vsm, balance_policy=policy
    )


def parse_line_document(text: str) -> LineDocument:
    """Parse JSON text into a validated document or raise DocumentError."""
    if not text.strip():
        raise DocumentError([Violation("document", "empty document")])
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            [Violation(f"line {exc.lineno}, column {exc.colno}", exc.msg)]
        ) from None
    return document_from_dict(data)


# --- writing -----------------------------------------------------------------


def _station_to_dict(station: Workstation) -> dict:
    pool = None
    if station.machine_pool is not None:
        pool = {
            "unit_capacity": float(station.machine_pool.unit_capacity),
            "machine_count": int(station.machine_pool.machine_count),
        }
    return {
        "id": station.id,
        "name": station.name,
        "batch_qty": int(station.batch_qty),
        "total_batch_time": float(station.total_batch_time),
        "cycle_time": float(station.cycle_time),
        "labor_resources": int(station.labor_resources),
        "machine_pool": pool,
    }


def _style_to_dict(style: StyleRouting) -> dict:
    return {
        "style_id": style.style_id,
        "sam_per_station": {k: float(v) for k, v in style.sam_per_station.items()},
        "demand_qty": None if style.demand_qty is None else int(style.demand_qty),
        "unit_profit": float(style.unit_profit),
    }


def _vsm_to_dict(vsm: VsmMap) -> dict:
    return {
        "processes": [
            {
                "name": proc.name,
                "cycle_time": float(proc.cycle_time),
                "value_added_time": float(proc.value_added_time),
                "changeover_time": float(proc.changeover_time),
                "operators": int(proc.operators),
                "available_time": float(proc.available_time),
                "uptime_fraction": float(proc.uptime_fraction),
                "defect_rate": float(proc.defect_rate),
            }
            for proc in vsm.processes
        ],
        "buffers": [float(b) for b in vsm.buffers],
        "customer_demand": float(vsm.customer_demand),
    }


def _policy_to_dict(policy: BalancePolicy) -> dict:
    return {
        "target_throughput": float(policy.target_throughput),
        "actions": {
            station_id: {
                "may_add_labor": actions.may_add_labor,
                "may_add_machines": actions.may_add_machines,
                "max_labor": int(actions.max_labor),
                "max_machines": int(actions.max_machines),
            }
            for station_id, actions in sorted(policy.actions.items())
        },
        "labor_cost": float(policy.labor_cost),
        "machine_cost": float(policy.machine_cost),
    }


def document_to_dict(doc: LineDocument) -> dict:
    return {
        "schema_version": int(doc.schema_version),
        "id": doc.line.id,
        "available_minutes": float(doc.line.available_minutes),
        "workstations": [_station_to_dict(ws) for ws in doc.line.workstations],
        "styles": [_style_to_dict(style) for style in doc.line.styles],
        "vsm": None if doc.vsm is None else _vsm_to_dict(doc.vsm),
        "balance_policy": (
            None if doc.balance_policy is None else _policy_to_dict(doc.balance_policy)
        ),
    }


def serialize_line_document(doc: LineDocument) -> str:
    return json.dumps(document_to_dict(doc), indent=2, ensure_ascii=False) + "\n"


# --- capacity report JSON ----------------------------------------------------


def report_to_dict(report: CapacityReport) -> dict:
    return {
        "rows": [
            {
                "station_id": row.station_id,
                "labor_daily_output": int(row.labor_daily_output),
                "machine_daily_capacity": (
                    None
                    if row.machine_daily_capacity is None
                    else float(row.machine_daily_capacity)
                ),
                "effective_capacity": float(row.effective_capacity),
                "is_bottleneck": row.is_bottleneck,
                "constraint_kind": row.constraint_kind,
            }
            for row in report.rows
        ],
        "fg_throughput": float(report.fg_throughput),
    }


def report_from_dict(data: Any) -> CapacityReport:
    problems = _Problems()
    obj = _object(data, "report", problems, ("rows", "fg_throughput"))
    problems.raise_if_any()
    rows = []
    for i, row_data in enumerate(
        _array(_field(obj, "rows", "report", problems, default=[]), "report.rows", problems) or []
    ):
        path = f"report.rows[{i}]"
        row_obj = _object(
            row_data,
            path,
            problems,
            (
                "station_id",
                "labor_daily_output",
                "machine_daily_capacity",
                "effective_capacity",
                "is_bottleneck",
                "constraint_kind",
            ),
        )
        if row_obj is None:
            continue
        machine_cap = _field(row_obj, "machine_daily_capacity", path, problems)
        rows.append(
            StationCapacity(
                station_id=_text(_field(row_obj, "station_id", path, problems), f"{path}.station_id", problems),
                labor_daily_output=_count(
                    _field(row_obj, "labor_daily_output", path, problems, default=0),
                    f"{path}.labor_daily_output",
                    problems,
                ),
                machine_daily_capacity=(
                    None if machine_cap is None else _number(machine_cap, f"{path}.machine_daily_capacity", problems)
                ),
                effective_capacity=_number(
                    _field(row_obj, "effective_capacity", path, problems, default=0.0),
                    f"{path}.effective_capacity",
                    problems,
                ),
                is_bottleneck=_flag(
                    _field(row_obj, "is_bottleneck", path, problems),
                    f"{path}.is_bottleneck",
                    problems,
                ),
                constraint_kind=_text(
                    _field(row_obj, "constraint_kind", path, problems),
                    f"{path}.constraint_kind",
                    problems,
                ),
            )
        )
    fg = _number(
        _field(obj, "fg_throughput", "report", problems, default=0.0),
        "report.fg_throughput",
        problems,
    )
    problems.raise_if_any()
    return CapacityReport(rows=tuple(rows), fg_throughput=fg)


# --- table rendering ---------------------------------------------------------

_HEADERS = (
    "Work Station",
    "Process",
    "(a) Batch Qty",
    "(b) Total Time",
    "(c) Cycle Time",
    "(d) Operators",
    "(e) Daily Output",
    "(f) Machine Daily Capacity",
    "(g) No. of Machines",
    "(h) Total Machine Daily Capacity",
)


def _cell(value: float | int | None) -> str:
    if value is None:
        return ""
    number = float(value)
    if number.is_integer():
        return str(int(number))
    return f"{number:g}"


def render_capacity_table(report: CapacityReport, line: ProductionLine) -> str:
    """Fixed-column worksheet text for a report; stable byte-for-byte."""
    body = []
    for position, row in enumerate(report.rows, start=1):
        station = line.station(row.station_id)
        pool = station.machine_pool
        total_machine = "N/A" if pool is None else _cell(row.machine_daily_capacity)
        if row.is_bottleneck:
            total_machine += " (Bottleneck)"
        body.append(
            (
                str(position),
                station.name,
                _cell(station.batch_qty),
                _cell(station.total_batch_time),
                _cell(station.cycle_time),
                _cell(station.labor_resources),
                _cell(row.labor_daily_output),
                "" if pool is None else _cell(pool.unit_capacity),
                "" if pool is None else _cell(pool.machine_count),
                total_machine,
            )
        )

    widths = [
        max(len(_HEADERS[col]), max(len(row[col]) for row in body))
        for col in range(len(_HEADERS))
    ]

    def fmt(cells: tuple[str, ...]) -> str:
        # Station number and process name read left-aligned; numbers right.
        parts = []
        for col, cell in enumerate(cells):
            if col in (0, 1):
                parts.append(cell.ljust(widths[col]))
            else:
                parts.append(cell.rjust(widths[col]))
        return "  ".join(parts).rstrip()

    lines = [fmt(_HEADERS), fmt(tuple("-" * w for w in widths))]
    lines.extend(fmt(row) for row in body)
    lines.append(f"FG Output (pcs): {_cell(report.fg_throughput)}")
    machinery = fg_machinery_throughput(report)
    if machinery is not None:
        lines.append(f"FG Machinery Output (pcs): {_cell(machinery)}")
    return "\n".join(lines) + "\n"


def capacity_table_for(line: ProductionLine) -> str:
    return render_capacity_table(analyze_capacity(line), line)
