"""HTTP planning service: scenarios over a base line, with optimistic locking.

Every scenario is a stack of deltas over the base document; the derived
line is always base + stack, and a revision counter increments on each
mutation. Writers send the revision they based their edit on and get 409
when it is stale. The service itself does no capacity arithmetic beyond
delegating to the engines, so any client sees exactly the library's
numbers.
"""

from __future__ import annotations

import dataclasses
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from lineplan.balance import BalanceError, balance_line, default_policy
from lineplan.capacity import analyze_capacity, build_crp_lp
from lineplan.lineio import LineDocument, document_to_dict, report_to_dict
from lineplan.model import (
    DeltaError,
    Edit,
    LineValidationError,
    ProductionLine,
    ScenarioDelta,
    apply_delta,
)
from lineplan.simplex import solve
from lineplan.vsm import lead_time, va_ratio, value_added_time


class ConflictError(Exception):
    """A mutation was based on a stale revision."""

    def __init__(self, expected: int, actual: int):
        self.actual = actual
        super().__init__(f"expected revision {expected}, scenario is at {actual}")


class RejectedDeltaError(Exception):
    """The delta cannot be applied; messages explain why."""

    def __init__(self, messages: list[str]):
        self.messages = messages
        super().__init__("; ".join(messages))


@dataclass
class _Scenario:
    deltas: list[ScenarioDelta] = field(default_factory=list)
    derived: ProductionLine | None = None
    revision: int = 0


class ScenarioStore:
    """Base document plus named what-if scenarios, mutated under one lock."""

    def __init__(self, base: LineDocument, snapshot_path: str | None = None):
        self.base = base
        self._snapshot_path = snapshot_path
        self._scenarios: dict[str, _Scenario] = {}
        self._counter = 0
        self._lock = threading.Lock()

    def create_scenario(self) -> tuple[str, int]:
        with self._lock:
            self._counter += 1
            scenario_id = f"s-{self._counter}"
            self._scenarios[scenario_id] = _Scenario(derived=self.base.line)
            self._write_snapshot()
            return scenario_id, 0

    def _get(self, scenario_id: str) -> _Scenario:
        scenario = self._scenarios.get(scenario_id)
        if scenario is None:
            raise KeyError(scenario_id)
        return scenario

    def snapshot(self, scenario_id: str) -> tuple[ProductionLine, int]:
        with self._lock:
            scenario = self._get(scenario_id)
            return scenario.derived, scenario.revision

    def push_delta(
        self, scenario_id: str, delta: ScenarioDelta, expected_revision: int
    ) -> int:
        with self._lock:
            scenario = self._get(scenario_id)
            if expected_revision != scenario.revision:
                raise ConflictError(expected_revision, scenario.revision)
            try:
                derived = apply_delta(scenario.derived, delta)
            except DeltaError as exc:
                raise RejectedDeltaError([str(exc)]) from None
            except LineValidationError as exc:
                raise RejectedDeltaError(
                    [str(v) for v in exc.violations]
                ) from None
            scenario.deltas.append(delta)
            scenario.derived = derived
            scenario.revision += 1
            self._write_snapshot()
            return scenario.revision

    def undo(self, scenario_id: str, expected_revision: int | None = None) -> int:
        with self._lock:
            scenario = self._get(scenario_id)
            if expected_revision is not None and expected_revision != scenario.revision:
                raise ConflictError(expected_revision, scenario.revision)
            if not scenario.deltas:
                raise RejectedDeltaError(["nothing to undo"])
            scenario.deltas.pop()
            derived = self.base.line
            for delta in scenario.deltas:
                derived = apply_delta(derived, delta)
            scenario.derived = derived
            scenario.revision += 1
            self._write_snapshot()
            return scenario.revision

    def _write_snapshot(self) -> None:
        # Crash breadcrumb only; the store never reads it back.
        if self._snapshot_path is None:
            return
        state = {
            "base": document_to_dict(self.base),
            "scenarios": {
                scenario_id: {
                    "revision": scenario.revision,
                    "deltas": [
                        [
                            {"kind": e.kind, "station_id": e.station_id, "value": e.value}
                            for e in delta.edits
                        ]
                        for delta in scenario.deltas
                    ],
                }
                for scenario_id, scenario in self._scenarios.items()
            },
        }
        Path(self._snapshot_path).write_text(
            json.dumps(state, indent=2) + "\n", encoding="utf-8"
        )


class EditIn(BaseModel):
    kind: str
    station_id: str
    value: float


class DeltaIn(BaseModel):
    expected_revision: int
    edits: list[EditIn]


class UndoIn(BaseModel):
    expected_revision: int | None = None


class BalanceIn(BaseModel):
    target: float


def _document_with_line(base: LineDocument, line: ProductionLine) -> dict:
    return document_to_dict(
        LineDocument(
            schema_version=base.schema_version,
            line=line,
            vsm=base.vsm,
            balance_policy=base.balance_policy,
        )
    )


def create_app(
    base: LineDocument,
    snapshot_path: str | None = None,
    allow_dev_origin: bool = False,
    ui_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="lineplan service")
    store = ScenarioStore(base, snapshot_path=snapshot_path)
    app.state.store = store

    if allow_dev_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def scenario_or_404(scenario_id: str) -> tuple[ProductionLine, int]:
        try:
            return store.snapshot(scenario_id)
        except KeyError:
            raise HTTPException(404, f"unknown scenario {scenario_id!r}") from None

    @app.get("/api/line")
    def get_line():
        return document_to_dict(store.base)

    @app.post("/api/scenarios", status_code=201)
    def create_scenario():
        scenario_id, revision = store.create_scenario()
        return {"scenario_id": scenario_id, "revision": revision}

    @app.get("/api/scenarios/{scenario_id}")
    def get_scenario(scenario_id: str):
        line, revision = scenario_or_404(scenario_id)
        return {
            "scenario_id": scenario_id,
            "revision": revision,
            "line": _document_with_line(store.base, line),
        }

    @app.post("/api/scenarios/{scenario_id}/delta")
    def post_delta(scenario_id: str, body: DeltaIn):
        scenario_or_404(scenario_id)
        delta = ScenarioDelta(
            tuple(Edit(e.kind, e.station_id, e.value) for e in body.edits)
        )
        try:
            revision = store.push_delta(scenario_id, delta, body.expected_revision)
        except ConflictError as exc:
            raise HTTPException(409, str(exc)) from None
        except RejectedDeltaError as exc:
            raise HTTPException(422, exc.messages) from None
        return {"scenario_id": scenario_id, "revision": revision}

    @app.post("/api/scenarios/{scenario_id}/undo")
    def post_undo(scenario_id: str, body: UndoIn | None = None):
        scenario_or_404(scenario_id)
        expected = body.expected_revision if body is not None else None
        try:
            revision = store.undo(scenario_id, expected)
        except ConflictError as exc:
            raise HTTPException(409, str(exc)) from None
        except RejectedDeltaError as exc:
            raise HTTPException(422, exc.messages) from None
        return {"scenario_id": scenario_id, "revision": revision}

    @app.get("/api/scenarios/{scenario_id}/capacity")
    def get_capacity(scenario_id: str):
        line, revision = scenario_or_404(scenario_id)
        report = analyze_capacity(line)
        return {"revision": revision, **report_to_dict(report)}

    @app.get("/api/scenarios/{scenario_id}/vsm")
    def get_vsm(scenario_id: str):
        _, revision = scenario_or_404(scenario_id)
        if store.base.vsm is None:
            raise HTTPException(404, "scenario has no vsm data")
        vsm_map = store.base.vsm
        return {
            "revision": revision,
            "lead_time": lead_time(vsm_map),
            "value_added_time": value_added_time(vsm_map),
            "va_ratio": va_ratio(vsm_map),
        }

    @app.post("/api/scenarios/{scenario_id}/balance")
    def post_balance(scenario_id: str, body: BalanceIn):
        line, revision = scenario_or_404(scenario_id)
        if body.target <= 0:
            raise HTTPException(422, ["target must be > 0"])
        policy = (
            default_policy(line, body.target)
            if store.base.balance_policy is None
            else dataclasses.replace(
                store.base.balance_policy, target_throughput=body.target
            )
        )
        try:
            plan = balance_line(line, policy)
        except BalanceError as exc:
            raise HTTPException(422, [str(exc)]) from None
        final_report = analyze_capacity(plan.final_line)
        combined = ScenarioDelta()
        for step in plan.steps:
            combined = combined.concat(step.delta)
        return {
            "revision": revision,
            "achieved": plan.achieved,
            "final_fg_throughput": final_report.fg_throughput,
            "blocked_at": None if plan.achieved else final_report.bottleneck().station_id,
            "steps": [
                {
                    "iteration": step.iteration,
                    "station_id": step.station_id,
                    "fg_throughput": step.fg_throughput,
                    "edits": [
                        {"kind": e.kind, "station_id": e.station_id, "value": e.value}
                        for e in step.delta.edits
                    ],
                }
                for step in plan.steps
            ],
            "combined_edits": [
                {"kind": e.kind, "station_id": e.station_id, "value": e.value}
                for e in combined.edits
            ],
        }

    @app.get("/api/scenarios/{scenario_id}/lp")
    def get_lp(scenario_id: str):
        line, revision = scenario_or_404(scenario_id)
        problem = build_crp_lp(line)
        solution = solve(problem)
        return {
            "revision": revision,
            "problem": {
                "sense": problem.sense,
                "objective": list(problem.objective),
                "constraint_matrix": [list(row) for row in problem.constraint_matrix],
                "rhs": list(problem.rhs),
                "variable_names": [
                    problem.variable_label(j) for j in range(problem.num_variables())
                ],
                "constraint_names": [
                    problem.constraint_label(i) for i in range(problem.num_constraints())
                ],
            },
            "solution": {
                "status": solution.status,
                "x": list(solution.x),
                "z": solution.z,
                "active_constraints": list(solution.active_constraints),
                "binding": [
                    problem.constraint_label(i) for i in solution.active_constraints
                ],
            },
        }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
