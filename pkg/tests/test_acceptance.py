"""Acceptance gate: one test per release criterion, run with pytest -v.

Each test is a self-contained pass/fail check of one shipping requirement
for the planning engine, CLI, documents, and HTTP service. The companion
browser client has its own component-test gate in frontend/.
"""

import json
import random
import subprocess
import sys
import threading
import time

import pytest

from conftest import FIXTURES, garment_line
from lineplan.balance import balance_line, default_policy
from lineplan.capacity import analyze_capacity, build_crp_lp
from lineplan.cli import main
from lineplan.lineio import (
    document_to_dict,
    line_document,
    parse_line_document,
    report_from_dict,
    serialize_line_document,
)
from lineplan.model import ADJUST_LABOR, ADJUST_MACHINES
from lineplan.simplex import (
    STATUS_INFEASIBLE,
    STATUS_OPTIMAL,
    STATUS_UNBOUNDED,
    best_feasible_vertex,
    solve,
)
from lineplan.vsm import (
    VsmMap,
    VsmProcess,
    compare_states,
    lead_time,
    va_ratio,
    value_added_time,
)
from oracles import (
    random_bounded_lp,
    random_document,
    random_infeasible_lp,
    random_unbounded_lp,
    random_vsm_map,
)

LP_TOL = 1e-6  # agreement bound for objective values

STATION_ORDER = (
    "receiving",
    "cutting",
    "picking",
    "part-sewing",
    "add-on",
    "garment-sewing",
    "packing",
    "delivery",
)


def load_fixture(name):
    return parse_line_document((FIXTURES / name).read_text(encoding="utf-8"))


def outputs_by_station(line):
    report = analyze_capacity(line)
    return {row.station_id: row.labor_daily_output for row in report.rows}


def test_criterion_01_current_state_table_exact(capsys):
    started = time.perf_counter()
    code = main(["capacity", str(FIXTURES / "figure6_current.json")])
    elapsed = time.perf_counter() - started
    table = capsys.readouterr().out
    assert code == 0
    assert elapsed < 1.0

    code = main(
        ["capacity", str(FIXTURES / "figure6_current.json"), "--format", "json"]
    )
    report = report_from_dict(json.loads(capsys.readouterr().out))
    assert code == 0

    expected = (360, 240, 300, 200, 375, 300, 600, 360)
    assert tuple(row.labor_daily_output for row in report.rows) == expected
    assert tuple(row.station_id for row in report.rows) == STATION_ORDER
    assert report.bottleneck().station_id == "part-sewing"
    assert report.fg_throughput == 200
    assert all(isinstance(row.labor_daily_output, int) for row in report.rows)
    assert "Part Sewing" in table
    assert "(Bottleneck)" in table
    assert "FG Output (pcs): 200" in table


def test_criterion_02_future_state_table_exact():
    line = load_fixture("figure6_future.json").line
    report = analyze_capacity(line)
    assert report.fg_throughput == 240
    assert report.bottleneck().station_id == "cutting"
    outputs = outputs_by_station(line)
    assert (
        outputs["part-sewing"],
        outputs["add-on"],
        outputs["garment-sewing"],
    ) == (300, 750, 600)


def test_criterion_03_lean_state_table_exact():
    line = load_fixture("figure7.json").line
    report = analyze_capacity(line)
    assert report.fg_throughput == 300
    assert report.bottleneck().station_id == "part-sewing"
    assert outputs_by_station(line)["cutting"] == 360


def test_criterion_04_balance_reproduces_lean_line(capsys):
    code = main(
        ["balance", str(FIXTURES / "figure6_future.json"), "--target", "300"]
    )
    out = capsys.readouterr().out
    assert code == 0
    step_lines = [line for line in out.splitlines() if line.startswith("step")]
    assert step_lines == ["step 1: cutting +1 team, +1 machine -> fg 300"]

    future = load_fixture("figure6_future.json").line
    plan = balance_line(future, default_policy(future, 300))
    assert plan.achieved
    assert len(plan.steps) == 1
    assert plan.steps[0].station_id == "cutting"
    assert sorted(edit.kind for edit in plan.steps[0].delta.edits) == [
        ADJUST_LABOR,
        ADJUST_MACHINES,
    ]
    lean = load_fixture("figure7.json").line
    assert plan.final_line == lean
    for got, want in zip(plan.final_line.workstations, lean.workstations):
        assert got == want


def test_criterion_05_lp_agrees_with_lean_table():
    line = load_fixture("figure7.json").line
    assert [s.style_id for s in line.styles] == ["style-a"]
    style = line.styles[0]
    assert style.unit_profit == 1.0
    assert style.sam_per_station == {
        ws.id: ws.cycle_time for ws in line.workstations
    }

    problem = build_crp_lp(line)
    solution = solve(problem)
    assert solution.status == STATUS_OPTIMAL
    assert abs(solution.z - 300.0) <= LP_TOL
    binding = {problem.constraint_label(i) for i in solution.active_constraints}
    assert "part-sewing:machine" in binding


def test_criterion_06_simplex_against_vertex_oracle():
    started = time.perf_counter()
    rng = random.Random(601)
    degenerate_seen = 0
    for i in range(1000):
        problem = random_bounded_lp(rng)
        rows = problem.constraint_matrix
        if len(set(zip(rows, problem.rhs))) < len(rows):
            degenerate_seen += 1
        solution = solve(problem)
        assert solution.status == STATUS_OPTIMAL, f"instance {i}"
        oracle = best_feasible_vertex(problem)
        assert oracle is not None, f"instance {i}"
        assert abs(solution.z - oracle.z) <= LP_TOL, f"instance {i}"
        # the reported point must really attain the reported value
        for row, limit in zip(rows, problem.rhs):
            lhs = sum(a * x for a, x in zip(row, solution.x))
            assert lhs <= limit + LP_TOL, f"instance {i}"
        assert all(x >= -LP_TOL for x in solution.x), f"instance {i}"
        direct = sum(c * x for c, x in zip(problem.objective, solution.x))
        assert abs(direct - solution.z) <= LP_TOL, f"instance {i}"
    assert degenerate_seen >= 100  # duplicated-row instances did occur

    for i in range(100):
        assert solve(random_infeasible_lp(rng)).status == STATUS_INFEASIBLE
        assert solve(random_unbounded_lp(rng)).status == STATUS_UNBOUNDED

    assert time.perf_counter() - started < 30.0


def test_criterion_07_vsm_property_suite():
    rng = random.Random(701)
    for _ in range(500):
        vsm = random_vsm_map(rng)
        lead = lead_time(vsm)
        assert lead >= value_added_time(vsm) - 1e-9
        assert 0.0 <= va_ratio(vsm) <= 1.0 + 1e-12

        i = rng.randrange(len(vsm.processes))

        fatter = VsmMap(
            processes=vsm.processes,
            buffers=tuple(
                b + 25.0 if j == i else b for j, b in enumerate(vsm.buffers)
            ),
            customer_demand=vsm.customer_demand,
        )
        assert lead_time(fatter) >= lead - 1e-9

        proc = vsm.processes[i]
        slower = VsmMap(
            processes=tuple(
                VsmProcess(
                    name=p.name,
                    cycle_time=p.cycle_time + 5.0 if j == i else p.cycle_time,
                    value_added_time=p.value_added_time,
                    changeover_time=p.changeover_time,
                    operators=p.operators,
                    available_time=p.available_time,
                    uptime_fraction=p.uptime_fraction,
                    defect_rate=p.defect_rate,
                )
                for j, p in enumerate(vsm.processes)
            ),
            buffers=vsm.buffers,
            customer_demand=vsm.customer_demand,
        )
        assert lead_time(slower) >= lead - 1e-9

        steadier = VsmMap(
            processes=tuple(
                VsmProcess(
                    name=p.name,
                    cycle_time=p.cycle_time,
                    value_added_time=p.value_added_time,
                    changeover_time=p.changeover_time,
                    operators=p.operators,
                    available_time=p.available_time,
                    uptime_fraction=min(1.0, p.uptime_fraction + 0.2)
                    if j == i
                    else p.uptime_fraction,
                    defect_rate=p.defect_rate,
                )
                for j, p in enumerate(vsm.processes)
            ),
            buffers=vsm.buffers,
            customer_demand=vsm.customer_demand,
        )
        assert lead_time(steadier) <= lead + 1e-9
        assert proc.name == vsm.processes[i].name  # perturbations copied right

    worked = VsmMap(
        processes=(
            VsmProcess(name="prep", cycle_time=5.0, value_added_time=5.0),
            VsmProcess(name="sew", cycle_time=20.0, value_added_time=20.0),
            VsmProcess(name="pack", cycle_time=10.0, value_added_time=10.0),
        ),
        buffers=(0.0, 100.0, 50.0),
        customer_demand=200.0,
    )
    assert lead_time(worked) == 485.0

    thousand = VsmMap(
        processes=(VsmProcess(name="a", cycle_time=100.0, value_added_time=100.0),),
        buffers=(150.0,),
        customer_demand=100.0,
    )
    six_hundred = VsmMap(
        processes=(VsmProcess(name="a", cycle_time=0.0, value_added_time=0.0),),
        buffers=(100.0,),
        customer_demand=100.0,
    )
    assert lead_time(thousand) == 1000.0
    assert lead_time(six_hundred) == 600.0
    result = compare_states(thousand, six_hundred)
    assert result.reduction == 400.0
    assert result.reduction_pct == pytest.approx(0.40, abs=1e-12)


def test_criterion_08_round_trip_and_determinism(tmp_path):
    for name in (
        "figure6_current.json",
        "figure6_future.json",
        "figure7.json",
        "vsm_current.json",
        "vsm_future.json",
    ):
        text = (FIXTURES / name).read_text(encoding="utf-8")
        assert serialize_line_document(parse_line_document(text)) == text

    rng = random.Random(801)
    for _ in range(200):
        doc = random_document(rng)
        text = serialize_line_document(doc)
        assert parse_line_document(text) == doc
        assert serialize_line_document(parse_line_document(text)) == text

    # separate interpreter runs with different hash seeds, identical bytes
    runs = []
    for seed in ("0", "1"):
        result = subprocess.run(
            [
                sys.executable,
                "-m",
                "lineplan.cli",
                "capacity",
                str(FIXTURES / "figure6_current.json"),
                "--format",
                "table",
            ],
            capture_output=True,
            text=True,
            timeout=60,
            env={"PYTHONHASHSEED": seed, "PATH": "/usr/bin:/bin:/usr/local/bin"},
        )
        assert result.returncode == 0
        runs.append(result.stdout)
    assert runs[0] == runs[1]
    assert "FG Output (pcs): 200" in runs[0]


def test_criterion_09_service_contract_over_http():
    import httpx
    import uvicorn

    from lineplan.service import create_app

    base = load_fixture("figure6_future.json")
    app = create_app(base)
    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    try:
        deadline = time.monotonic() + 10
        while not server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("server did not start")
            time.sleep(0.01)
        port = server.servers[0].sockets[0].getsockname()[1]
        with httpx.Client(base_url=f"http://127.0.0.1:{port}", timeout=10) as client:
            created = client.post("/api/scenarios")
            assert created.status_code == 201
            sid = created.json()["scenario_id"]

            before = client.get(f"/api/scenarios/{sid}/capacity").json()
            assert before["fg_throughput"] == 240
            bottleneck = [r for r in before["rows"] if r["is_bottleneck"]]
            assert [r["station_id"] for r in bottleneck] == ["cutting"]

            step = [
                {"kind": "adjust_labor", "station_id": "cutting", "value": 1},
                {"kind": "adjust_machines", "station_id": "cutting", "value": 1},
            ]
            pushed = client.post(
                f"/api/scenarios/{sid}/delta",
                json={"expected_revision": 0, "edits": step},
            )
            assert pushed.status_code == 200
            assert pushed.json()["revision"] == 1

            after = client.get(f"/api/scenarios/{sid}/capacity").json()
            assert after["fg_throughput"] == 300
            bottleneck = [r for r in after["rows"] if r["is_bottleneck"]]
            assert [r["station_id"] for r in bottleneck] == ["part-sewing"]

            stale = client.post(
                f"/api/scenarios/{sid}/delta",
                json={"expected_revision": 0, "edits": step},
            )
            assert stale.status_code == 409

            undone = client.post(f"/api/scenarios/{sid}/undo", json={})
            assert undone.status_code == 200
            restored = client.get(f"/api/scenarios/{sid}").json()
            assert restored["line"] == document_to_dict(base)
            assert (
                client.get(f"/api/scenarios/{sid}/capacity").json()["fg_throughput"]
                == 240
            )
    finally:
        server.should_exit = True
        thread.join(timeout=10)
    assert not thread.is_alive()
