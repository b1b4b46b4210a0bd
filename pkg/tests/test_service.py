"""Planning service contract: scenarios, optimistic locking, derived numbers."""

import json
import socket
import threading
import time

import pytest
from fastapi.testclient import TestClient

from conftest import garment_line
from lineplan.capacity import analyze_capacity
from lineplan.lineio import (
    document_to_dict,
    line_document,
    parse_line_document,
    report_to_dict,
)
from lineplan.model import Edit, ScenarioDelta
from lineplan.service import ConflictError, RejectedDeltaError, ScenarioStore, create_app
from conftest import FIXTURES

CUTTING_STEP = [
    {"kind": "adjust_labor", "station_id": "cutting", "value": 1},
    {"kind": "adjust_machines", "station_id": "cutting", "value": 1},
]


@pytest.fixture
def future_doc(fig6_future):
    return line_document(fig6_future)


@pytest.fixture
def client(future_doc):
    app = create_app(future_doc)
    with TestClient(app) as test_client:
        yield test_client


def create_scenario(client):
    response = client.post("/api/scenarios")
    assert response.status_code == 201
    return response.json()


def test_base_line_endpoint(client, future_doc):
    response = client.get("/api/line")
    assert response.status_code == 200
    assert response.json() == document_to_dict(future_doc)


def test_scenario_ids_are_sequential(client):
    assert create_scenario(client) == {"scenario_id": "s-1", "revision": 0}
    assert create_scenario(client) == {"scenario_id": "s-2", "revision": 0}


def test_scenario_flow_matches_engine(client, fig6_future, fig7):
    scenario = create_scenario(client)
    sid = scenario["scenario_id"]

    before = client.get(f"/api/scenarios/{sid}/capacity").json()
    assert before == {"revision": 0, **report_to_dict(analyze_capacity(fig6_future))}

    pushed = client.post(
        f"/api/scenarios/{sid}/delta",
        json={"expected_revision": 0, "edits": CUTTING_STEP},
    )
    assert pushed.status_code == 200
    assert pushed.json() == {"scenario_id": sid, "revision": 1}

    after = client.get(f"/api/scenarios/{sid}/capacity").json()
    assert after == {"revision": 1, **report_to_dict(analyze_capacity(fig7))}
    assert after["fg_throughput"] == 300

    body = client.get(f"/api/scenarios/{sid}").json()
    assert body["revision"] == 1
    assert body["line"] == document_to_dict(line_document(fig7))


def test_stale_revision_conflicts(client):
    sid = create_scenario(client)["scenario_id"]
    first = client.post(
        f"/api/scenarios/{sid}/delta",
        json={"expected_revision": 0, "edits": CUTTING_STEP},
    )
    assert first.status_code == 200
    stale = client.post(
        f"/api/scenarios/{sid}/delta",
        json={"expected_revision": 0, "edits": CUTTING_STEP},
    )
    assert stale.status_code == 409
    assert stale.json()["detail"] == "expected revision 0, scenario is at 1"


def test_undo_restores_previous_state(client, future_doc):
    sid = create_scenario(client)["scenario_id"]
    client.post(
        f"/api/scenarios/{sid}/delta",
        json={"expected_revision": 0, "edits": CUTTING_STEP},
    )
    undone = client.post(f"/api/scenarios/{sid}/undo", json={"expected_revision": 1})
    assert undone.status_code == 200
    assert undone.json() == {"scenario_id": sid, "revision": 2}

    body = client.get(f"/api/scenarios/{sid}").json()
    assert body["line"] == document_to_dict(future_doc)

    empty = client.post(f"/api/scenarios/{sid}/undo", json={})
    assert empty.status_code == 422
    assert empty.json()["detail"] == ["nothing to undo"]


def test_undo_can_demand_a_revision(client):
    sid = create_scenario(client)["scenario_id"]
    client.post(
        f"/api/scenarios/{sid}/delta",
        json={"expected_revision": 0, "edits": CUTTING_STEP},
    )
    stale = client.post(f"/api/scenarios/{sid}/undo", json={"expected_revision": 0})
    assert stale.status_code == 409


def test_invalid_delta_rejected_without_mutation(client):
    sid = create_scenario(client)["scenario_id"]
    bad = client.post(
        f"/api/scenarios/{sid}/delta",
        json={
            "expected_revision": 0,
            "edits": [{"kind": "adjust_labor", "station_id": "ghost", "value": 1}],
        },
    )
    assert bad.status_code == 422
    assert any("ghost" in message for message in bad.json()["detail"])
    assert client.get(f"/api/scenarios/{sid}").json()["revision"] == 0


def test_unknown_scenario_is_404(client):
    for url in (
        "/api/scenarios/s-99",
        "/api/scenarios/s-99/capacity",
        "/api/scenarios/s-99/vsm",
        "/api/scenarios/s-99/lp",
    ):
        assert client.get(url).status_code == 404
    assert (
        client.post(
            "/api/scenarios/s-99/delta", json={"expected_revision": 0, "edits": []}
        ).status_code
        == 404
    )


def test_vsm_endpoint_reads_base_map():
    doc = parse_line_document(
        (FIXTURES / "vsm_current.json").read_text(encoding="utf-8")
    )
    with TestClient(create_app(doc)) as client:
        sid = client.post("/api/scenarios").json()["scenario_id"]
        body = client.get(f"/api/scenarios/{sid}/vsm").json()
        assert body["lead_time"] == pytest.approx(485.0)
        assert body["value_added_time"] == pytest.approx(35.0)
        assert body["va_ratio"] == pytest.approx(35.0 / 485.0)


def test_vsm_endpoint_404_without_map(client):
    sid = create_scenario(client)["scenario_id"]
    response = client.get(f"/api/scenarios/{sid}/vsm")
    assert response.status_code == 404
    assert "vsm" in response.json()["detail"]


def test_balance_endpoint_reports_plan(client):
    sid = create_scenario(client)["scenario_id"]
    response = client.post(f"/api/scenarios/{sid}/balance", json={"target": 300})
    assert response.status_code == 200
    body = response.json()
    assert body["achieved"] is True
    assert body["final_fg_throughput"] == 300
    assert body["blocked_at"] is None
    assert len(body["steps"]) == 1
    assert body["steps"][0]["station_id"] == "cutting"
    assert body["combined_edits"] == CUTTING_STEP

    # the recommendation is advisory: the scenario itself did not move
    assert client.get(f"/api/scenarios/{sid}").json()["revision"] == 0

    # applying the combined edits realizes the plan
    client.post(
        f"/api/scenarios/{sid}/delta",
        json={"expected_revision": 0, "edits": body["combined_edits"]},
    )
    capacity = client.get(f"/api/scenarios/{sid}/capacity").json()
    assert capacity["fg_throughput"] == 300


def test_balance_endpoint_blocked_names_station(client):
    sid = create_scenario(client)["scenario_id"]
    response = client.post(f"/api/scenarios/{sid}/balance", json={"target": 1000000})
    assert response.status_code == 200
    body = response.json()
    assert body["achieved"] is False
    assert body["blocked_at"] in {
        "receiving",
        "cutting",
        "picking",
        "part-sewing",
        "add-on",
        "garment-sewing",
        "packing",
        "delivery",
    }


def test_balance_endpoint_rejects_bad_target(client):
    sid = create_scenario(client)["scenario_id"]
    assert (
        client.post(f"/api/scenarios/{sid}/balance", json={"target": 0}).status_code
        == 422
    )


def test_lp_endpoint_solves_current_scenario(client):
    sid = create_scenario(client)["scenario_id"]
    body = client.get(f"/api/scenarios/{sid}/lp").json()
    assert body["solution"]["status"] == "optimal"
    assert body["solution"]["z"] == pytest.approx(240.0)
    assert "cutting:labor" in body["solution"]["binding"]
    assert body["problem"]["variable_names"] == ["style-a"]

    client.post(
        f"/api/scenarios/{sid}/delta",
        json={"expected_revision": 0, "edits": CUTTING_STEP},
    )
    moved = client.get(f"/api/scenarios/{sid}/lp").json()
    assert moved["solution"]["z"] == pytest.approx(300.0)
    assert "part-sewing:machine" in moved["solution"]["binding"]


def test_concurrent_pushes_one_winner(future_doc):
    # the lock decides; exactly one of the racing writers lands
    store = ScenarioStore(future_doc)
    sid, _ = store.create_scenario()
    delta = ScenarioDelta.of(Edit("adjust_labor", "cutting", 1))
    outcomes = []
    barrier = threading.Barrier(2)

    def race():
        barrier.wait()
        try:
            outcomes.append(("ok", store.push_delta(sid, delta, 0)))
        except ConflictError as exc:
            outcomes.append(("conflict", exc.actual))

    threads = [threading.Thread(target=race) for _ in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(kind for kind, _ in outcomes) == ["conflict", "ok"]
    assert store.snapshot(sid)[1] == 1


def test_store_rejects_undo_on_fresh_scenario(future_doc):
    store = ScenarioStore(future_doc)
    sid, _ = store.create_scenario()
    with pytest.raises(RejectedDeltaError):
        store.undo(sid)


def test_snapshot_breadcrumb_written(tmp_path, future_doc):
    snapshot = tmp_path / "state.json"
    app = create_app(future_doc, snapshot_path=str(snapshot))
    with TestClient(app) as client:
        sid = client.post("/api/scenarios").json()["scenario_id"]
        client.post(
            f"/api/scenarios/{sid}/delta",
            json={"expected_revision": 0, "edits": CUTTING_STEP},
        )
    state = json.loads(snapshot.read_text(encoding="utf-8"))
    assert state["base"] == document_to_dict(future_doc)
    assert state["scenarios"][sid]["revision"] == 1
    assert state["scenarios"][sid]["deltas"] == [CUTTING_STEP]


def test_service_over_real_socket(future_doc):
    import httpx
    import uvicorn

    app = create_app(future_doc)
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
        base = f"http://127.0.0.1:{port}"
        with httpx.Client(base_url=base, timeout=10) as client:
            sid = client.post("/api/scenarios").json()["scenario_id"]
            capacity = client.get(f"/api/scenarios/{sid}/capacity").json()
            assert capacity["fg_throughput"] == 240
            pushed = client.post(
                f"/api/scenarios/{sid}/delta",
                json={"expected_revision": 0, "edits": CUTTING_STEP},
            )
            assert pushed.status_code == 200
            assert (
                client.get(f"/api/scenarios/{sid}/capacity").json()["fg_throughput"]
                == 300
            )
    finally:
        server.should_exit = True
        thread.join(timeout=10)
    assert not thread.is_alive()
