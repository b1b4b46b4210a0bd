"""Shared builders for the three garment-line scenarios and fixture paths."""

from __future__ import annotations

from pathlib import Path

import pytest

from lineplan.model import MachinePool, ProductionLine, StyleRouting, Workstation

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def station(
    station_id: str,
    name: str,
    batch_qty: int,
    total_batch_time: float,
    cycle_time: float,
    labor_resources: int,
    machine_pool: MachinePool | None = None,
) -> Workstation:
    return Workstation(
        id=station_id,
        name=name,
        batch_qty=batch_qty,
        total_batch_time=float(total_batch_time),
        cycle_time=float(cycle_time),
        labor_resources=labor_resources,
        machine_pool=machine_pool,
    )


def garment_line(
    cutting_labor: int,
    cutting_machines: int,
    part_sewing_cycle: float,
    add_on_cycle: float,
    garment_sewing_cycle: float,
) -> ProductionLine:
    """The eight-station garment line; machine unit capacities track cycle
    times so one machine covers exactly one full day of its operation."""
    stations = (
        station("receiving", "Fabric W/H Receiving", 1000, 200, 5, 3),
        station(
            "cutting", "Fabric Cutting", 1000, 200, 5, cutting_labor,
            MachinePool(120.0, cutting_machines),
        ),
        station("picking", "Picking Accessories", 1440, 180, 8, 4),
        station(
            "part-sewing", "Part Sewing", 1, part_sewing_cycle, part_sewing_cycle, 10,
            MachinePool(600.0 / part_sewing_cycle, 10),
        ),
        station(
            "add-on",
            "Add-On Processes (Embroidery, Pocket Welting, Template Sewing)",
            1, add_on_cycle, add_on_cycle, 5,
            MachinePool(600.0 / add_on_cycle, 5),
        ),
        station(
            "garment-sewing", "Finished Garment Sewing",
            1, garment_sewing_cycle, garment_sewing_cycle, 10,
            MachinePool(600.0 / garment_sewing_cycle, 10),
        ),
        station("packing", "Packing, Cartoning", 1, 3, 3, 3),
        station("delivery", "Finished Garment W/H Delivery", 400, 80, 5, 3),
    )
    sam = {ws.id: float(ws.cycle_time) for ws in stations}
    return ProductionLine(
        id="line-a",
        workstations=stations,
        available_minutes=600.0,
        styles=(StyleRouting("style-a", sam, None, 1.0),),
    )


@pytest.fixture
def fig6_current() -> ProductionLine:
    return garment_line(2, 2, 30, 8, 20)


@pytest.fixture
def fig6_future() -> ProductionLine:
    return garment_line(2, 2, 20, 4, 10)


@pytest.fixture
def fig7() -> ProductionLine:
    return garment_line(3, 3, 20, 4, 10)
