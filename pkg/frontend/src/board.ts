// The line board: one row per workstation, worksheet columns (a)-(h),
// bottleneck row highlighted, finished-goods footer. Output columns show
// service numbers untouched; the editable cells send deltas back up.

import type { CapacityRowDto, UiScenarioState, WorkstationDto } from "./types.js";

export type EditableField = "labor" | "machines" | "cycle";

export interface BoardHandlers {
  onEdit(stationId: string, field: EditableField, value: number): void;
}

const COLUMNS = [
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
];

function fmt(value: number | null): string {
  if (value === null) return "";
  return Number.isInteger(value) ? String(value) : value.toFixed(2);
}

function cell(text: string, col: string): HTMLTableCellElement {
  const td = document.createElement("td");
  td.textContent = text;
  td.dataset.col = col;
  return td;
}

function editableCell(
  col: string,
  field: EditableField,
  stationId: string,
  value: number,
  handlers: BoardHandlers,
): HTMLTableCellElement {
  const td = document.createElement("td");
  td.dataset.col = col;
  const input = document.createElement("input");
  input.type = "number";
  input.value = String(value);
  input.dataset.field = field;
  input.dataset.station = stationId;
  input.addEventListener("change", () => {
    const next = Number(input.value);
    if (!Number.isFinite(next)) {
      input.value = String(value);
      return;
    }
    handlers.onEdit(stationId, field, next);
  });
  td.appendChild(input);
  return td;
}

function bodyRow(
  position: number,
  station: WorkstationDto,
  report: CapacityRowDto,
  handlers: BoardHandlers,
): HTMLTableRowElement {
  const tr = document.createElement("tr");
  tr.dataset.station = station.id;
  if (report.is_bottleneck) {
    tr.classList.add("bottleneck");
  }
  tr.appendChild(cell(String(position), "station"));
  tr.appendChild(cell(station.name, "process"));
  tr.appendChild(cell(fmt(station.batch_qty), "batch-qty"));
  tr.appendChild(cell(fmt(station.total_batch_time), "total-time"));
  tr.appendChild(editableCell("cycle-time", "cycle", station.id, station.cycle_time, handlers));
  tr.appendChild(editableCell("operators", "labor", station.id, station.labor_resources, handlers));
  tr.appendChild(cell(fmt(report.labor_daily_output), "daily-output"));
  if (station.machine_pool === null) {
    tr.appendChild(cell("", "machine-capacity"));
    tr.appendChild(cell("", "machine-count"));
    tr.appendChild(cell("N/A", "machine-total"));
  } else {
    tr.appendChild(cell(fmt(station.machine_pool.unit_capacity), "machine-capacity"));
    tr.appendChild(
      editableCell("machine-count", "machines", station.id, station.machine_pool.machine_count, handlers),
    );
    tr.appendChild(cell(fmt(report.machine_daily_capacity), "machine-total"));
  }
  return tr;
}

export function renderLineBoard(state: UiScenarioState, handlers: BoardHandlers): HTMLElement {
  const section = document.createElement("section");
  section.className = "board";

  const table = document.createElement("table");
  const thead = document.createElement("thead");
  const headRow = document.createElement("tr");
  for (const column of COLUMNS) {
    const th = document.createElement("th");
    th.textContent = column;
    headRow.appendChild(th);
  }
  thead.appendChild(headRow);
  table.appendChild(thead);

  const reportByStation = new Map(state.capacity.rows.map((row) => [row.station_id, row]));
  const tbody = document.createElement("tbody");
  state.line.workstations.forEach((station, index) => {
    const report = reportByStation.get(station.id);
    if (report === undefined) return; // revision mismatch is filtered upstream
    tbody.appendChild(bodyRow(index + 1, station, report, handlers));
  });
  table.appendChild(tbody);
  section.appendChild(table);

  const footer = document.createElement("p");
  footer.className = "fg-output";
  footer.textContent = `FG Output (pcs): ${fmt(state.capacity.fg_throughput)}`;
  section.appendChild(footer);

  return section;
}
