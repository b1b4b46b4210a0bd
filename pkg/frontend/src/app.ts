// Dashboard orchestration: one scenario, its board, a balance panel, an
// undo control, and a session sparkline of finished-goods output. All
// actions run through one queue (single UI thread); every displayed
// number originates in a service response.

import { isConflict, ApiError, type PlanningApi } from "./api.js";
import { renderLineBoard, type EditableField } from "./board.js";
import { renderBalancePanel } from "./balancePanel.js";
import { renderSparkline } from "./sparkline.js";
import type { BalanceDto, EditDto, UiScenarioState } from "./types.js";

const CONFLICT_NOTICE = "scenario changed elsewhere; reloaded the latest revision";
const SNAPSHOT_ATTEMPTS = 3;

export class App {
  private state: UiScenarioState | null = null;
  private plan: BalanceDto | null = null;
  private history: number[] = [];
  private queue: Promise<void> = Promise.resolve();

  constructor(
    private readonly api: PlanningApi,
    private readonly root: HTMLElement,
  ) {}

  init(): Promise<void> {
    return this.enqueue(async () => {
      const created = await this.api.createScenario();
      await this.loadSnapshot(created.scenario_id);
    });
  }

  // Resolves when every action queued so far has finished.
  settle(): Promise<void> {
    return this.queue;
  }

  private enqueue(task: () => Promise<void>): Promise<void> {
    const run = this.queue.then(async () => {
      if (this.state !== null) {
        this.state = { ...this.state, pending: true, banner: null };
        this.render();
      }
      try {
        await task();
      } catch (error) {
        this.showBanner(error instanceof Error ? error.message : String(error));
      }
      if (this.state !== null && this.state.pending) {
        this.state = { ...this.state, pending: false };
      }
      this.render();
    });
    this.queue = run;
    return run;
  }

  // Board and revision move together: keep fetching until the capacity
  // report's revision matches the scenario's, so stale pairs never render.
  private async loadSnapshot(scenarioId: string, banner: string | null = null): Promise<void> {
    for (let attempt = 0; attempt < SNAPSHOT_ATTEMPTS; attempt += 1) {
      const scenario = await this.api.getScenario(scenarioId);
      const capacity = await this.api.getCapacity(scenarioId);
      if (scenario.revision !== capacity.revision) continue;
      this.state = {
        scenarioId,
        line: scenario.line,
        capacity,
        revision: scenario.revision,
        pending: false,
        banner,
      };
      this.history.push(capacity.fg_throughput);
      return;
    }
    throw new Error("could not fetch a consistent scenario snapshot");
  }

  private showBanner(text: string): void {
    if (this.state !== null) {
      this.state = { ...this.state, banner: text, pending: false };
    }
  }

  private editsFor(stationId: string, field: EditableField, value: number): EditDto[] {
    const station = this.state?.line.workstations.find((ws) => ws.id === stationId);
    if (station === undefined) return [];
    if (field === "cycle") {
      return value === station.cycle_time
        ? []
        : [{ kind: "set_cycle_time", station_id: stationId, value }];
    }
    if (field === "labor") {
      const delta = value - station.labor_resources;
      return delta === 0 ? [] : [{ kind: "adjust_labor", station_id: stationId, value: delta }];
    }
    const current = station.machine_pool?.machine_count ?? 0;
    const delta = value - current;
    return delta === 0 ? [] : [{ kind: "adjust_machines", station_id: stationId, value: delta }];
  }

  private async pushEdits(edits: EditDto[]): Promise<void> {
    if (this.state === null || edits.length === 0) return;
    const { scenarioId, revision } = this.state;
    try {
      await this.api.pushDelta(scenarioId, revision, edits);
      await this.loadSnapshot(scenarioId);
    } catch (error) {
      if (isConflict(error)) {
        await this.loadSnapshot(scenarioId, CONFLICT_NOTICE);
        return;
      }
      if (error instanceof ApiError) {
        // rejected edit: the line did not move, but reset the inputs
        await this.loadSnapshot(scenarioId, error.message);
        return;
      }
      throw error;
    }
  }

  edit(stationId: string, field: EditableField, value: number): Promise<void> {
    return this.enqueue(() => this.pushEdits(this.editsFor(stationId, field, value)));
  }

  undo(): Promise<void> {
    return this.enqueue(async () => {
      if (this.state === null) return;
      const { scenarioId, revision } = this.state;
      try {
        await this.api.undo(scenarioId, revision);
        await this.loadSnapshot(scenarioId);
      } catch (error) {
        if (isConflict(error)) {
          await this.loadSnapshot(scenarioId, CONFLICT_NOTICE);
          return;
        }
        if (error instanceof ApiError) {
          this.showBanner(error.message);
          return;
        }
        throw error;
      }
    });
  }

  requestBalance(target: number): Promise<void> {
    return this.enqueue(async () => {
      if (this.state === null) return;
      this.plan = await this.api.balance(this.state.scenarioId, target);
    });
  }

  applyPlan(plan: BalanceDto): Promise<void> {
    return this.enqueue(async () => {
      this.plan = null;
      await this.pushEdits(plan.combined_edits);
    });
  }

  dismissPlan(): Promise<void> {
    return this.enqueue(async () => {
      this.plan = null;
    });
  }

  render(): void {
    this.root.replaceChildren();
    if (this.state === null) {
      const loading = document.createElement("p");
      loading.className = "loading";
      loading.textContent = "loading scenario...";
      this.root.appendChild(loading);
      return;
    }

    const header = document.createElement("header");
    const title = document.createElement("h1");
    title.textContent = "Line Planner";
    header.appendChild(title);

    const status = document.createElement("p");
    status.className = "status";
    status.textContent =
      `scenario ${this.state.scenarioId} · revision ` +
      `${this.state.revision}${this.state.pending ? " · working..." : ""}`;
    header.appendChild(status);

    const undoButton = document.createElement("button");
    undoButton.type = "button";
    undoButton.className = "undo";
    undoButton.textContent = "Undo";
    undoButton.addEventListener("click", () => void this.undo());
    header.appendChild(undoButton);

    header.appendChild(renderSparkline(this.history));
    this.root.appendChild(header);

    if (this.state.banner !== null) {
      const banner = document.createElement("p");
      banner.className = "banner";
      banner.setAttribute("role", "alert");
      banner.textContent = this.state.banner;
      this.root.appendChild(banner);
    }

    this.root.appendChild(
      renderLineBoard(this.state, {
        onEdit: (stationId, field, value) => void this.edit(stationId, field, value),
      }),
    );

    const names = new Map(this.state.line.workstations.map((ws) => [ws.id, ws.name]));
    this.root.appendChild(
      renderBalancePanel(this.plan, names, {
        onRequest: (target) => void this.requestBalance(target),
        onApply: (plan) => void this.applyPlan(plan),
        onDismiss: () => void this.dismissPlan(),
      }),
    );
  }
}
