// Balance recommendations: ask the service for a plan toward a target,
// list its steps, and let the planner apply or dismiss them as one delta.

import type { BalanceDto } from "./types.js";

export interface BalancePanelHandlers {
  onRequest(target: number): void;
  onApply(plan: BalanceDto): void;
  onDismiss(): void;
}

function describeStep(step: BalanceDto["steps"][number], name: string): string {
  const parts = step.edits.map((edit) => {
    if (edit.kind === "adjust_labor") return `+${edit.value} team`;
    if (edit.kind === "adjust_machines") return `+${edit.value} machine`;
    return `cycle -> ${edit.value}`;
  });
  return `${name}: ${parts.join(", ")} (fg ${step.fg_throughput})`;
}

export function renderBalancePanel(
  plan: BalanceDto | null,
  stationNames: Map<string, string>,
  handlers: BalancePanelHandlers,
): HTMLElement {
  const section = document.createElement("section");
  section.className = "balance-panel";

  const form = document.createElement("form");
  const targetInput = document.createElement("input");
  targetInput.type = "number";
  targetInput.name = "target";
  targetInput.placeholder = "target pcs/day";
  const requestButton = document.createElement("button");
  requestButton.type = "submit";
  requestButton.textContent = "Recommend";
  form.appendChild(targetInput);
  form.appendChild(requestButton);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const target = Number(targetInput.value);
    if (Number.isFinite(target) && target > 0) {
      handlers.onRequest(target);
    }
  });
  section.appendChild(form);

  if (plan === null) {
    return section;
  }

  const result = document.createElement("div");
  result.className = "balance-result";

  const verdict = document.createElement("p");
  verdict.className = "verdict";
  if (plan.achieved && plan.steps.length === 0) {
    verdict.textContent = "already satisfied";
  } else if (plan.achieved) {
    verdict.textContent = `reachable: fg ${plan.final_fg_throughput} after ${plan.steps.length} step(s)`;
  } else {
    const blocker = plan.blocked_at === null ? "" : stationNames.get(plan.blocked_at) ?? plan.blocked_at;
    verdict.textContent = `not achievable: limited by ${blocker} at fg ${plan.final_fg_throughput}`;
  }
  result.appendChild(verdict);

  if (plan.steps.length > 0) {
    const list = document.createElement("ol");
    list.className = "steps";
    for (const step of plan.steps) {
      const item = document.createElement("li");
      item.textContent = describeStep(step, stationNames.get(step.station_id) ?? step.station_id);
      list.appendChild(item);
    }
    result.appendChild(list);

    const apply = document.createElement("button");
    apply.type = "button";
    apply.className = "apply";
    apply.textContent = "Apply plan";
    apply.addEventListener("click", () => handlers.onApply(plan));
    result.appendChild(apply);
  }

  const dismiss = document.createElement("button");
  dismiss.type = "button";
  dismiss.className = "dismiss";
  dismiss.textContent = "Dismiss";
  dismiss.addEventListener("click", () => handlers.onDismiss());
  result.appendChild(dismiss);

  section.appendChild(result);
  return section;
}
