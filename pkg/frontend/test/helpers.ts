import { App } from "../src/app.js";
import type { PlanningApi } from "../src/api.js";

export async function mount(api: PlanningApi): Promise<{ app: App; root: HTMLElement }> {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const app = new App(api, root);
  await app.init();
  return { app, root };
}

export function footerText(root: HTMLElement): string {
  return root.querySelector(".fg-output")?.textContent ?? "";
}

export function statusText(root: HTMLElement): string {
  return root.querySelector(".status")?.textContent ?? "";
}

export function bannerText(root: HTMLElement): string | null {
  return root.querySelector(".banner")?.textContent ?? null;
}

export function bottleneckStations(root: HTMLElement): string[] {
  return [...root.querySelectorAll<HTMLTableRowElement>("tr.bottleneck")].map(
    (tr) => tr.dataset.station ?? "",
  );
}

export function rowFor(root: HTMLElement, stationId: string): HTMLTableRowElement {
  const tr = root.querySelector<HTMLTableRowElement>(`tr[data-station="${stationId}"]`);
  if (tr === null) throw new Error(`no board row for ${stationId}`);
  return tr;
}

export function cellText(root: HTMLElement, stationId: string, col: string): string {
  return rowFor(root, stationId).querySelector(`td[data-col="${col}"]`)?.textContent ?? "";
}

export async function setField(
  app: App,
  root: HTMLElement,
  stationId: string,
  field: string,
  value: number,
): Promise<void> {
  const input = root.querySelector<HTMLInputElement>(
    `input[data-station="${stationId}"][data-field="${field}"]`,
  );
  if (input === null) throw new Error(`no ${field} input for ${stationId}`);
  input.value = String(value);
  input.dispatchEvent(new Event("change", { bubbles: true }));
  await app.settle();
}

export async function requestBalance(app: App, root: HTMLElement, target: number): Promise<void> {
  const input = root.querySelector<HTMLInputElement>('input[name="target"]');
  const form = root.querySelector<HTMLFormElement>(".balance-panel form");
  if (input === null || form === null) throw new Error("balance form missing");
  input.value = String(target);
  form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
  await app.settle();
}

export async function click(app: App, root: HTMLElement, selector: string): Promise<void> {
  const button = root.querySelector<HTMLButtonElement>(selector);
  if (button === null) throw new Error(`no element for ${selector}`);
  button.click();
  await app.settle();
}
