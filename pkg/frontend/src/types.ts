// Shapes of the planning service's JSON responses. The UI renders these
// verbatim; it never derives capacity numbers on its own.

export interface MachinePoolDto {
  unit_capacity: number;
  machine_count: number;
}

export interface WorkstationDto {
  id: string;
  name: string;
  batch_qty: number;
  total_batch_time: number;
  cycle_time: number;
  labor_resources: number;
  machine_pool: MachinePoolDto | null;
}

export interface LineDocumentDto {
  schema_version: number;
  id: string;
  available_minutes: number;
  workstations: WorkstationDto[];
  styles: unknown[];
  vsm: unknown;
  balance_policy: unknown;
}

export interface CapacityRowDto {
  station_id: string;
  labor_daily_output: number;
  machine_daily_capacity: number | null;
  effective_capacity: number;
  is_bottleneck: boolean;
  constraint_kind: string;
}

export interface CapacityDto {
  revision: number;
  rows: CapacityRowDto[];
  fg_throughput: number;
}

export interface ScenarioDto {
  scenario_id: string;
  revision: number;
  line: LineDocumentDto;
}

export interface EditDto {
  kind: "adjust_labor" | "adjust_machines" | "set_cycle_time";
  station_id: string;
  value: number;
}

export interface RevisionDto {
  scenario_id: string;
  revision: number;
}

export interface BalanceStepDto {
  iteration: number;
  station_id: string;
  fg_throughput: number;
  edits: EditDto[];
}

export interface BalanceDto {
  revision: number;
  achieved: boolean;
  final_fg_throughput: number;
  blocked_at: string | null;
  steps: BalanceStepDto[];
  combined_edits: EditDto[];
}

// What the dashboard knows at any instant. The capacity report shown is
// always the one fetched at the shown revision; mixed states never render.
export interface UiScenarioState {
  scenarioId: string;
  line: LineDocumentDto;
  capacity: CapacityDto;
  revision: number;
  pending: boolean;
  banner: string | null;
}
