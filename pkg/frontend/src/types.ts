/** Payload shapes of the local HTTP+JSON service. */

export interface EnergyEntry {
  index: number;
  file_index: number;
  energy: number;
}

export interface PoleEntry {
  id: number;
  re_j: number;
  im_j: number;
  re_res: number;
  im_res: number;
}

export interface ZeroEntry {
  re_j: number;
  im_j: number;
}

/** [E_meV, Re J, Im J, Re residue, Im residue] */
export type TrajectoryPoint = [number, number, number, number, number];

export interface TrajectorySummary {
  label: string;
  mode: string;
  gaps: number[];
  points: TrajectoryPoint[];
}

/** [E_meV, |tail|^np, |background|^np, |exact|^np] */
export type ContributionRow = [number, number, number, number];

export type ContributionMode = "forward" | "backward" | "sideway";

export interface ContributionsPayload {
  revision: number;
  labels: string[];
  mode: string;
  rows: ContributionRow[];
}

export interface UnfoldedPayload {
  energy: number;
  phi: number[];
  re: number[];
  im: number[];
  abs: number[];
}

export interface DeflectionPayload {
  energy: number;
  j: number[];
  deflection_rad: number[];
  phase_rad: number[];
}

export interface DcsPayload {
  energy: number;
  theta_deg: number[];
  dcs: number[];
}

export interface SessionSummary {
  revision: number;
  labels: string[];
  theta_r: number;
  power_np: number;
  cam_window: number[];
  n_energies: number;
}

export interface TrajectoryRequest {
  label?: string;
  mode: "auto" | "manual";
  seed?: [number, number];
  picks?: Record<string, [number, number] | null>;
  revision?: number;
}

export interface ApiErrorPayload {
  code: string;
  message: string;
  candidates?: [number, number][];
}
