/** Typed client for the local analysis service.
 *
 * Every number shown anywhere in the UI comes out of this client unchanged:
 * the views format, they never compute.
 */

import type {
  ApiErrorPayload,
  ContributionMode,
  ContributionsPayload,
  DcsPayload,
  DeflectionPayload,
  EnergyEntry,
  PoleEntry,
  SessionSummary,
  TrajectoryRequest,
  TrajectorySummary,
  UnfoldedPayload,
  ZeroEntry,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly candidates: [number, number][];

  constructor(status: number, payload: ApiErrorPayload) {
    super(payload.message);
    this.code = payload.code;
    this.status = status;
    this.candidates = payload.candidates ?? [];
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, init);
    const body = (await resp.json()) as T | ApiErrorPayload;
    if (!resp.ok) {
      throw new ApiError(resp.status, body as ApiErrorPayload);
    }
    return body as T;
  }

  getEnergies(): Promise<{ revision: number; energies: EnergyEntry[] }> {
    return this.request("/energies");
  }

  getPoles(index: number): Promise<{ revision: number; poles: PoleEntry[] }> {
    return this.request(`/poles/${index}`);
  }

  getZeros(index: number): Promise<{ revision: number; zeros: ZeroEntry[] }> {
    return this.request(`/zeros/${index}`);
  }

  getSession(): Promise<SessionSummary> {
    return this.request("/session");
  }

  getDcs(index: number, n = 181): Promise<DcsPayload> {
    return this.request(`/dcs/${index}?n=${n}`);
  }

  getDeflection(index: number, n = 200): Promise<DeflectionPayload> {
    return this.request(`/deflection/${index}?n=${n}`);
  }

  getUnfolded(index: number, kind: "f" | "g", n = 80): Promise<UnfoldedPayload> {
    return this.request(`/unfolded/${index}?kind=${kind}&n=${n}`);
  }

  getContributions(
    labels: string[],
    mode: ContributionMode,
    thetaDeg?: number,
    powerNp?: number,
  ): Promise<ContributionsPayload> {
    const params = new URLSearchParams({ labels: labels.join(","), mode });
    if (thetaDeg !== undefined) params.set("theta", String(thetaDeg));
    if (powerNp !== undefined) params.set("power_np", String(powerNp));
    return this.request(`/contributions?${params.toString()}`);
  }

  postTrajectory(
    req: TrajectoryRequest,
  ): Promise<{ revision: number; trajectory: TrajectorySummary }> {
    return this.request("/trajectories", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  deleteTrajectory(label: string): Promise<{ revision: number }> {
    return this.request(`/trajectories/${encodeURIComponent(label)}`, {
      method: "DELETE",
    });
  }

  exportSession(): Promise<{ written: string[] }> {
    return this.request("/export", { method: "POST", body: "{}" });
  }
}
