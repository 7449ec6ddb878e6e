/** UI session state and the trajectory-steering loop.
 *
 * The state machine is headless (no DOM) so the scripted driver and the
 * tests share it with the interactive app. Mutation conflicts (stale
 * revision) are resolved by reloading and retrying once.
 */

import { ApiClient, ApiError } from "./api.js";
import type {
  ContributionMode,
  ContributionsPayload,
  EnergyEntry,
  PoleEntry,
  TrajectorySummary,
} from "./types.js";

export type ViewMode =
  | "poles"
  | "trajectory"
  | "contributions"
  | "unfolded"
  | "deflection";

export class UiSession {
  energies: EnergyEntry[] = [];
  energyCursor = 0;
  viewMode: ViewMode = "poles";
  powerNp: 1 | 2 = 1;
  thetaDeg = 75;
  revision = 0;
  trajectories: TrajectorySummary[] = [];
  /** by-hand picks accumulated so far: energy (6 decimals) -> [Re, Im] | null */
  private pendingPicks: Record<string, [number, number] | null> = {};
  private byHandSeed: [number, number] | null = null;
  private servedPoles = new Map<number, PoleEntry[]>();

  constructor(readonly api: ApiClient) {}

  async load(): Promise<void> {
    const payload = await this.api.getEnergies();
    this.energies = payload.energies;
    this.revision = payload.revision;
    if (this.energyCursor >= this.energies.length) this.energyCursor = 0;
  }

  get currentEnergy(): EnergyEntry {
    const entry = this.energies[this.energyCursor];
    if (!entry) throw new Error("no energies loaded");
    return entry;
  }

  setCursor(index: number): void {
    if (index < 0 || index >= this.energies.length) {
      throw new Error(`energy index ${index} out of range`);
    }
    this.energyCursor = index;
  }

  async polesAtCursor(): Promise<PoleEntry[]> {
    const payload = await this.api.getPoles(this.energyCursor);
    this.revision = payload.revision;
    this.servedPoles.set(this.energyCursor, payload.poles);
    return payload.poles;
  }

  /** The pole a click selected; ids must come from the served list. */
  poleById(id: number): PoleEntry {
    const poles = this.servedPoles.get(this.energyCursor) ?? [];
    const pole = poles.find((p) => p.id === id);
    if (!pole) throw new Error(`pole id ${id} was not served at this energy`);
    return pole;
  }

  /** Auto mode: post the seed, server follows the whole window. */
  async steerAuto(seedPoleId: number, label: string): Promise<TrajectorySummary> {
    const seed = this.poleById(seedPoleId);
    return this.postWithRetry({
      label,
      mode: "auto",
      seed: [seed.re_j, seed.im_j],
      revision: this.revision,
    });
  }

  /** By-hand mode: record the seed, then walk the cursor energy by energy. */
  beginByHand(seedPoleId: number): void {
    const seed = this.poleById(seedPoleId);
    this.byHandSeed = [seed.re_j, seed.im_j];
    this.pendingPicks = {};
    this.energyCursor = Math.min(this.energyCursor + 1, this.energies.length - 1);
  }

  pickCurrent(poleId: number): void {
    const pole = this.poleById(poleId);
    this.pendingPicks[this.currentEnergy.energy.toFixed(6)] = [
      pole.re_j,
      pole.im_j,
    ];
    this.advanceCursor();
  }

  /** Gap energies are allowed: the server records them and keeps the seed. */
  skipCurrent(): void {
    this.pendingPicks[this.currentEnergy.energy.toFixed(6)] = null;
    this.advanceCursor();
  }

  private advanceCursor(): void {
    if (this.energyCursor < this.energies.length - 1) this.energyCursor += 1;
  }

  get byHandActive(): boolean {
    return this.byHandSeed !== null;
  }

  async finishByHand(label: string): Promise<TrajectorySummary> {
    if (!this.byHandSeed) throw new Error("no by-hand session in progress");
    const summary = await this.postWithRetry({
      label,
      mode: "manual",
      seed: this.byHandSeed,
      picks: this.pendingPicks,
      revision: this.revision,
    });
    this.byHandSeed = null;
    this.pendingPicks = {};
    return summary;
  }

  private async postWithRetry(
    req: Parameters<ApiClient["postTrajectory"]>[0],
  ): Promise<TrajectorySummary> {
    try {
      const out = await this.api.postTrajectory(req);
      this.revision = out.revision;
      this.trajectories.push(out.trajectory);
      return out.trajectory;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        await this.load(); // reload revision, retry once
        const out = await this.api.postTrajectory({
          ...req,
          revision: this.revision,
        });
        this.revision = out.revision;
        this.trajectories.push(out.trajectory);
        return out.trajectory;
      }
      throw err;
    }
  }

  /** Contribution rows for the current trajectories; values pass through. */
  contributions(mode: ContributionMode): Promise<ContributionsPayload> {
    const theta = mode === "sideway" ? this.thetaDeg : undefined;
    return this.api.getContributions(
      this.trajectories.map((t) => t.label),
      mode,
      theta,
      this.powerNp,
    );
  }

  async exportSession(): Promise<string[]> {
    if (this.trajectories.length === 0) {
      throw new Error("export needs at least one followed trajectory");
    }
    const out = await this.api.exportSession();
    return out.written;
  }
}
