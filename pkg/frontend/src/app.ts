/** Interactive trajectory-steering app.
 *
 * Workflow mirrors the batch tool: browse the pole plane per energy, click a
 * seed, follow automatically or walk energies by hand (skip allowed at gap
 * energies), then judge the subtraction in the contribution views before
 * choosing the next trajectory. Export writes the same files the command
 * line would.
 */

import { ApiClient, ApiError } from "./api.js";
import { clear, el } from "./dom.js";
import { UiSession, type ViewMode } from "./session.js";
import { renderContributions } from "./views/contributions.js";
import { renderDcs, renderDeflection, renderUnfolded } from "./views/lineViews.js";
import { renderPolePlane } from "./views/polePlane.js";
import { renderStripChart } from "./views/stripChart.js";
import type { ContributionMode, PoleEntry } from "./types.js";

export class App {
  private session: UiSession;
  private selectedPoleId: number | null = null;
  private logScale = true;
  private mode: ContributionMode = "sideway";
  private banner: HTMLElement;
  private controls: HTMLElement;
  private main: HTMLElement;

  constructor(private root: HTMLElement, api: ApiClient) {
    this.session = new UiSession(api);
    this.banner = el("div", { class: "banner" });
    this.controls = el("div", { class: "controls" });
    this.main = el("div", { class: "main" });
    root.append(this.banner, this.controls, this.main);
  }

  async start(): Promise<void> {
    try {
      await this.session.load();
      const summary = await this.session.api.getSession();
      this.session.thetaDeg = summary.theta_r;
      this.session.powerNp = summary.power_np === 2 ? 2 : 1;
      this.renderControls();
      await this.showView("poles");
    } catch (err) {
      this.fail(err);
    }
  }

  private fail(err: unknown): void {
    const message =
      err instanceof ApiError
        ? `${err.code}: ${err.message}` +
          (err.candidates.length
            ? ` (candidates: ${err.candidates
                .map(([a, b]) => `(${a.toFixed(3)}, ${b.toFixed(3)})`)
                .join(", ")})`
            : "")
        : String(err);
    this.banner.textContent = message;
    this.banner.classList.add("error");
  }

  private note(text: string): void {
    this.banner.textContent = text;
    this.banner.classList.remove("error");
  }

  private renderControls(): void {
    clear(this.controls);
    const energySelect = el("select", { id: "energy" });
    this.session.energies.forEach((entry) => {
      const opt = el("option", { value: String(entry.index) },
                     `${entry.energy} meV`);
      if (entry.index === this.session.energyCursor) opt.selected = true;
      energySelect.appendChild(opt);
    });
    energySelect.addEventListener("change", () => {
      this.session.setCursor(Number(energySelect.value));
      void this.showView(this.session.viewMode);
    });

    const viewSelect = el("select", { id: "view" });
    for (const mode of ["poles", "trajectory", "contributions", "unfolded",
                        "deflection"] as ViewMode[]) {
      viewSelect.appendChild(el("option", { value: mode }, mode));
    }
    viewSelect.addEventListener("change", () => {
      void this.showView(viewSelect.value as ViewMode);
    });

    const thetaInput = el("input", {
      type: "number", value: String(this.session.thetaDeg), min: "0",
      max: "180", step: "1", id: "theta",
    });
    thetaInput.addEventListener("change", () => {
      this.session.thetaDeg = Number(thetaInput.value);
    });

    const powerToggle = el("button", {}, `power: ${this.session.powerNp}`);
    powerToggle.addEventListener("click", () => {
      this.session.powerNp = this.session.powerNp === 1 ? 2 : 1;
      powerToggle.textContent = `power: ${this.session.powerNp}`;
    });

    const logToggle = el("button", {}, "log scale: on");
    logToggle.addEventListener("click", () => {
      this.logScale = !this.logScale;
      logToggle.textContent = `log scale: ${this.logScale ? "on" : "off"}`;
      void this.showView(this.session.viewMode);
    });

    const followAuto = el("button", { id: "follow-auto" }, "follow (auto)");
    followAuto.addEventListener("click", () => void this.followAuto());
    const byHand = el("button", { id: "by-hand" }, "follow by hand");
    byHand.addEventListener("click", () => this.startByHand());
    const skip = el("button", { id: "skip" }, "skip energy");
    skip.addEventListener("click", () => this.skipEnergy());
    const finish = el("button", { id: "finish" }, "finish by-hand");
    finish.addEventListener("click", () => void this.finishByHand());
    const doExport = el("button", { id: "export" }, "export files");
    doExport.disabled = this.session.trajectories.length === 0;
    doExport.addEventListener("click", () => void this.exportFiles());

    this.controls.append(
      el("label", {}, "energy "), energySelect,
      el("label", {}, " view "), viewSelect,
      el("label", {}, " theta(deg) "), thetaInput,
      powerToggle, logToggle, followAuto, byHand, skip, finish, doExport,
    );
  }

  async showView(mode: ViewMode): Promise<void> {
    this.session.viewMode = mode;
    clear(this.main);
    try {
      if (mode === "poles") {
        const [poles, zeros] = await Promise.all([
          this.session.polesAtCursor(),
          this.session.api.getZeros(this.session.energyCursor),
        ]);
        renderPolePlane(this.main, poles, zeros.zeros, this.selectedPoleId, {
          onSelect: (pole) => this.selectPole(pole),
        });
      } else if (mode === "trajectory") {
        renderStripChart(this.main, [], this.session.trajectories);
      } else if (mode === "contributions") {
        const payload = await this.session.contributions(this.mode);
        renderContributions(this.main, payload, { logScale: this.logScale });
      } else if (mode === "unfolded") {
        const payload = await this.session.api.getUnfolded(
          this.session.energyCursor, "g");
        renderUnfolded(this.main, payload, "g", this.logScale);
      } else {
        const payload = await this.session.api.getDeflection(
          this.session.energyCursor);
        renderDeflection(this.main, payload);
        const dcs = await this.session.api.getDcs(this.session.energyCursor);
        const extra = el("div", { class: "dcs-extra" });
        this.main.appendChild(extra);
        renderDcs(extra, dcs.theta_deg, dcs.dcs, dcs.energy);
      }
    } catch (err) {
      this.fail(err);
    }
  }

  private selectPole(pole: PoleEntry): void {
    this.selectedPoleId = pole.id;
    if (this.session.byHandActive) {
      this.session.pickCurrent(pole.id);
      this.note(`picked (${pole.re_j}, ${pole.im_j}); now at `
        + `${this.session.currentEnergy.energy} meV`);
      this.selectedPoleId = null;
      void this.showView("poles");
    } else {
      this.note(`seed candidate: J = (${pole.re_j}, ${pole.im_j})`);
      void this.showView("poles");
    }
  }

  private async followAuto(): Promise<void> {
    if (this.selectedPoleId === null) {
      this.note("click a pole first to choose the seed");
      return;
    }
    try {
      const label = `trajectory-${this.session.trajectories.length + 1}`;
      const traj = await this.session.steerAuto(this.selectedPoleId, label);
      this.note(`followed ${traj.label}: ${traj.points.length} points, `
        + `${traj.gaps.length} gaps`);
      this.selectedPoleId = null;
      this.renderControls();
      await this.showView("contributions");
    } catch (err) {
      this.fail(err);
    }
  }

  private startByHand(): void {
    if (this.selectedPoleId === null) {
      this.note("click the seed pole first, then follow by hand");
      return;
    }
    this.session.beginByHand(this.selectedPoleId);
    this.selectedPoleId = null;
    this.note(`by-hand mode: pick a pole at ${this.session.currentEnergy.energy} meV`
      + " (or skip)");
    void this.showView("poles");
  }

  private skipEnergy(): void {
    if (!this.session.byHandActive) return;
    this.session.skipCurrent();
    this.note(`skipped; now at ${this.session.currentEnergy.energy} meV`);
    void this.showView("poles");
  }

  private async finishByHand(): Promise<void> {
    try {
      const label = `trajectory-${this.session.trajectories.length + 1}`;
      const traj = await this.session.finishByHand(label);
      this.note(`followed ${traj.label} by hand: ${traj.points.length} points`);
      this.renderControls();
      await this.showView("contributions");
    } catch (err) {
      this.fail(err);
    }
  }

  private async exportFiles(): Promise<void> {
    try {
      const written = await this.session.exportSession();
      this.note(`wrote ${written.length} files: ${written.join(", ")}`);
    } catch (err) {
      this.fail(err);
    }
  }
}

export function mount(root: HTMLElement, baseUrl = ""): App {
  const app = new App(root, new ApiClient(baseUrl));
  void app.start();
  return app;
}
