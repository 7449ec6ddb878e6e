/** Re J vs E strip chart: all catalogued poles plus followed trajectories.
 *
 * The real parts are the recommended tracking view (they are less sensitive
 * to numerical noise than the imaginary parts, which are drawn dashed).
 */

import { clear, el, extent, linearScale, polyline, svgEl } from "../dom.js";
import type { TrajectorySummary } from "../types.js";

const COLORS = ["#d33", "#36c", "#2a7", "#a3c", "#c80"];

export function renderStripChart(
  container: HTMLElement,
  background: { energy: number; re_j: number }[],
  trajectories: TrajectorySummary[],
  width = 520,
  height = 300,
): void {
  clear(container);
  const energies = [
    ...background.map((b) => b.energy),
    ...trajectories.flatMap((t) => t.points.map((p) => p[0])),
  ];
  if (energies.length === 0) {
    container.appendChild(el("p", { class: "empty" }, "nothing to plot yet"));
    return;
  }
  const values = [
    ...background.map((b) => b.re_j),
    ...trajectories.flatMap((t) => t.points.flatMap((p) => [p[1], p[2]])),
  ];
  const margin = 40;
  const x = linearScale(extent(energies), [margin, width - margin]);
  const y = linearScale(extent(values), [height - margin, margin]);
  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    class: "strip-chart",
    role: "img",
  });
  for (const point of background) {
    svg.appendChild(svgEl("circle", {
      cx: String(x(point.energy)), cy: String(y(point.re_j)), r: "2",
      fill: "#bbb", class: "catalog-pole",
    }));
  }
  trajectories.forEach((traj, i) => {
    const color = COLORS[i % COLORS.length] ?? "#d33";
    const es = traj.points.map((p) => p[0]);
    svg.appendChild(polyline(es, traj.points.map((p) => p[1]), x, y, {
      stroke: color, "stroke-width": "2", class: `traj-re traj-${traj.label}`,
    }));
    svg.appendChild(polyline(es, traj.points.map((p) => p[2]), x, y, {
      stroke: color, "stroke-width": "1.2", "stroke-dasharray": "5 3",
      class: `traj-im traj-${traj.label}`,
    }));
  });
  svg.appendChild(svgEl("text", {
    x: String(width / 2), y: String(height - 8), "text-anchor": "middle",
    class: "axis-label",
  })).textContent = "E (meV)";
  svg.appendChild(svgEl("text", {
    x: "12", y: String(height / 2), class: "axis-label",
    transform: `rotate(-90 12 ${height / 2})`, "text-anchor": "middle",
  })).textContent = "Re J (solid), Im J (dashed)";
  container.appendChild(svg);
}
