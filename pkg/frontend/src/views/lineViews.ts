/** Unfolded-amplitude and deflection views (single-series line plots). */

import { clear, el, extent, linearScale, polyline, svgEl } from "../dom.js";
import type { DeflectionPayload, UnfoldedPayload } from "../types.js";

function lineFigure(
  container: HTMLElement,
  xs: number[],
  ys: number[],
  xLabel: string,
  yLabel: string,
  logScale: boolean,
  width = 520,
  height = 280,
): void {
  clear(container);
  if (xs.length === 0) {
    container.appendChild(el("p", { class: "empty" }, "no samples"));
    return;
  }
  const margin = 40;
  const mapped = logScale ? ys.map((v) => Math.log10(Math.max(v, 1e-300))) : ys;
  const x = linearScale(extent(xs), [margin, width - margin]);
  const y = linearScale(extent(mapped), [height - margin, margin]);
  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    class: "line-figure",
    role: "img",
  });
  svg.appendChild(polyline(xs, mapped, x, y, {
    stroke: "#36c", "stroke-width": "1.6",
  }));
  svg.appendChild(svgEl("text", {
    x: String(width / 2), y: String(height - 8), "text-anchor": "middle",
    class: "axis-label",
  })).textContent = xLabel;
  svg.appendChild(svgEl("text", {
    x: "12", y: String(height / 2), class: "axis-label",
    transform: `rotate(-90 12 ${height / 2})`, "text-anchor": "middle",
  })).textContent = yLabel + (logScale ? " (log)" : "");
  container.appendChild(svg);
}

export function renderUnfolded(
  container: HTMLElement,
  payload: UnfoldedPayload,
  kind: "f" | "g",
  logScale = true,
): void {
  lineFigure(
    container, payload.phi, payload.abs,
    `winding angle phi (rad), E = ${payload.energy} meV`,
    kind === "f" ? "|f~(phi)|" : "|g~(phi)|",
    logScale,
  );
}

export function renderDeflection(
  container: HTMLElement,
  payload: DeflectionPayload,
): void {
  lineFigure(
    container, payload.j, payload.deflection_rad,
    `J, E = ${payload.energy} meV`,
    "deflection (rad)",
    false,
  );
}

export function renderDcs(
  container: HTMLElement,
  thetaDeg: number[],
  dcs: number[],
  energy: number,
): void {
  lineFigure(container, thetaDeg, dcs, `theta (deg), E = ${energy} meV`,
             "dcs", true);
}
