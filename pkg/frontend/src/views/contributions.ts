/** Resonance-contribution view: |sum of tails|, |exact - tails|, |exact|.
 *
 * Single source of truth: every cell and every plotted ordinate is a value
 * from GET /contributions, echoed verbatim (String(v) round-trips the
 * double exactly). No arithmetic happens here beyond pixel mapping; the
 * log-scale toggle only changes the mapping, never the displayed numbers.
 */

import { clear, el, extent, linearScale, polyline, svgEl } from "../dom.js";
import type { ContributionsPayload } from "../types.js";

export interface ContributionsOptions {
  logScale?: boolean;
  width?: number;
  height?: number;
}

const SERIES: { column: 1 | 2 | 3; label: string; color: string }[] = [
  { column: 3, label: "|exact|", color: "#222" },
  { column: 1, label: "|sum of tails|", color: "#d33" },
  { column: 2, label: "|exact - tails|", color: "#36c" },
];

export function renderContributions(
  container: HTMLElement,
  payload: ContributionsPayload,
  options: ContributionsOptions = {},
): void {
  clear(container);
  const rows = payload.rows;
  if (rows.length === 0) {
    container.appendChild(el("p", { class: "empty" }, "no energies in the window"));
    return;
  }
  const width = options.width ?? 520;
  const height = options.height ?? 300;
  const margin = 40;
  const log = options.logScale ?? false;
  const energies = rows.map((r) => r[0]);
  const transform = (v: number) => (log ? Math.log10(Math.max(v, 1e-300)) : v);
  const allValues = rows.flatMap((r) => [r[1], r[2], r[3]].map(transform));
  const x = linearScale(extent(energies), [margin, width - margin]);
  const y = linearScale(extent(allValues), [height - margin, margin]);

  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    class: "contributions-chart",
    role: "img",
  });
  for (const series of SERIES) {
    svg.appendChild(polyline(
      energies,
      rows.map((r) => transform(r[series.column])),
      x, y,
      { stroke: series.color, "stroke-width": "1.6", class: `series-${series.column}` },
    ));
  }
  svg.appendChild(svgEl("text", {
    x: String(width / 2), y: String(height - 8), "text-anchor": "middle",
    class: "axis-label",
  })).textContent = `E (meV) - mode ${payload.mode}${log ? " (log scale)" : ""}`;
  container.appendChild(svg);

  const table = el("table", { class: "contributions-table" });
  const head = el("tr");
  for (const title of ["E (meV)", ...SERIES.map((s) => s.label)]) {
    head.appendChild(el("th", {}, title));
  }
  table.appendChild(head);
  for (const row of rows) {
    const tr = el("tr", { "data-energy": String(row[0]) });
    tr.appendChild(el("td", {}, String(row[0])));
    for (const series of SERIES) {
      tr.appendChild(
        el("td", { "data-column": String(series.column) }, String(row[series.column])),
      );
    }
    table.appendChild(tr);
  }
  container.appendChild(table);
}
