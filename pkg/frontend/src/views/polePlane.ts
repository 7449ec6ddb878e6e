/** Complex-J-plane scatter of the windowed poles at one energy.
 *
 * Clicking a pole selects it (seed or by-hand pick); the tooltip carries the
 * residue as served. Zeros are drawn hollow for orientation.
 */

import { clear, el, extent, linearScale, svgEl } from "../dom.js";
import type { PoleEntry, ZeroEntry } from "../types.js";

export interface PolePlaneOptions {
  width?: number;
  height?: number;
  onSelect?: (pole: PoleEntry) => void;
}

export function renderPolePlane(
  container: HTMLElement,
  poles: PoleEntry[],
  zeros: ZeroEntry[],
  selectedId: number | null,
  options: PolePlaneOptions = {},
): void {
  const width = options.width ?? 520;
  const height = options.height ?? 360;
  const margin = 40;
  clear(container);
  if (poles.length === 0 && zeros.length === 0) {
    container.appendChild(
      el("p", { class: "empty" }, "no poles or zeros inside the window"),
    );
    return;
  }
  const xs = [...poles.map((p) => p.re_j), ...zeros.map((z) => z.re_j)];
  const ys = [...poles.map((p) => p.im_j), ...zeros.map((z) => z.im_j)];
  const x = linearScale(extent(xs), [margin, width - margin]);
  const y = linearScale(extent(ys), [height - margin, margin]);

  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    class: "pole-plane",
    role: "img",
  });
  svg.appendChild(svgEl("line", {
    x1: String(margin), x2: String(width - margin),
    y1: String(y(0)), y2: String(y(0)),
    stroke: "#888", "stroke-dasharray": "4 3",
  }));
  for (const zero of zeros) {
    svg.appendChild(svgEl("circle", {
      cx: String(x(zero.re_j)), cy: String(y(zero.im_j)), r: "4",
      fill: "none", stroke: "#2a7", class: "zero",
    }));
  }
  for (const pole of poles) {
    const node = svgEl("circle", {
      cx: String(x(pole.re_j)), cy: String(y(pole.im_j)), r: "6",
      fill: pole.id === selectedId ? "#d33" : "#36c",
      class: "pole",
      "data-pole-id": String(pole.id),
      "data-re-j": String(pole.re_j),
      "data-im-j": String(pole.im_j),
    });
    const tip = svgEl("title");
    tip.textContent =
      `J = (${pole.re_j}, ${pole.im_j})\n` +
      `residue = (${pole.re_res}, ${pole.im_res})`;
    node.appendChild(tip);
    node.addEventListener("click", () => options.onSelect?.(pole));
    svg.appendChild(node);
  }
  svg.appendChild(svgEl("text", {
    x: String(width / 2), y: String(height - 8), "text-anchor": "middle",
    class: "axis-label",
  })).textContent = "Re J";
  svg.appendChild(svgEl("text", {
    x: "12", y: String(height / 2), class: "axis-label",
    transform: `rotate(-90 12 ${height / 2})`, "text-anchor": "middle",
  })).textContent = "Im J";
  container.appendChild(svg);
}
