// @vitest-environment happy-dom
/** Render smoke tests for the SVG views. */

import { describe, expect, it } from "vitest";
import { renderPolePlane } from "../src/views/polePlane.js";
import { renderStripChart } from "../src/views/stripChart.js";
import type { PoleEntry, TrajectorySummary } from "../src/types.js";

const POLES: PoleEntry[] = [
  { id: 0, re_j: 5.9, im_j: 0.08, re_res: 0.11, im_res: -0.03 },
  { id: 1, re_j: 9.1, im_j: 3.2, re_res: 0.4, im_res: 0.9 },
];

describe("pole plane", () => {
  it("draws one clickable marker per pole with the residue tooltip", () => {
    const host = document.createElement("div");
    let picked: PoleEntry | null = null;
    renderPolePlane(host, POLES, [{ re_j: 4.0, im_j: -0.5 }], null, {
      onSelect: (p) => {
        picked = p;
      },
    });
    const markers = host.querySelectorAll("circle.pole");
    expect(markers).toHaveLength(2);
    expect(host.querySelectorAll("circle.zero")).toHaveLength(1);
    const first = markers[0] as SVGCircleElement;
    expect(first.querySelector("title")?.textContent).toContain("0.11");
    first.dispatchEvent(new MouseEvent("click"));
    expect(picked!.id).toBe(0);
  });

  it("highlights the selected pole", () => {
    const host = document.createElement("div");
    renderPolePlane(host, POLES, [], 1, {});
    const fills = [...host.querySelectorAll("circle.pole")].map(
      (c) => c.getAttribute("fill"),
    );
    expect(fills[0]).not.toBe(fills[1]);
  });

  it("shows a message when the window is empty", () => {
    const host = document.createElement("div");
    renderPolePlane(host, [], [], null, {});
    expect(host.querySelector("svg")).toBeNull();
    expect(host.textContent).toMatch(/no poles/);
  });
});

describe("strip chart", () => {
  it("draws solid and dashed polylines per trajectory", () => {
    const host = document.createElement("div");
    const traj: TrajectorySummary = {
      label: "res",
      mode: "auto",
      gaps: [],
      points: [
        [10, 5.9, 0.08, 0.1, 0.0],
        [20, 7.1, 0.22, 0.1, 0.0],
      ],
    };
    renderStripChart(host, [{ energy: 10, re_j: 9.0 }], [traj]);
    expect(host.querySelectorAll("polyline.traj-re")).toHaveLength(1);
    expect(host.querySelectorAll("polyline.traj-im")).toHaveLength(1);
    expect(host.querySelectorAll("circle.catalog-pole")).toHaveLength(1);
  });
});
