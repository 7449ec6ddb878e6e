// @vitest-environment happy-dom
/** The contributions view is a pass-through of the service payload:
 * every rendered value equals the corresponding GET /contributions entry
 * exactly, with no client-side arithmetic. */

import { describe, expect, it } from "vitest";
import { renderContributions } from "../src/views/contributions.js";
import type { ContributionsPayload } from "../src/types.js";

const PAYLOAD: ContributionsPayload = {
  revision: 3,
  labels: ["res"],
  mode: "forward",
  rows: [
    [10, 0.123456789012345678, 1.0000000000000002, 0.9999999999999999],
    [12.5, 3.14159265358979e-7, 2.718281828459045, 1.414213562373095],
    [15, 0, 5e-324, 1.7976931348623157e308],
  ],
};

describe("contributions view", () => {
  it("echoes every payload value verbatim into the table", () => {
    const host = document.createElement("div");
    renderContributions(host, PAYLOAD);
    const rows = [...host.querySelectorAll("tr")].slice(1); // skip header
    expect(rows).toHaveLength(PAYLOAD.rows.length);
    rows.forEach((tr, i) => {
      const payloadRow = PAYLOAD.rows[i]!;
      const cells = [...tr.querySelectorAll("td")].map((td) => td.textContent);
      expect(cells[0]).toBe(String(payloadRow[0]));
      // column order in the table: exact, tails, background
      expect(cells[1]).toBe(String(payloadRow[3]));
      expect(cells[2]).toBe(String(payloadRow[1]));
      expect(cells[3]).toBe(String(payloadRow[2]));
      // String(x) round-trips doubles exactly: parsing back gives the value
      expect(Number(cells[2])).toBe(payloadRow[1]);
    });
  });

  it("log-scale toggle changes only the drawing, not the table", () => {
    const linear = document.createElement("div");
    const log = document.createElement("div");
    renderContributions(linear, PAYLOAD, { logScale: false });
    renderContributions(log, PAYLOAD, { logScale: true });
    const cellText = (host: HTMLElement) =>
      [...host.querySelectorAll("td")].map((td) => td.textContent);
    expect(cellText(log)).toEqual(cellText(linear));
    const points = (host: HTMLElement) =>
      [...host.querySelectorAll("polyline")].map((p) => p.getAttribute("points"));
    expect(points(log)).not.toEqual(points(linear));
  });

  it("renders a message for an empty window", () => {
    const host = document.createElement("div");
    renderContributions(host, { ...PAYLOAD, rows: [] });
    expect(host.querySelector("table")).toBeNull();
    expect(host.textContent).toMatch(/no energies/);
  });
});
