/** Headless scripted session: seed pick, auto-follow, export.
 *
 * Drives the same UiSession code the interactive app uses, so a scripted
 * run and a clicked-through run produce identical server mutations.
 */

import { ApiClient } from "./api.js";
import { UiSession } from "./session.js";
import type { TrajectorySummary } from "./types.js";

export interface ScriptedResult {
  trajectory: TrajectorySummary;
  written: string[];
  session: UiSession;
}

export async function runScriptedSession(
  api: ApiClient,
  seed: { reJ: number; imJ: number },
  label: string,
): Promise<ScriptedResult> {
  const session = new UiSession(api);
  await session.load();
  session.setCursor(0);
  const poles = await session.polesAtCursor();
  if (poles.length === 0) throw new Error("no poles served at the first energy");
  let best = poles[0]!;
  let bestDist = Number.POSITIVE_INFINITY;
  for (const pole of poles) {
    const dRe = Math.abs(pole.re_j - seed.reJ);
    const dIm = Math.abs(pole.im_j - seed.imJ);
    if (dRe <= 0.5 && dIm <= 0.5 && dRe + dIm < bestDist) {
      best = pole;
      bestDist = dRe + dIm;
    }
  }
  if (!Number.isFinite(bestDist)) {
    throw new Error(
      `no served pole within 0.5 of (${seed.reJ}, ${seed.imJ})`,
    );
  }
  const trajectory = await session.steerAuto(best.id, label);
  const written = await session.exportSession();
  return { trajectory, written, session };
}
