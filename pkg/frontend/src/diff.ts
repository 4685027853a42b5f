/** Step-to-step comparison of automaton documents for the side-by-side view. */
import type { AutomatonDoc } from "./types.js";

export interface StepDiff {
  /** present a step ago, gone now: merged away (or undone into existence' reverse) */
  mergedAway: number[];
  /** present now, absent a step ago (appears after UNDO) */
  added: number[];
}

export function diffStates(current: AutomatonDoc, previous: AutomatonDoc): StepDiff {
  const now = new Set(current.states.map((s) => s.id));
  const before = new Set(previous.states.map((s) => s.id));
  return {
    mergedAway: [...before].filter((id) => !now.has(id)).sort((a, b) => a - b),
    added: [...now].filter((id) => !before.has(id)).sort((a, b) => a - b),
  };
}
