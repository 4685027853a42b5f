/** Client-side graph layout computed from the automaton JSON document.
 *
 * States are layered by breadth-first distance from the start state and
 * stacked within each layer. Above the collapse threshold only the red core
 * and the blue fringe are laid out (full prefix trees are unreadable); the
 * number of hidden states is reported so the view can say so.
 */
import type { AutomatonDoc } from "./types.js";

export interface LaidOutNode {
  id: number;
  x: number;
  y: number;
  color: "red" | "blue" | "white";
  label: string;
  occurrences: number;
}

export interface LaidOutEdge {
  source: number;
  target: number;
  label: string;
  selfLoop: boolean;
}

export interface GraphLayout {
  nodes: LaidOutNode[];
  edges: LaidOutEdge[];
  width: number;
  height: number;
  collapsed: boolean;
  hiddenStates: number;
}

export const COLLAPSE_THRESHOLD = 300;
const X_GAP = 130;
const Y_GAP = 64;
const MARGIN = 50;

export function layoutAutomaton(
  doc: AutomatonDoc,
  collapseThreshold: number = COLLAPSE_THRESHOLD,
): GraphLayout {
  const collapsed = doc.states.length > collapseThreshold;
  const visible = new Set<number>();
  for (const state of doc.states) {
    if (!collapsed || state.color !== "white") visible.add(state.id);
  }

  const adjacency = new Map<number, number[]>();
  for (const t of doc.transitions) {
    if (!visible.has(t.source) || !visible.has(t.target)) continue;
    const row = adjacency.get(t.source) ?? [];
    row.push(t.target);
    adjacency.set(t.source, row);
  }

  // breadth-first layering from the start state; unreachable visible states
  // (possible in collapsed mode) go to a trailing layer
  const depth = new Map<number, number>();
  if (visible.has(doc.start)) depth.set(doc.start, 0);
  const queue = visible.has(doc.start) ? [doc.start] : [];
  while (queue.length) {
    const cur = queue.shift()!;
    for (const next of adjacency.get(cur) ?? []) {
      if (!depth.has(next)) {
        depth.set(next, depth.get(cur)! + 1);
        queue.push(next);
      }
    }
  }
  let maxDepth = 0;
  for (const d of depth.values()) maxDepth = Math.max(maxDepth, d);
  for (const id of [...visible].sort((a, b) => a - b)) {
    if (!depth.has(id)) depth.set(id, maxDepth + 1);
  }

  const layers = new Map<number, number[]>();
  for (const id of [...visible].sort((a, b) => a - b)) {
    const d = depth.get(id)!;
    const layer = layers.get(d) ?? [];
    layer.push(id);
    layers.set(d, layer);
  }

  const position = new Map<number, { x: number; y: number }>();
  let tallest = 1;
  for (const [d, ids] of layers) {
    tallest = Math.max(tallest, ids.length);
    ids.forEach((id, row) => {
      position.set(id, { x: MARGIN + d * X_GAP, y: MARGIN + row * Y_GAP });
    });
  }

  const colors = new Map(doc.states.map((s) => [s.id, s.color]));
  const occurrences = new Map(doc.states.map((s) => [s.id, s.occurrences]));
  const nodes: LaidOutNode[] = [...visible].sort((a, b) => a - b).map((id) => ({
    id,
    ...position.get(id)!,
    color: colors.get(id)!,
    label: `${id} (${occurrences.get(id)})`,
    occurrences: occurrences.get(id)!,
  }));

  const edges: LaidOutEdge[] = doc.transitions
    .filter((t) => visible.has(t.source) && visible.has(t.target))
    .map((t) => ({
      source: t.source,
      target: t.target,
      label: edgeLabel(t.input, t.output, t.count),
      selfLoop: t.source === t.target,
    }));

  const layerCount = layers.size;
  return {
    nodes,
    edges,
    width: MARGIN * 2 + Math.max(1, layerCount) * X_GAP,
    height: MARGIN * 2 + tallest * Y_GAP,
    collapsed,
    hiddenStates: doc.states.length - visible.size,
  };
}

export function edgeLabel(input: string, output: string | null, count: number): string {
  const head = output === null ? input : `${input}:${output}`;
  return `${head} (${count})`;
}
