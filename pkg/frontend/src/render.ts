/** DOM rendering: the whole view is a pure function of the last state
 * document received (plus the one before it for the side-by-side diff). */
import { diffStates } from "./diff.js";
import { layoutAutomaton } from "./layout.js";
import type { GraphLayout } from "./layout.js";
import type { StateDoc } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const FILL = { red: "#e05555", blue: "#77aadd", white: "#f4f4f4" } as const;
const NODE_R = 20;

export interface Gestures {
  onMergeRank(rank: number): void;
  onUndo(): void;
  onRestart(): void;
  onLeap(n: number): void;
  onSetParam(name: string, value: number | boolean): void;
  onForce(red: number, blue: number): void;
  onInsert(p: number, q: number): void;
}

export interface ViewSelection {
  red: number | null;
  blue: number | null;
}

export function renderGraph(
  container: HTMLElement,
  doc: StateDoc,
  highlight: Set<number>,
  marked: Set<number> = new Set(),
  onNodeClick?: (id: number) => void,
): void {
  const layout = layoutAutomaton(doc.automaton);
  container.replaceChildren(buildSvg(layout, highlight, marked, onNodeClick));
  if (layout.collapsed) {
    const note = document.createElement("p");
    note.className = "collapse-note";
    note.textContent =
      `fringe view: ${layout.hiddenStates} interior states hidden ` +
      `(graph larger than readable)`;
    container.appendChild(note);
  }
}

function buildSvg(
  layout: GraphLayout,
  highlight: Set<number>,
  marked: Set<number>,
  onNodeClick?: (id: number) => void,
): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${layout.width} ${layout.height}`);
  svg.setAttribute("width", String(layout.width));
  svg.setAttribute("height", String(layout.height));

  const place = new Map(layout.nodes.map((n) => [n.id, n]));
  for (const edge of layout.edges) {
    const from = place.get(edge.source)!;
    const to = place.get(edge.target)!;
    const group = document.createElementNS(SVG_NS, "g");
    const path = document.createElementNS(SVG_NS, "path");
    let midX: number;
    let midY: number;
    if (edge.selfLoop) {
      path.setAttribute(
        "d",
        `M ${from.x} ${from.y - NODE_R} C ${from.x - 34} ${from.y - 52}, ` +
        `${from.x + 34} ${from.y - 52}, ${from.x} ${from.y - NODE_R}`,
      );
      midX = from.x;
      midY = from.y - 48;
    } else {
      path.setAttribute("d", `M ${from.x} ${from.y} L ${to.x} ${to.y}`);
      midX = (from.x + to.x) / 2;
      midY = (from.y + to.y) / 2 - 4;
    }
    path.setAttribute("class", "edge");
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(midX));
    text.setAttribute("y", String(midY));
    text.setAttribute("class", "edge-label");
    text.textContent = edge.label;
    group.append(path, text);
    svg.appendChild(group);
  }

  for (const node of layout.nodes) {
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", "node");
    group.setAttribute("data-state", String(node.id));
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(node.x));
    circle.setAttribute("cy", String(node.y));
    circle.setAttribute("r", String(NODE_R));
    circle.setAttribute("fill", FILL[node.color]);
    if (highlight.has(node.id)) circle.setAttribute("class", "highlight");
    if (marked.has(node.id)) circle.setAttribute("class", "marked");
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(node.x));
    text.setAttribute("y", String(node.y + NODE_R + 14));
    text.setAttribute("class", "node-label");
    text.textContent = node.label;
    group.append(circle, text);
    if (onNodeClick) {
      group.addEventListener("click", () => onNodeClick(node.id));
    }
    svg.appendChild(group);
  }
  return svg;
}

export function renderCandidates(
  table: HTMLTableElement,
  doc: StateDoc,
  gestures: Gestures,
  onHover: (candidate: { red: number; blue: number } | null) => void,
): void {
  const body = document.createElement("tbody");
  for (const candidate of doc.candidates) {
    const row = document.createElement("tr");
    row.dataset.rank = String(candidate.rank);
    row.innerHTML =
      `<td>${candidate.rank}</td><td>${candidate.red}</td>` +
      `<td>${candidate.blue}</td><td>${candidate.score}</td>`;
    row.addEventListener("click", () => gestures.onMergeRank(candidate.rank));
    row.addEventListener("mouseenter", () =>
      onHover({ red: candidate.red, blue: candidate.blue }));
    row.addEventListener("mouseleave", () => onHover(null));
    body.appendChild(row);
  }
  table.querySelector("tbody")?.remove();
  table.appendChild(body);
  const caption = table.querySelector("caption");
  if (caption) {
    caption.textContent = doc.candidate_total > doc.candidates.length
      ? `candidates ${doc.candidates.length} of ${doc.candidate_total} (page ${doc.page})`
      : `candidates (${doc.candidate_total})`;
  }
}

export function renderHistory(strip: HTMLElement, doc: StateDoc): void {
  strip.replaceChildren();
  for (const token of doc.history.split(" ").filter(Boolean)) {
    const chip = document.createElement("span");
    chip.className = `token token-${token[0]}`;
    chip.textContent = token;
    strip.appendChild(chip);
  }
}

export function renderParams(form: HTMLFormElement, doc: StateDoc): void {
  for (const name of ["state_count", "symbol_count", "lowerbound"] as const) {
    const input = form.elements.namedItem(name) as HTMLInputElement | null;
    if (input) input.value = String(doc.params[name]);
  }
  const sink = form.elements.namedItem("sinkson") as HTMLInputElement | null;
  if (sink) sink.checked = doc.params.sinkson;
}

export function renderStatus(element: HTMLElement, doc: StateDoc): void {
  element.textContent =
    `step ${doc.step} | ${doc.automaton.states.length} states | ` +
    `${doc.heuristic} heuristic | undo ${doc.can_undo ? "available" : "-"}`;
}

export function renderDiff(
  container: HTMLElement,
  current: StateDoc,
  previous: StateDoc | null,
): void {
  if (!previous || current.step === 0) {
    container.hidden = true;
    container.replaceChildren();
    return;
  }
  container.hidden = false;
  const diff = diffStates(current.automaton, previous.automaton);
  const left = document.createElement("div");
  left.className = "diff-pane";
  const right = document.createElement("div");
  right.className = "diff-pane";
  const leftTitle = document.createElement("h3");
  leftTitle.textContent = `previous (step ${previous.step})`;
  const rightTitle = document.createElement("h3");
  rightTitle.textContent = `current (step ${current.step})`;
  const leftGraph = document.createElement("div");
  const rightGraph = document.createElement("div");
  left.append(leftTitle, leftGraph);
  right.append(rightTitle, rightGraph);
  renderGraph(leftGraph, previous, new Set(), new Set(diff.mergedAway));
  renderGraph(rightGraph, current, new Set(), new Set(diff.added));
  const summary = document.createElement("p");
  summary.className = "diff-summary";
  summary.textContent = diff.mergedAway.length
    ? `merged away: ${diff.mergedAway.join(", ")}`
    : "no states merged away in the last step";
  container.replaceChildren(left, right, summary);
}

export function showToast(host: HTMLElement, kind: "error" | "info", message: string): void {
  const toast = document.createElement("div");
  toast.className = `toast toast-${kind}`;
  toast.textContent = message;
  host.appendChild(toast);
  setTimeout(() => toast.remove(), 4000);
}
