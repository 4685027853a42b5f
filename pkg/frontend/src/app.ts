/** Controller: wires gestures to commands, keeps the last two state documents,
 * and re-renders wholesale after every command round trip. One command is in
 * flight at a time; gestures are disabled while it runs. */
import { ApiError, Client } from "./api.js";
import * as commands from "./commands.js";
import {
  Gestures,
  renderCandidates,
  renderDiff,
  renderGraph,
  renderHistory,
  renderParams,
  renderStatus,
  showToast,
} from "./render.js";
import type { StateDoc } from "./types.js";

export interface AppElements {
  graph: HTMLElement;
  candidates: HTMLTableElement;
  history: HTMLElement;
  params: HTMLFormElement;
  status: HTMLElement;
  diff: HTMLElement;
  toasts: HTMLElement;
  controls: HTMLElement;
}

export class App implements Gestures {
  current: StateDoc | null = null;
  previous: StateDoc | null = null;
  busy = false;
  private highlight = new Set<number>();
  private pairSelection: number[] = [];

  constructor(
    readonly client: Client,
    readonly elements: AppElements,
  ) {}

  async createSession(traces: string, heuristic: "mealy" | "edsm"): Promise<void> {
    this.current = await this.client.createSession(traces, { heuristic });
    this.previous = null;
    this.render();
  }

  async attach(sessionId: string): Promise<void> {
    this.current = await this.client.getState(sessionId);
    this.previous = null;
    this.render();
  }

  /** Send one grammar command; the response document replaces the view. */
  async issue(command: string): Promise<void> {
    if (!this.current || this.busy) return;
    this.busy = true;
    this.setControlsEnabled(false);
    try {
      const next = await this.client.postCommand(this.current.id, command);
      this.previous = this.current;
      this.current = next;
      this.render();
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        // rejected command: session unchanged, keep the graph as is
        showToast(this.elements.toasts, "error", `${error.code}: ${error.message}`);
      } else {
        showToast(this.elements.toasts, "error",
          error instanceof Error ? error.message : String(error));
      }
    } finally {
      this.busy = false;
      this.setControlsEnabled(true);
    }
  }

  // --- gestures (render.ts wires these to DOM events) ---

  onMergeRank(rank: number): void {
    void this.issue(commands.mergeRank(rank));
  }

  onUndo(): void {
    void this.issue(commands.undo());
  }

  onRestart(): void {
    void this.issue(commands.restart());
  }

  onLeap(n: number): void {
    void this.issue(commands.leap(n));
  }

  onSetParam(name: string, value: number | boolean): void {
    void this.issue(commands.setParam(name as commands.ParamName, value));
  }

  onForce(red: number, blue: number): void {
    void this.issue(commands.force(red, blue));
  }

  onInsert(p: number, q: number): void {
    void this.issue(commands.insert(p, q));
  }

  /** Two graph clicks select a state pair for FORCE / INSERT buttons. */
  onNodeClick(id: number): void {
    this.pairSelection = [...this.pairSelection.slice(-1), id];
    this.highlight = new Set(this.pairSelection);
    this.render();
  }

  selectedPair(): [number, number] | null {
    return this.pairSelection.length === 2
      ? [this.pairSelection[0], this.pairSelection[1]]
      : null;
  }

  /** Candidate-row hover highlights exactly its red and blue states. */
  onHoverCandidate(candidate: { red: number; blue: number } | null): void {
    this.highlight = candidate ? new Set([candidate.red, candidate.blue]) : new Set();
    this.renderGraphOnly();
  }

  render(): void {
    if (!this.current) return;
    this.renderGraphOnly();
    renderCandidates(this.elements.candidates, this.current, this,
      (c) => this.onHoverCandidate(c));
    renderHistory(this.elements.history, this.current);
    renderParams(this.elements.params, this.current);
    renderStatus(this.elements.status, this.current);
    renderDiff(this.elements.diff, this.current, this.previous);
  }

  private renderGraphOnly(): void {
    if (!this.current) return;
    renderGraph(this.elements.graph, this.current, this.highlight, new Set(),
      (id) => this.onNodeClick(id));
  }

  private setControlsEnabled(enabled: boolean): void {
    for (const el of this.elements.controls.querySelectorAll("button, input")) {
      (el as HTMLButtonElement | HTMLInputElement).disabled = !enabled;
    }
    this.elements.candidates.classList.toggle("disabled", !enabled);
  }
}
