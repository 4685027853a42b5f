/** Wire types for the session service. */

export interface AutomatonState {
  id: number;
  color: "red" | "blue" | "white";
  occurrences: number;
  accept: number;
  reject: number;
}

export interface AutomatonTransition {
  source: number;
  target: number;
  input: string;
  output: string | null;
  count: number;
}

export interface AutomatonDoc {
  mode: "dfa" | "mealy";
  start: number;
  states: AutomatonState[];
  transitions: AutomatonTransition[];
}

export interface Candidate {
  rank: number;
  red: number;
  blue: number;
  score: number;
}

export interface Params {
  state_count: number;
  symbol_count: number;
  lowerbound: number;
  sinkson: boolean;
}

export interface StateDoc {
  id: string;
  step: number;
  mode: "dfa" | "mealy";
  heuristic: string;
  params: Params;
  automaton: AutomatonDoc;
  candidates: Candidate[];
  candidate_total: number;
  page: number;
  page_size: number;
  history: string;
  can_undo: boolean;
}

export interface SessionConfig {
  heuristic: "mealy" | "edsm";
  params?: Partial<Params>;
}

export interface ApiErrorBody {
  error: string;
  message: string;
}
