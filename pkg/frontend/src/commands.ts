/** Gesture-to-command mapping. Every string produced here is valid under the
 * session command grammar; the UI never sends anything else. */

export type ParamName = "state_count" | "symbol_count" | "lowerbound" | "sinkson";

export function mergeRank(rank: number): string {
  return `MERGE ${assertNat(rank, 1)}`;
}

export function mergePair(red: number, blue: number): string {
  return `MERGE ${assertNat(red, 0)} ${assertNat(blue, 0)}`;
}

export function undo(): string {
  return "UNDO";
}

export function restart(): string {
  return "RESTART";
}

export function leap(n: number): string {
  return `LEAP ${assertNat(n, 1)}`;
}

export function setParam(name: ParamName, value: number | boolean): string {
  const rendered = typeof value === "boolean" ? (value ? 1 : 0) : assertNat(value, 0);
  return `SET ${name} ${rendered}`;
}

export function force(red: number, blue: number): string {
  return `FORCE ${assertNat(red, 0)} ${assertNat(blue, 0)}`;
}

export function insert(p: number, q: number): string {
  return `INSERT ${assertNat(p, 0)} ${assertNat(q, 0)}`;
}

function assertNat(value: number, min: number): number {
  if (!Number.isInteger(value) || value < min) {
    throw new Error(`expected an integer >= ${min}, got ${value}`);
  }
  return value;
}

const GRAMMAR = new RegExp(
  "^(MERGE \\d+( \\d+)?" +
  "|UNDO" +
  "|RESTART" +
  "|LEAP [1-9]\\d*" +
  "|SET (state_count|symbol_count|lowerbound|sinkson) \\d+" +
  "|FORCE \\d+ \\d+" +
  "|INSERT \\d+ \\d+)$",
);

/** Reference check used by tests: the grammar the service parses. */
export function isValidCommand(text: string): boolean {
  return GRAMMAR.test(text);
}
