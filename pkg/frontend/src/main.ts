/** Browser entry point: boots the console against a service base URL
 * (`?api=http://host:port`, empty for same-origin). */
import { App } from "./app.js";
import { Client } from "./api.js";

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

export function boot(): App {
  const query = new URLSearchParams(window.location.search);
  const client = new Client(query.get("api") ?? "");
  const app = new App(client, {
    graph: element("graph"),
    candidates: element<HTMLTableElement>("candidates"),
    history: element("history"),
    params: element<HTMLFormElement>("params"),
    status: element("status"),
    diff: element("diff"),
    toasts: element("toasts"),
    controls: element("controls"),
  });

  element<HTMLFormElement>("upload").addEventListener("submit", (event) => {
    event.preventDefault();
    const form = event.target as HTMLFormElement;
    const traces = (form.elements.namedItem("traces") as HTMLTextAreaElement).value;
    const heuristic = (form.elements.namedItem("heuristic") as HTMLSelectElement)
      .value as "mealy" | "edsm";
    void app.createSession(traces, heuristic);
  });

  element("undo").addEventListener("click", () => app.onUndo());
  element("restart").addEventListener("click", () => app.onRestart());
  element("leap").addEventListener("click", () => {
    const n = Number((element<HTMLInputElement>("leap-n")).value) || 1;
    app.onLeap(n);
  });
  element("force").addEventListener("click", () => {
    const pair = app.selectedPair();
    if (pair) app.onForce(pair[0], pair[1]);
  });
  element("insert").addEventListener("click", () => {
    const pair = app.selectedPair();
    if (pair) app.onInsert(pair[0], pair[1]);
  });
  element<HTMLFormElement>("params").addEventListener("submit", (event) => {
    event.preventDefault();
    const form = event.target as HTMLFormElement;
    for (const name of ["state_count", "symbol_count", "lowerbound"] as const) {
      const input = form.elements.namedItem(name) as HTMLInputElement;
      if (input.value !== "" && app.current &&
          Number(input.value) !== app.current.params[name]) {
        app.onSetParam(name, Number(input.value));
      }
    }
    const sink = form.elements.namedItem("sinkson") as HTMLInputElement;
    if (app.current && sink.checked !== app.current.params.sinkson) {
      app.onSetParam("sinkson", sink.checked);
    }
  });

  return app;
}

if (typeof document !== "undefined" && document.getElementById("graph")) {
  boot();
}
