/** Typed client for the session service routes. */
import type { SessionConfig, StateDoc } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "error";
  let message = `${response.status}`;
  try {
    const body = await response.json();
    code = body.error ?? code;
    message = body.message ?? message;
  } catch {
    // non-JSON error body: keep the status text
  }
  return new ApiError(response.status, code, message);
}

export class Client {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  createSession(traces: string, config: SessionConfig): Promise<StateDoc> {
    return this.request<StateDoc>("/api/sessions", {
      method: "POST",
      body: JSON.stringify({ traces, ...config }),
    });
  }

  getState(id: string, page = 1): Promise<StateDoc> {
    return this.request<StateDoc>(`/api/sessions/${id}?page=${page}`);
  }

  postCommand(id: string, command: string): Promise<StateDoc> {
    return this.request<StateDoc>(`/api/sessions/${id}/commands`, {
      method: "POST",
      body: JSON.stringify({ command }),
    });
  }

  async getDot(id: string, which: "current" | "previous"): Promise<string> {
    const response = await fetch(`${this.baseUrl}/api/sessions/${id}/dot?which=${which}`);
    if (!response.ok) throw await parseError(response);
    return response.text();
  }

  async deleteSession(id: string): Promise<void> {
    const response = await fetch(`${this.baseUrl}/api/sessions/${id}`, { method: "DELETE" });
    if (!response.ok) throw await parseError(response);
  }
}
