// Thin client for the scenograph service. Edits made while the service
// is unreachable queue up and flush on the next successful contact.

import type {
  ScenarioDocument,
  SessionInfo,
  TraceJson,
  ValidationReport,
} from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, readonly code: string, message: string) {
    super(message);
  }
}

export class StaleRevision extends ApiError {}

async function expectJson(response: Response): Promise<unknown> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const { error = "Error", message = response.statusText } =
      (body ?? {}) as { error?: string; message?: string };
    if (response.status === 409) throw new StaleRevision(409, error, message);
    throw new ApiError(response.status, error, message);
  }
  return body;
}

export class ApiClient {
  readonly base: string;
  private readonly fetchImpl: FetchLike;
  online = true;
  private queue: Array<() => Promise<void>> = [];
  onOnlineChange: (online: boolean) => void = () => undefined;

  constructor(base = "/api", fetchImpl: FetchLike = (input, init) => fetch(input, init)) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  get pendingEdits(): number {
    return this.queue.length;
  }

  private setOnline(online: boolean): void {
    if (this.online !== online) {
      this.online = online;
      this.onOnlineChange(online);
    }
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    try {
      const response = await this.fetchImpl(this.base + path, init);
      this.setOnline(true);
      return response;
    } catch (error) {
      this.setOnline(false);
      throw error;
    }
  }

  async createScenario(doc: ScenarioDocument): Promise<SessionInfo> {
    const response = await this.request("/scenarios", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
    });
    return (await expectJson(response)) as SessionInfo;
  }

  async getScenario(id: string): Promise<SessionInfo> {
    const response = await this.request(`/scenarios/${id}`);
    return (await expectJson(response)) as SessionInfo;
  }

  async saveScenario(id: string, revision: number,
                     doc: ScenarioDocument): Promise<{ revision: number }> {
    const response = await this.request(`/scenarios/${id}`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ revision, scenario: doc }),
    });
    return (await expectJson(response)) as { revision: number };
  }

  async validate(id: string, inline?: ScenarioDocument): Promise<ValidationReport> {
    const response = await this.request(`/scenarios/${id}/validate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: inline ? JSON.stringify({ scenario: inline }) : "",
    });
    return (await expectJson(response)) as ValidationReport;
  }

  async run(id: string, options: { dt?: number; max_time?: number; index?: number;
                                   stride?: number } = {}): Promise<TraceJson> {
    const response = await this.request(`/scenarios/${id}/run`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(options),
    });
    return (await expectJson(response)) as TraceJson;
  }

  async exportXosc(id: string): Promise<string> {
    const response = await this.request(`/scenarios/${id}/export`, { method: "POST" });
    if (!response.ok) {
      await expectJson(response);  // throws with the structured error
    }
    return response.text();
  }

  async listModules(): Promise<Array<{ name: string; revision: string; roles: string[] }>> {
    const response = await this.request("/library/modules");
    const body = (await expectJson(response)) as { modules: Array<{
      name: string; revision: string; roles: string[] }> };
    return body.modules;
  }

  /** Queue an edit action; it runs now when online, later when not. */
  async submitEdit(action: () => Promise<void>): Promise<"applied" | "queued"> {
    this.queue.push(action);
    if (!this.online) return "queued";
    try {
      await this.flushQueue();
      return "applied";
    } catch {
      return "queued";
    }
  }

  async flushQueue(): Promise<void> {
    while (this.queue.length > 0) {
      const action = this.queue[0]!;
      await action();  // network failure keeps the action queued
      this.queue.shift();
    }
  }
}
