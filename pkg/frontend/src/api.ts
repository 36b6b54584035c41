/**
 * Typed client for the /api/v1 JSON game service.
 *
 * Calls are serialized through a promise chain so one client never has
 * more than a single request in flight; stage transitions happen only
 * when the server's answer arrives.
 */

import { Vec3 } from "./complex.js";

export interface Stats {
  games: number;
  wins: number;
  estimate: number | null;
  ci_low: number | null;
  ci_high: number | null;
}

export interface LastResult {
  game_index: number;
  won: boolean | null;
  aborted: boolean;
}

export interface RulesConfig {
  variant: string;
  announce_precision_digits?: number;
  restart_limit?: number;
  degenerate_door?: string;
}

export interface HostSpec {
  kind: string;
  [param: string]: unknown;
}

export interface SessionState {
  session_id: string;
  stage: string;
  game_index: number;
  rules: RulesConfig;
  seed: number;
  disclose_host: boolean;
  host: HostSpec | null;
  p: Vec3 | null;
  triple: Vec3[] | null;
  chi: Vec3 | null;
  reveal: boolean | null;
  touched: boolean;
  restarts: number;
  won: boolean | null;
  last_result: LastResult | null;
  stats: Stats;
}

export interface HintResponse {
  mode: string;
  p_prime: Vec3;
}

export interface StrategyInfo {
  kind: string;
  label: string;
  params?: string[];
}

export interface StrategyCatalog {
  hosts: StrategyInfo[];
  players: StrategyInfo[];
  variants: string[];
  hint_modes: string[];
}

export interface NewSessionRequest {
  host?: HostSpec;
  rules?: RulesConfig;
  seed?: number;
  disclose_host?: boolean;
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: string;

  constructor(status: number, code: string, message: string, detail = "") {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.detail = detail;
  }
}

interface ErrorEnvelope {
  error?: { code?: string; message?: string; detail?: string };
}

export class ApiClient {
  readonly baseUrl: string;
  private chain: Promise<unknown> = Promise.resolve();

  constructor(baseUrl = "") {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const run = async (): Promise<T> => {
      const init: RequestInit = { method };
      if (body !== undefined) {
        init.headers = { "Content-Type": "application/json" };
        init.body = JSON.stringify(body);
      }
      let response: Response;
      try {
        response = await fetch(this.baseUrl + path, init);
      } catch (error) {
        const message = error instanceof Error ? error.message : String(error);
        throw new ApiError(0, "network", `service unreachable: ${message}`);
      }
      const text = await response.text();
      let payload: unknown = null;
      if (text) {
        try {
          payload = JSON.parse(text);
        } catch {
          payload = null;
        }
      }
      if (!response.ok) {
        const err = (payload as ErrorEnvelope | null)?.error;
        throw new ApiError(
          response.status,
          err?.code ?? "http_error",
          err?.message ?? `HTTP ${response.status}`,
          err?.detail ?? ""
        );
      }
      return payload as T;
    };
    const next = this.chain.then(run, run);
    this.chain = next.catch(() => undefined);
    return next;
  }

  createSession(body: NewSessionRequest): Promise<SessionState> {
    return this.request("POST", "/api/v1/sessions", body);
  }

  getSession(sessionId: string): Promise<SessionState> {
    return this.request("GET", `/api/v1/sessions/${sessionId}`);
  }

  getStats(sessionId: string): Promise<Stats & { session_id: string }> {
    return this.request("GET", `/api/v1/sessions/${sessionId}/stats`);
  }

  submitDoor(sessionId: string, phi: Vec3): Promise<SessionState> {
    return this.request("POST", `/api/v1/sessions/${sessionId}/door`, { phi });
  }

  submitFinal(
    sessionId: string,
    body: { p_prime: Vec3 } | { mode: string }
  ): Promise<SessionState> {
    return this.request("POST", `/api/v1/sessions/${sessionId}/final`, body);
  }

  hint(sessionId: string, mode: string): Promise<HintResponse> {
    const query = encodeURIComponent(mode);
    return this.request("GET", `/api/v1/sessions/${sessionId}/hint?mode=${query}`);
  }

  strategies(): Promise<StrategyCatalog> {
    return this.request("GET", "/api/v1/strategies");
  }
}
