// Thin typed client for the explorer service. Every method maps to one
// endpoint; errors surface the service's detail string so the UI can
// show it verbatim.

import type { HistoryEntry, LoadResponse, Mode, Rule, SliceResult, TraceRow } from './types.js';

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
    this.name = 'ApiError';
  }
}

async function detailOf(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.detail === 'string') return body.detail;
    return JSON.stringify(body);
  } catch {
    return `${response.status} ${response.statusText}`;
  }
}

export interface ExplorerApi {
  createSession(traceText: string, model: unknown, sessionId?: string): Promise<LoadResponse>;
  getTrace(sessionId: string): Promise<TraceRow[]>;
  slice(sessionId: string, start: number, mode: Mode): Promise<SliceResult>;
  putRules(sessionId: string, rules: Rule[]): Promise<number>;
  getHistory(sessionId: string): Promise<HistoryEntry[]>;
}

export class ApiClient implements ExplorerApi {
  constructor(readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      throw new ApiError(response.status, await detailOf(response));
    }
    return response.json() as Promise<T>;
  }

  createSession(traceText: string, model: unknown, sessionId?: string): Promise<LoadResponse> {
    return this.request('POST', '/sessions', {
      trace_text: traceText,
      trace_format: 'tsv',
      model,
      ...(sessionId ? { session_id: sessionId } : {}),
    });
  }

  getTrace(sessionId: string): Promise<TraceRow[]> {
    return this.request('GET', `/sessions/${sessionId}/trace`);
  }

  slice(sessionId: string, start: number, mode: Mode): Promise<SliceResult> {
    return this.request('POST', `/sessions/${sessionId}/slice`, { start, mode });
  }

  async putRules(sessionId: string, rules: Rule[]): Promise<number> {
    const body = await this.request<{ model_version: number }>(
      'PUT', `/sessions/${sessionId}/rules`, rules);
    return body.model_version;
  }

  async getHistory(sessionId: string): Promise<HistoryEntry[]> {
    const body = await this.request<{ history: HistoryEntry[] }>(
      'GET', `/sessions/${sessionId}/history`);
    return body.history;
  }
}
