import type { RefinePayload, ReportData, SessionSnapshot, SummaryData } from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

interface AnalyzeResponse {
  triples: SessionSnapshot['triples'];
  clusters: SessionSnapshot['clusters'];
  graph: SessionSnapshot['graph'];
  warnings: SessionSnapshot['warnings'];
}

/** Thin typed client for the session service; the UI never talks to a
 * completion provider directly. */
export class SessionApi {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  async createSession(documents: Array<{ body: string; title?: string }>): Promise<string> {
    const data = await this.request<{ session_id: string }>('POST', '/sessions', {
      documents,
    });
    return data.session_id;
  }

  analyze(sessionId: string): Promise<AnalyzeResponse> {
    return this.request('POST', `/sessions/${sessionId}/analyze`);
  }

  async summarize(sessionId: string): Promise<SummaryData> {
    const data = await this.request<{ summary: SummaryData }>(
      'POST',
      `/sessions/${sessionId}/summarize`,
    );
    return data.summary;
  }

  async refine(sessionId: string, payload: RefinePayload): Promise<SummaryData> {
    const data = await this.request<{ summary: SummaryData }>(
      'POST',
      `/sessions/${sessionId}/refine`,
      payload,
    );
    return data.summary;
  }

  evaluate(sessionId: string, version?: number): Promise<ReportData> {
    const body = version === undefined ? {} : { version };
    return this.request('POST', `/sessions/${sessionId}/evaluate`, body);
  }

  getSession(sessionId: string): Promise<SessionSnapshot> {
    return this.request('GET', `/sessions/${sessionId}`);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    if (!response.ok) {
      let message = text;
      try {
        message = (JSON.parse(text) as { error?: string }).error ?? text;
      } catch {
        // keep the raw body
      }
      throw new ApiError(response.status, message);
    }
    return JSON.parse(text) as T;
  }
}
