// Typed client for the recognition service; the fetch function is injectable
// so tests can run without a network.

export interface Candidate {
  class_id: string;
  codepoints: string;
  distance: number;
  confidence: number;
}

export interface RecognizeResponse {
  request_id: string;
  candidates: Candidate[];
}

export interface ConvertResponse {
  request_id: string;
  old_script: string;
  new_script: string;
  notes: string[];
}

export interface SuggestResponse {
  words: string[];
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(readonly code: string, message: string) {
    super(message);
    this.name = "ServiceError";
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const code = body?.error?.code ?? `http_${response.status}`;
    const message = body?.error?.message ?? response.statusText;
    throw new ServiceError(code, message);
  }
  return body as T;
}

export class ScribeApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async recognize(strokes: number[][][], topN: number): Promise<RecognizeResponse> {
    const response = await this.fetchFn(`${this.baseUrl}/recognize`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ strokes, top_n: topN }),
    });
    return parseOrThrow<RecognizeResponse>(response);
  }

  async convert(grantha: string): Promise<ConvertResponse> {
    const response = await this.fetchFn(`${this.baseUrl}/convert`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ grantha }),
    });
    return parseOrThrow<ConvertResponse>(response);
  }

  async suggest(fragment: string, limit: number): Promise<SuggestResponse> {
    const params = new URLSearchParams({ fragment, limit: String(limit) });
    const response = await this.fetchFn(`${this.baseUrl}/suggest?${params}`);
    return parseOrThrow<SuggestResponse>(response);
  }
}
