import type {
  ArtworkPage,
  ArtworkSummary,
  FeedbackBody,
  RecommendParams,
  RecommendationResponse,
  ServiceStats,
} from './types';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

/** Thin typed client over the recommendation service. All UI traffic goes
 * through here; parameters are forwarded verbatim so what the user sees is
 * exactly what the service receives. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async listArtworks(offset: number, limit: number): Promise<ArtworkPage> {
    const params = new URLSearchParams({ offset: String(offset), limit: String(limit) });
    return this.get(`/artworks?${params}`);
  }

  async getArtwork(id: string): Promise<ArtworkSummary> {
    return this.get(`/artworks/${encodeURIComponent(id)}`);
  }

  async recommend(id: string, params: RecommendParams): Promise<RecommendationResponse> {
    const query = new URLSearchParams({
      alpha: String(params.alpha),
      mode: params.mode,
    });
    if (params.k !== undefined) query.set('k', String(params.k));
    if (params.explore !== undefined) query.set('explore', String(params.explore));
    if (params.seed !== undefined) query.set('seed', String(params.seed));
    return this.get(`/recommend/${encodeURIComponent(id)}?${query}`);
  }

  async postFeedback(body: FeedbackBody): Promise<void> {
    const response = await this.fetchFn(`${this.baseUrl}/feedback`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      throw new ApiError(response.status, await errorMessage(response));
    }
  }

  async stats(): Promise<ServiceStats> {
    return this.get('/stats');
  }

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new ApiError(response.status, await errorMessage(response));
    }
    return (await response.json()) as T;
  }
}

async function errorMessage(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { error?: string };
    return body.error ?? `HTTP ${response.status}`;
  } catch {
    return `HTTP ${response.status}`;
  }
}
