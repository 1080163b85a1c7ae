import { ApiClient, ApiError } from './api';
import type { ArtworkPage, Mode, RecommendationResponse, Verdict } from './types';

export type View = 'browse' | 'recommend';

export interface ExplorerState {
  view: View;
  query: string | null;
  alpha: number;
  mode: Mode;
  explore: 0 | 0.4;
  session: string;
  page: ArtworkPage | null;
  recommendation: RecommendationResponse | null;
  loading: boolean;
  error: string | null;
  /** ids of items whose feedback was acknowledged this session */
  confirmed: Record<string, Verdict>;
}

export interface StoreOptions {
  pageLimit?: number;
  session?: string;
  onChange?: (state: ExplorerState) => void;
}

function newSessionId(): string {
  return `s-${Date.now().toString(36)}-${Math.random().toString(36).slice(2, 10)}`;
}

/** UI state machine. The service is the single source of truth: every
 * rendered recommendation list comes from exactly one response, stale
 * responses are discarded by request token, and the engine is only ever
 * mutated through POST /feedback. */
export class ExplorerStore {
  private state: ExplorerState;
  private readonly pageLimit: number;
  private requestToken = 0;

  constructor(
    private readonly api: ApiClient,
    options: StoreOptions = {},
  ) {
    this.pageLimit = options.pageLimit ?? 20;
    this.state = {
      view: 'browse',
      query: null,
      alpha: 0.4,
      mode: 'diffusion',
      explore: 0,
      session: options.session ?? newSessionId(),
      page: null,
      recommendation: null,
      loading: false,
      error: null,
      confirmed: {},
    };
    this.onChange = options.onChange;
  }

  private onChange?: (state: ExplorerState) => void;

  getState(): ExplorerState {
    return this.state;
  }

  pageCount(): number {
    const page = this.state.page;
    if (!page || page.total === 0) return 0;
    return Math.ceil(page.total / page.limit);
  }

  private update(patch: Partial<ExplorerState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange?.(this.state);
  }

  async loadPage(offset = 0): Promise<void> {
    this.update({ loading: true, error: null });
    try {
      const page = await this.api.listArtworks(offset, this.pageLimit);
      this.update({ page, loading: false, view: this.state.view });
    } catch (error) {
      this.update({ loading: false, error: describe(error) });
    }
  }

  /** Clicking a card (browse grid or a recommended item) makes that artwork
   * the query and requests fresh recommendations: the feedback loop. */
  async selectArtwork(id: string): Promise<void> {
    this.update({ query: id, view: 'recommend' });
    await this.refreshRecommendation();
  }

  /** Slider value is sent verbatim as the alpha parameter. */
  async setAlpha(alpha: number): Promise<void> {
    this.update({ alpha });
    if (this.state.query !== null) {
      await this.refreshRecommendation();
    }
  }

  async setMode(mode: Mode): Promise<void> {
    this.update({ mode });
    if (this.state.query !== null) {
      await this.refreshRecommendation();
    }
  }

  async setExplore(on: boolean): Promise<void> {
    this.update({ explore: on ? 0.4 : 0 });
    if (this.state.query !== null) {
      await this.refreshRecommendation();
    }
  }

  backToBrowse(): void {
    this.update({ view: 'browse', error: null });
  }

  private async refreshRecommendation(): Promise<void> {
    const query = this.state.query;
    if (query === null) return;
    const token = ++this.requestToken;
    this.update({ loading: true, error: null });
    try {
      const recommendation = await this.api.recommend(query, {
        alpha: this.state.alpha,
        mode: this.state.mode,
        explore: this.state.explore,
      });
      if (token !== this.requestToken) return; // stale response: latest wins
      this.update({ recommendation, loading: false });
    } catch (error) {
      if (token !== this.requestToken) return;
      if (error instanceof ApiError && error.status === 404) {
        // unknown artwork: fall back to browsing
        this.update({
          loading: false,
          view: 'browse',
          query: null,
          recommendation: null,
          error: describe(error),
        });
        return;
      }
      this.update({ loading: false, error: describe(error) });
    }
  }

  async sendFeedback(itemId: string, verdict: Verdict): Promise<void> {
    const query = this.state.query;
    if (query === null) return;
    try {
      await this.api.postFeedback({
        query,
        item: itemId,
        verdict,
        session: this.state.session,
      });
      this.update({ confirmed: { ...this.state.confirmed, [itemId]: verdict } });
    } catch (error) {
      this.update({ error: describe(error) });
    }
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) return error.message;
  if (error instanceof Error) return `service unreachable: ${error.message}`;
  return String(error);
}
