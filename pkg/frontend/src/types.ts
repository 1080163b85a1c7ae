export interface ArtworkSummary {
  id: string;
  artist: string;
  title: string;
  image_ref: string | null;
  annotations: Record<string, string>;
}

export interface ArtworkPage {
  total: number;
  offset: number;
  limit: number;
  items: ArtworkSummary[];
}

export interface Explanation {
  shared_variables: { variable: string; class: string; weight: number }[];
  shared_tags: string[];
}

export interface RecommendedItem {
  artwork: string;
  artist: string;
  score: number;
  explanation?: Explanation;
}

export interface RecommendationResponse {
  query: string;
  alpha: number;
  mode: string;
  items: RecommendedItem[];
}

export type Verdict = 'like' | 'dislike';

export interface FeedbackBody {
  query: string;
  item: string;
  verdict: Verdict;
  session: string;
}

export type Mode = 'diffusion' | 'direct';

export interface RecommendParams {
  alpha: number;
  mode: Mode;
  k?: number;
  explore?: number;
  seed?: number;
}

export interface ServiceStats {
  artworks: number;
  artists: number;
  visual_edges: number;
  contextual_edges: number;
  alpha_default: number;
}
