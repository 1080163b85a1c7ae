import type { ExplorerState } from './state';
import type { ArtworkSummary, RecommendedItem } from './types';

/** Render functions return HTML strings; the app shell owns event wiring.
 * No client-side re-ranking happens here: items render in response order. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

export function renderCard(artwork: ArtworkSummary): string {
  const image = artwork.image_ref
    ? `<img src="${escapeHtml(artwork.image_ref)}" alt="${escapeHtml(artwork.title)}"
         onerror="this.replaceWith(Object.assign(document.createElement('div'),{className:'placeholder',textContent:'no image'}))">`
    : `<div class="placeholder">no image</div>`;
  return `
    <figure class="card" data-artwork="${escapeHtml(artwork.id)}">
      ${image}
      <figcaption>
        <strong>${escapeHtml(artwork.title) || escapeHtml(artwork.id)}</strong>
        <span class="artist">${escapeHtml(artwork.artist)}</span>
      </figcaption>
    </figure>`;
}

export function renderBrowse(state: ExplorerState): string {
  if (state.error && !state.page) {
    return `<div class="banner error" data-action="retry">service unavailable, click to retry</div>`;
  }
  const page = state.page;
  if (!page) return `<div class="banner">loading…</div>`;
  if (page.total === 0) {
    return `<div class="empty">The catalog is empty. Ingest some artworks first.</div>`;
  }
  const cards = page.items.map(renderCard).join('\n');
  const pageIndex = Math.floor(page.offset / page.limit) + 1;
  const pageTotal = Math.max(1, Math.ceil(page.total / page.limit));
  return `
    <section class="grid">${cards}</section>
    <nav class="pager">
      <button data-action="prev-page" ${page.offset === 0 ? 'disabled' : ''}>previous</button>
      <span>page ${pageIndex} of ${pageTotal}</span>
      <button data-action="next-page" ${page.offset + page.limit >= page.total ? 'disabled' : ''}>next</button>
    </nav>`;
}

export function renderScoreBar(score: number, maxScore: number): string {
  const width = maxScore > 0 ? Math.max(2, Math.round((score / maxScore) * 100)) : 2;
  return `<div class="score-bar"><div class="fill" style="width:${width}%"></div></div>`;
}

export function renderChips(item: RecommendedItem): string {
  const explanation = item.explanation;
  if (!explanation) return '';
  const variableChips = explanation.shared_variables.map(
    (v) => `<span class="chip">${escapeHtml(v.variable)}: ${escapeHtml(v.class)}</span>`,
  );
  const tagChips = explanation.shared_tags.map(
    (t) => `<span class="chip tag">#${escapeHtml(t)}</span>`,
  );
  return [...variableChips, ...tagChips].join('');
}

export function renderRecommendation(state: ExplorerState): string {
  const rec = state.recommendation;
  if (state.loading) return `<div class="banner">ranking…</div>`;
  if (state.error) return `<div class="banner error">${escapeHtml(state.error)}</div>`;
  if (!rec) return `<div class="banner">pick an artwork to get recommendations</div>`;
  if (rec.items.length === 0) {
    return `<div class="empty">No neighbors found for this artwork.</div>`;
  }
  const maxScore = Math.max(...rec.items.map((item) => item.score));
  const cards = rec.items
    .map((item) => {
      const confirmed = state.confirmed[item.artwork];
      return `
      <article class="rec-card" data-artwork="${escapeHtml(item.artwork)}">
        <header>
          <strong>${escapeHtml(item.artwork)}</strong>
          <span class="artist">${escapeHtml(item.artist)}</span>
        </header>
        ${renderScoreBar(item.score, maxScore)}
        <div class="chips">${renderChips(item)}</div>
        <footer>
          <button data-action="like" data-item="${escapeHtml(item.artwork)}"
            ${confirmed === 'like' ? 'class="active"' : ''}>like</button>
          <button data-action="dislike" data-item="${escapeHtml(item.artwork)}"
            ${confirmed === 'dislike' ? 'class="active"' : ''}>dislike</button>
          ${confirmed ? `<span class="confirmed">${confirmed} recorded</span>` : ''}
        </footer>
      </article>`;
    })
    .join('\n');
  return `
    <section class="rec-panel">
      <p class="context">query: <strong>${escapeHtml(rec.query)}</strong>
        (alpha ${rec.alpha}, ${escapeHtml(rec.mode)})</p>
      ${cards}
    </section>`;
}

export function renderControls(state: ExplorerState): string {
  return `
    <div class="controls">
      <label>visual ↔ contextual
        <input type="range" id="alpha" min="0" max="1" step="0.05" value="${state.alpha}">
        <output>${state.alpha.toFixed(2)}</output>
      </label>
      <label>mode
        <select id="mode">
          <option value="diffusion" ${state.mode === 'diffusion' ? 'selected' : ''}>diffusion</option>
          <option value="direct" ${state.mode === 'direct' ? 'selected' : ''}>direct</option>
        </select>
      </label>
      <label><input type="checkbox" id="explore" ${state.explore > 0 ? 'checked' : ''}>
        explore farther artworks</label>
      <button data-action="back" ${state.view === 'browse' ? 'disabled' : ''}>back to browse</button>
    </div>`;
}
