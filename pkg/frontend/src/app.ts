import { ApiClient } from './api';
import { ExplorerStore } from './state';
import { renderBrowse, renderControls, renderRecommendation } from './views';

/** Browser bootstrap: wires the store to the DOM. The service base URL comes
 * from ?service=... or defaults to same-origin. */
export function mount(root: HTMLElement, serviceUrl?: string): ExplorerStore {
  const base =
    serviceUrl ??
    new URLSearchParams(window.location.search).get('service') ??
    '';
  const api = new ApiClient(base);
  const store = new ExplorerStore(api, { onChange: () => render() });

  function render(): void {
    const state = store.getState();
    root.innerHTML = `
      ${renderControls(state)}
      <main>${state.view === 'browse' ? renderBrowse(state) : renderRecommendation(state)}</main>`;
    const alpha = root.querySelector<HTMLInputElement>('#alpha');
    alpha?.addEventListener('change', () => void store.setAlpha(Number(alpha.value)));
    const mode = root.querySelector<HTMLSelectElement>('#mode');
    mode?.addEventListener('change', () =>
      void store.setMode(mode.value === 'direct' ? 'direct' : 'diffusion'),
    );
    const explore = root.querySelector<HTMLInputElement>('#explore');
    explore?.addEventListener('change', () => void store.setExplore(explore.checked));
  }

  root.addEventListener('click', (event) => {
    const target = event.target as HTMLElement;
    const action = target.closest<HTMLElement>('[data-action]')?.dataset.action;
    const state = store.getState();
    if (action === 'like' || action === 'dislike') {
      const item = target.closest<HTMLElement>('[data-item]')?.dataset.item;
      if (item) void store.sendFeedback(item, action);
      return;
    }
    if (action === 'back') {
      store.backToBrowse();
      return;
    }
    if (action === 'retry') {
      void store.loadPage(0);
      return;
    }
    if (action === 'prev-page' && state.page) {
      void store.loadPage(Math.max(0, state.page.offset - state.page.limit));
      return;
    }
    if (action === 'next-page' && state.page) {
      void store.loadPage(state.page.offset + state.page.limit);
      return;
    }
    const card = target.closest<HTMLElement>('[data-artwork]');
    if (card?.dataset.artwork) {
      void store.selectArtwork(card.dataset.artwork);
    }
  });

  render();
  void store.loadPage(0);
  return store;
}

declare global {
  interface Window {
    artExplorer?: ExplorerStore;
  }
}

if (typeof document !== 'undefined') {
  const root = document.getElementById('app');
  if (root) {
    window.artExplorer = mount(root);
  }
}
