import type { ClusterData } from './types.js';

/** Entity-cluster inspector: one row per cluster, representative first. */
export function renderClusterList(container: HTMLElement, clusters: ClusterData[]): void {
  container.textContent = '';
  if (clusters.length === 0) {
    const empty = document.createElement('p');
    empty.className = 'empty-state';
    empty.textContent = 'No entity clusters yet.';
    container.appendChild(empty);
    return;
  }
  const list = document.createElement('ul');
  list.className = 'cluster-list';
  for (const cluster of clusters) {
    const item = document.createElement('li');
    item.dataset.representative = cluster.representative;
    const rep = document.createElement('strong');
    rep.textContent = cluster.representative;
    item.appendChild(rep);
    const others = cluster.mentions
      .map((m) => m.surface)
      .filter((s) => s !== cluster.representative);
    if (others.length > 0) {
      item.appendChild(document.createTextNode(` — also: ${others.join(', ')}`));
    }
    list.appendChild(item);
  }
  container.appendChild(list);
}
