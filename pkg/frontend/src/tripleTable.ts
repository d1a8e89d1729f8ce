import { SelectionState } from './state.js';
import type { TripleData } from './types.js';

export interface TripleTableCallbacks {
  onSelectionChange?: () => void;
}

/**
 * The triple checkbox table: one row per extracted triple, with tri-state
 * include ("o") / exclude ("×") marks that can never both be active.
 */
export class TripleTable {
  readonly selections = new SelectionState();
  private triples: TripleData[] = [];

  constructor(
    private readonly container: HTMLElement,
    private readonly callbacks: TripleTableCallbacks = {},
  ) {}

  render(triples: TripleData[]): void {
    this.triples = triples;
    this.selections.pruneTo(triples.length);
    this.container.textContent = '';

    const table = document.createElement('table');
    table.className = 'triple-table';
    const head = table.createTHead().insertRow();
    for (const title of ['o', '×', 'Subject', 'Relation', 'Object']) {
      const th = document.createElement('th');
      th.textContent = title;
      head.appendChild(th);
    }

    const body = table.createTBody();
    for (const triple of triples) {
      const row = body.insertRow();
      row.dataset.tripleIndex = String(triple.index);
      row.appendChild(this.markCell(triple.index, 'include', 'o'));
      row.appendChild(this.markCell(triple.index, 'exclude', '×'));
      for (const text of [
        triple.subject.representative,
        triple.relation,
        triple.object.representative,
      ]) {
        const cell = row.insertCell();
        cell.textContent = text;
      }
    }
    this.container.appendChild(table);
    this.refreshMarks();
  }

  /** Highlight the rows whose subject or object is the given node. */
  highlightEntity(representative: string | null): void {
    for (const row of this.rows()) {
      const triple = this.triples[Number(row.dataset.tripleIndex)];
      const hit =
        representative !== null &&
        (triple.subject.representative === representative ||
          triple.object.representative === representative);
      row.classList.toggle('highlighted', hit);
    }
  }

  rowCount(): number {
    return this.rows().length;
  }

  private rows(): HTMLTableRowElement[] {
    return [...this.container.querySelectorAll<HTMLTableRowElement>('tbody tr')];
  }

  private markCell(index: number, mark: 'include' | 'exclude', label: string): HTMLTableCellElement {
    const cell = document.createElement('td');
    const button = document.createElement('button');
    button.type = 'button';
    button.textContent = label;
    button.className = `mark mark-${mark}`;
    button.addEventListener('click', () => {
      this.selections.toggle(index, mark);
      this.refreshMarks();
      this.callbacks.onSelectionChange?.();
    });
    cell.appendChild(button);
    return cell;
  }

  private refreshMarks(): void {
    for (const row of this.rows()) {
      const index = Number(row.dataset.tripleIndex);
      const state = this.selections.get(index);
      const [includeButton, excludeButton] = row.querySelectorAll<HTMLButtonElement>('button.mark');
      includeButton.classList.toggle('active', state === 'include');
      excludeButton.classList.toggle('active', state === 'exclude');
    }
  }
}
