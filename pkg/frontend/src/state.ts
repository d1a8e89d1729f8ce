import type { RefinePayload, TriState } from './types.js';

/**
 * Pending include/exclude selections for the triple table.
 *
 * The tri-state per row makes include and exclude mutually exclusive by
 * construction: marking one side always clears the other, and marking the
 * active side again returns the row to neutral.
 */
export class SelectionState {
  private states = new Map<number, TriState>();

  get(index: number): TriState {
    return this.states.get(index) ?? 'neutral';
  }

  /** Click on the "o" (include) or "×" (exclude) mark of one row. */
  toggle(index: number, mark: 'include' | 'exclude'): TriState {
    const next: TriState = this.get(index) === mark ? 'neutral' : mark;
    if (next === 'neutral') {
      this.states.delete(index);
    } else {
      this.states.set(index, next);
    }
    return next;
  }

  clear(): void {
    this.states.clear();
  }

  /** Drop selections that reference triples no longer in the snapshot. */
  pruneTo(tripleCount: number): void {
    for (const index of [...this.states.keys()]) {
      if (index < 0 || index >= tripleCount) {
        this.states.delete(index);
      }
    }
  }

  includes(): number[] {
    return this.collect('include');
  }

  excludes(): number[] {
    return this.collect('exclude');
  }

  private collect(mark: TriState): number[] {
    const out: number[] = [];
    for (const [index, state] of this.states) {
      if (state === mark) out.push(index);
    }
    return out.sort((a, b) => a - b);
  }
}

/**
 * Build the /refine request body from the table state and the command box.
 * Returns null when there is nothing to submit (submit stays disabled).
 */
export function buildRefinePayload(
  selections: SelectionState,
  command: string,
): RefinePayload | null {
  const include = selections.includes();
  const exclude = selections.excludes();
  const freeform = command.trim();
  if (include.length === 0 && exclude.length === 0 && freeform === '') {
    return null;
  }
  const overlap = include.filter((i) => exclude.includes(i));
  if (overlap.length > 0) {
    throw new Error(`include and exclude overlap on ${overlap.join(', ')}`);
  }
  const payload: RefinePayload = { include, exclude };
  if (freeform !== '') payload.freeform = freeform;
  return payload;
}
