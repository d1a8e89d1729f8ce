import type { ReportData, SummaryData } from './types.js';

export interface SummaryPanelCallbacks {
  onEvaluate?: (version: number) => void;
  onSelectVersion?: (version: number) => void;
}

function percent(value: number): string {
  return `${Math.round(value * 1000) / 10}%`;
}

/**
 * Summary panel: version selector, text with per-sentence spans, Evaluate
 * button, metric badges, and warning styling on the sentences the report
 * flagged as possible errors (hover lists their unverified facts).
 */
export class SummaryPanel {
  constructor(
    private readonly container: HTMLElement,
    private readonly callbacks: SummaryPanelCallbacks = {},
  ) {}

  render(summaries: SummaryData[], displayedVersion: number, report: ReportData | null): void {
    this.container.textContent = '';
    if (summaries.length === 0) {
      const empty = document.createElement('p');
      empty.className = 'empty-state';
      empty.textContent = 'No summary yet.';
      this.container.appendChild(empty);
      return;
    }
    const summary = summaries[displayedVersion];

    const toolbar = document.createElement('div');
    toolbar.className = 'summary-toolbar';
    if (summaries.length > 1) {
      const selector = document.createElement('select');
      selector.className = 'version-selector';
      for (const s of summaries) {
        const option = document.createElement('option');
        option.value = String(s.version);
        option.textContent = `v${s.version} (${s.provenance})`;
        option.selected = s.version === displayedVersion;
        selector.appendChild(option);
      }
      selector.addEventListener('change', () => {
        this.callbacks.onSelectVersion?.(Number(selector.value));
      });
      toolbar.appendChild(selector);
    }
    const evaluateButton = document.createElement('button');
    evaluateButton.type = 'button';
    evaluateButton.className = 'evaluate-button';
    evaluateButton.textContent = 'Evaluate';
    evaluateButton.addEventListener('click', () => {
      this.callbacks.onEvaluate?.(summary.version);
    });
    toolbar.appendChild(evaluateButton);
    this.container.appendChild(toolbar);

    // Sentence spans; text shown is byte-equal to what the service sent.
    const flagged = new Set(report?.flagged_sentences ?? []);
    const text = document.createElement('p');
    text.className = 'summary-text';
    summary.sentences.forEach((sentence, position) => {
      if (position > 0) {
        text.appendChild(
          document.createTextNode(summary.text.slice(
            summary.sentences[position - 1].end, sentence.start,
          )),
        );
      }
      const span = document.createElement('span');
      span.dataset.sentenceIndex = String(sentence.index);
      span.textContent = sentence.text;
      if (flagged.has(sentence.index)) {
        span.className = 'possible-error';
        const reasons = (report?.facts ?? [])
          .filter((f) => f.sentence_index === sentence.index && f.verdict === 'unverified')
          .map((f) => f.text);
        span.title = `Possible error — unverified: ${reasons.join(' | ')}`;
      }
      text.appendChild(span);
    });
    this.container.appendChild(text);

    if (report !== null) {
      this.container.appendChild(renderMetricBadges(report));
    }
  }
}

export function renderMetricBadges(report: ReportData): HTMLElement {
  const badges = document.createElement('div');
  badges.className = 'metric-badges';
  const entries: Array<[string, string]> = [
    ['compression', `${Math.round(report.compression * 100) / 100}×`],
    ['coverage', percent(report.coverage)],
    ['consistency', percent(report.consistency)],
  ];
  for (const [name, value] of entries) {
    const badge = document.createElement('span');
    badge.className = `badge badge-${name}`;
    badge.textContent = `${name}: ${value}`;
    badges.appendChild(badge);
  }
  return badges;
}
