import { ApiError, SessionApi } from './api.js';
import { renderClusterList } from './clusterList.js';
import { GraphView } from './graphView.js';
import { buildRefinePayload } from './state.js';
import { SummaryPanel } from './summaryPanel.js';
import { TripleTable } from './tripleTable.js';
import type { ReportData, SessionSnapshot } from './types.js';

type Mode = 'basic' | 'advanced';

/**
 * Page controller. One session at a time, one in-flight mutation at a
 * time; everything rendered comes byte-for-byte from service responses.
 */
class App {
  private readonly api = new SessionApi('');
  private sessionId: string | null = null;
  private snapshot: SessionSnapshot | null = null;
  private displayedVersion = 0;
  private busy = false;
  private mode: Mode = 'advanced';

  private readonly graphView: GraphView;
  private readonly tripleTable: TripleTable;
  private readonly summaryPanel: SummaryPanel;

  constructor(private readonly root: Document) {
    this.graphView = new GraphView(
      root.querySelector('#graph') as unknown as SVGSVGElement,
      { onNodeClick: (node) => this.tripleTable.highlightEntity(node.id) },
    );
    this.tripleTable = new TripleTable(
      root.querySelector('#triple-table') as HTMLElement,
      { onSelectionChange: () => this.refreshControls() },
    );
    this.summaryPanel = new SummaryPanel(
      root.querySelector('#summary') as HTMLElement,
      {
        onEvaluate: (version) => void this.evaluate(version),
        onSelectVersion: (version) => {
          this.displayedVersion = version;
          this.renderSummary();
        },
      },
    );
    this.bind('#create-session', () => void this.createSession());
    this.bind('#analyze', () => void this.analyze());
    this.bind('#summarize', () => void this.summarize());
    this.bind('#refine', () => void this.refine());
    this.bind('#add-document', () => this.addDocumentField());
    const toggle = root.querySelector('#mode-toggle') as HTMLSelectElement;
    toggle.addEventListener('change', () => {
      this.mode = toggle.value as Mode;
      this.applyMode();
    });
    this.addDocumentField();
    this.addDocumentField();
    this.applyMode();
    this.refreshControls();
  }

  private bind(selector: string, handler: () => void): void {
    (this.root.querySelector(selector) as HTMLButtonElement).addEventListener('click', handler);
  }

  private addDocumentField(): void {
    const holder = this.root.querySelector('#documents') as HTMLElement;
    const area = this.root.createElement('textarea');
    area.className = 'document-input';
    area.placeholder = `Article ${holder.children.length + 1}`;
    holder.appendChild(area);
  }

  private documentBodies(): string[] {
    return [...this.root.querySelectorAll<HTMLTextAreaElement>('.document-input')]
      .map((a) => a.value)
      .filter((v) => v.trim() !== '');
  }

  private async withBusy(action: () => Promise<void>): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    this.refreshControls();
    this.setStatus('');
    try {
      await action();
    } catch (error) {
      this.setStatus(error instanceof ApiError ? `${error.status}: ${error.message}` : String(error));
    } finally {
      this.busy = false;
      this.refreshControls();
    }
  }

  private createSession(): Promise<void> {
    return this.withBusy(async () => {
      const bodies = this.documentBodies();
      this.sessionId = await this.api.createSession(bodies.map((body) => ({ body })));
      await this.reload();
    });
  }

  private analyze(): Promise<void> {
    return this.withBusy(async () => {
      if (!this.sessionId) return;
      await this.api.analyze(this.sessionId);
      if (this.mode === 'basic') {
        await this.api.summarize(this.sessionId);
      }
      await this.reload();
    });
  }

  private summarize(): Promise<void> {
    return this.withBusy(async () => {
      if (!this.sessionId) return;
      await this.api.summarize(this.sessionId);
      await this.reload();
      this.displayedVersion = (this.snapshot?.summaries.length ?? 1) - 1;
      this.renderSummary();
    });
  }

  private refine(): Promise<void> {
    return this.withBusy(async () => {
      if (!this.sessionId || !this.snapshot) return;
      const command = (this.root.querySelector('#command-box') as HTMLTextAreaElement).value;
      const payload = buildRefinePayload(this.tripleTable.selections, command);
      if (payload === null) return;
      this.setInlineError('#refine-error', '');
      try {
        await this.api.refine(this.sessionId, payload);
      } catch (error) {
        // rejected requests surface right beside the control
        if (error instanceof ApiError && error.status === 400) {
          this.setInlineError('#refine-error', error.message);
          return;
        }
        throw error;
      }
      this.tripleTable.selections.clear();
      (this.root.querySelector('#command-box') as HTMLTextAreaElement).value = '';
      await this.reload();
      this.displayedVersion = (this.snapshot?.summaries.length ?? 1) - 1;
      this.renderSummary();
    });
  }

  private setInlineError(selector: string, text: string): void {
    const element = this.root.querySelector(selector) as HTMLElement | null;
    if (element) element.textContent = text;
  }

  private evaluate(version: number): Promise<void> {
    return this.withBusy(async () => {
      if (!this.sessionId) return;
      await this.api.evaluate(this.sessionId, version);
      await this.reload();
    });
  }

  private async reload(): Promise<void> {
    if (!this.sessionId) return;
    this.snapshot = await this.api.getSession(this.sessionId);
    this.displayedVersion = Math.min(
      this.displayedVersion,
      Math.max(0, this.snapshot.summaries.length - 1),
    );
    this.renderAll();
  }

  private renderAll(): void {
    if (!this.snapshot) return;
    this.graphView.render(this.snapshot.graph ?? { nodes: [], edges: [] });
    this.tripleTable.render(this.snapshot.triples);
    renderClusterList(
      this.root.querySelector('#clusters') as HTMLElement,
      this.snapshot.clusters,
    );
    this.renderSummary();
    this.setStatus(`session ${this.snapshot.id} — phase ${this.snapshot.phase}`);
  }

  private renderSummary(): void {
    if (!this.snapshot) return;
    const report: ReportData | null =
      this.snapshot.reports[String(this.displayedVersion)] ?? null;
    this.summaryPanel.render(this.snapshot.summaries, this.displayedVersion, report);
  }

  private refreshControls(): void {
    const phase = this.snapshot?.phase;
    const enable = (selector: string, enabled: boolean) => {
      (this.root.querySelector(selector) as HTMLButtonElement).disabled = this.busy || !enabled;
    };
    enable('#create-session', this.documentBodies().length > 0 || this.sessionId === null);
    enable('#analyze', phase === 'created');
    enable('#summarize', phase === 'analyzed');
    const command = this.root.querySelector('#command-box') as HTMLTextAreaElement;
    let submittable = false;
    try {
      submittable =
        phase === 'summarized' &&
        buildRefinePayload(this.tripleTable.selections, command?.value ?? '') !== null;
    } catch {
      submittable = false;
    }
    enable('#refine', submittable);
  }

  private applyMode(): void {
    // Basic Mode hides the interactive panels and keeps summary + Evaluate.
    const advancedOnly = this.root.querySelectorAll<HTMLElement>('.advanced-only');
    for (const panel of advancedOnly) {
      panel.style.display = this.mode === 'advanced' ? '' : 'none';
    }
  }

  private setStatus(text: string): void {
    (this.root.querySelector('#status') as HTMLElement).textContent = text;
  }
}

export function bootstrap(root: Document = document): App {
  return new App(root);
}

function autoBootstrap(): void {
  if (document.querySelector('#graph') !== null) {
    bootstrap();
  }
}

if (typeof document !== 'undefined') {
  if (document.readyState === 'loading') {
    document.addEventListener('DOMContentLoaded', autoBootstrap);
  } else {
    autoBootstrap();
  }
}
