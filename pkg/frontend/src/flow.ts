import { ApiClient } from "./api.js";
import { renderDiff, type DiffView } from "./diff.js";
import { buildMismatchView, type MismatchView } from "./mismatch.js";
import type { ShortcutAction } from "./shortcuts.js";
import type { PatchRecord, TaxonomyEntry, TrainReport } from "./types.js";

/**
 * Annotation session state machine.
 *
 * The queue is served by the API one patch at a time (first unlabeled), so
 * the session cannot look past an unlabeled patch without labeling it.
 * "Inconclusive" therefore defers a patch rather than burying it: the id is
 * recorded locally, the patch stays unlabeled on the server, and when the
 * cursor comes back around to a deferred patch the queue is done for this
 * pass. The completion screen then offers the inconclusive list for another
 * look. Labels are never computed here; every category shown or written
 * goes through the API.
 */

export type FlowPhase = "idle" | "loading" | "annotating" | "complete" | "failed";

export interface QueueCounts {
  labeledThisSession: number;
  inconclusive: number;
  unlabeledRemaining: number;
  totalRecords: number;
}

export interface AnnotationView {
  record: PatchRecord;
  diff: DiffView;
  summary: string | null;
  position: { index: number; total: number };
  taxonomy: TaxonomyEntry[];
}

export interface FlowState {
  phase: FlowPhase;
  current: PatchRecord | null;
  counts: QueueCounts;
  inconclusiveIds: string[];
  /** "all-labeled" when the server queue returned 204, "deferred-only" when
   *  only inconclusive patches remain reachable. */
  exhausted: "all-labeled" | "deferred-only" | null;
  lastError: string | null;
  lastTrain: TrainReport | null;
  mismatches: MismatchView | null;
}

type Listener = (state: FlowState) => void;

export class AnnotationFlow {
  taxonomy: TaxonomyEntry[] = [];
  /** Every record that passed through this session, for mismatch drill-down. */
  readonly seen = new Map<string, PatchRecord>();

  private readonly client: ApiClient;
  private readonly listeners: Listener[] = [];
  private pendingRetry: (() => Promise<void>) | null = null;
  private state: FlowState = {
    phase: "idle",
    current: null,
    counts: {
      labeledThisSession: 0,
      inconclusive: 0,
      unlabeledRemaining: 0,
      totalRecords: 0,
    },
    inconclusiveIds: [],
    exhausted: null,
    lastError: null,
    lastTrain: null,
    mismatches: null,
  };

  constructor(client: ApiClient) {
    this.client = client;
  }

  getState(): FlowState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      const i = this.listeners.indexOf(listener);
      if (i >= 0) {
        this.listeners.splice(i, 1);
      }
    };
  }

  async start(): Promise<void> {
    this.patch({ phase: "loading", lastError: null });
    try {
      const taxonomy = await this.client.taxonomy();
      assertFullTaxonomy(taxonomy);
      this.taxonomy = taxonomy;
      await this.refreshCounts();
      await this.advance();
    } catch (error) {
      this.patch({ phase: "failed", lastError: message(error) });
    }
  }

  /** Label the current patch. On API failure the patch and session state
   *  stay put and retry() re-sends the same label. */
  async label(category: number): Promise<void> {
    const current = this.state.current;
    if (!current) {
      return;
    }
    try {
      const updated = await this.client.labelPatch(current.patch_id, category);
      this.seen.set(updated.patch_id, updated);
      const inconclusiveIds = this.state.inconclusiveIds.filter(
        (id) => id !== updated.patch_id,
      );
      this.patch({
        lastError: null,
        inconclusiveIds,
        counts: {
          ...this.state.counts,
          labeledThisSession: this.state.counts.labeledThisSession + 1,
          inconclusive: inconclusiveIds.length,
          unlabeledRemaining: Math.max(0, this.state.counts.unlabeledRemaining - 1),
        },
      });
      this.pendingRetry = null;
      await this.advance();
    } catch (error) {
      this.pendingRetry = () => this.label(category);
      this.patch({ lastError: message(error) });
    }
  }

  /** Mark the current patch inconclusive: no label is written, the id joins
   *  the deferred list, and the queue moves on (or pauses, see advance). */
  async skip(): Promise<void> {
    const current = this.state.current;
    if (!current) {
      return;
    }
    if (!this.state.inconclusiveIds.includes(current.patch_id)) {
      const inconclusiveIds = [...this.state.inconclusiveIds, current.patch_id];
      this.patch({
        inconclusiveIds,
        counts: { ...this.state.counts, inconclusive: inconclusiveIds.length },
      });
    }
    await this.advance();
  }

  /** Reopen a patch by id, typically from the inconclusive list. */
  async openPatch(patchId: string): Promise<void> {
    try {
      const record = await this.client.getPatch(patchId);
      this.seen.set(record.patch_id, record);
      this.patch({ phase: "annotating", current: record, exhausted: null, lastError: null });
    } catch (error) {
      this.patch({ lastError: message(error) });
    }
  }

  async retrain(): Promise<void> {
    try {
      const report = await this.client.train();
      this.pendingRetry = null;
      this.patch({ lastTrain: report, lastError: null });
    } catch (error) {
      this.pendingRetry = () => this.retrain();
      this.patch({ lastError: message(error) });
    }
  }

  async loadMismatches(): Promise<void> {
    try {
      const rows = await this.client.mismatches();
      this.patch({
        mismatches: buildMismatchView(rows, this.taxonomy, this.seen.values()),
        lastError: null,
      });
    } catch (error) {
      this.patch({ lastError: message(error) });
    }
  }

  async retry(): Promise<void> {
    const action = this.pendingRetry;
    this.pendingRetry = null;
    if (action) {
      await action();
    }
  }

  async dispatch(action: ShortcutAction): Promise<void> {
    if (this.state.phase !== "annotating") {
      return;
    }
    if (action.type === "label") {
      await this.label(action.category);
    } else {
      await this.skip();
    }
  }

  currentView(): AnnotationView | null {
    const record = this.state.current;
    if (!record) {
      return null;
    }
    const counts = this.state.counts;
    return {
      record,
      diff: renderDiff(record.diff_raw),
      summary: record.summary_clean ?? record.summary_raw,
      position: {
        index: counts.labeledThisSession + counts.inconclusive + 1,
        total: counts.totalRecords,
      },
      taxonomy: this.taxonomy,
    };
  }

  private async advance(): Promise<void> {
    const next = await this.client.nextPatch(true);
    if (next === null) {
      await this.refreshCounts();
      this.patch({ phase: "complete", current: null, exhausted: "all-labeled" });
      return;
    }
    this.seen.set(next.patch_id, next);
    if (this.state.inconclusiveIds.includes(next.patch_id)) {
      await this.refreshCounts();
      this.patch({ phase: "complete", current: null, exhausted: "deferred-only" });
      return;
    }
    this.patch({ phase: "annotating", current: next, exhausted: null });
  }

  private async refreshCounts(): Promise<void> {
    // stats?by=manual excludes exactly the records without a manual label,
    // which is the count of unlabeled patches left in the queue.
    const stats = await this.client.stats("manual");
    const labeledTotal = stats.categories.reduce((sum, row) => sum + row.total, 0);
    this.patch({
      counts: {
        ...this.state.counts,
        unlabeledRemaining: stats.excluded,
        totalRecords: labeledTotal + stats.excluded,
      },
    });
  }

  private patch(update: Partial<FlowState>): void {
    this.state = { ...this.state, ...update };
    for (const listener of [...this.listeners]) {
      listener(this.state);
    }
  }
}

function assertFullTaxonomy(taxonomy: TaxonomyEntry[]): void {
  const ids = taxonomy.map((t) => t.id).sort((a, b) => a - b);
  const expected = Array.from({ length: 18 }, (_, i) => i);
  if (ids.length !== 18 || ids.some((id, i) => id !== expected[i])) {
    throw new Error(`taxonomy must cover exactly categories 0-17, got [${ids.join(", ")}]`);
  }
}

function message(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}
