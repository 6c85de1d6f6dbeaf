// UI state machine, kept free of DOM concerns so it can be tested
// against a fake or live service without a browser.
//
// Invariants the store maintains:
// - row highlights always reflect the most recent slice response;
//   responses superseded by a newer request are discarded by sequence
//   number, never applied out of order
// - toggling the mode re-slices from the already selected event and
//   never changes the selection
// - applying a rule edit bumps the model version and, if a slice is
//   active, re-runs it against the new rules

import type { ExplorerApi } from './api.js';
import { ApiError } from './api.js';
import type { Highlight, Mode, Rule, SliceResult, TraceRow } from './types.js';

export interface ExplorerState {
  sessionId: string | null;
  rows: TraceRow[];
  mode: Mode;
  selected: number | null;
  slice: SliceResult | null;
  rules: Rule[];
  modelVersion: number;
  compact: boolean;
  error: string | null;
  ruleError: { index: number | null; message: string } | null;
}

function initialState(): ExplorerState {
  return {
    sessionId: null,
    rows: [],
    mode: 'basic',
    selected: null,
    slice: null,
    rules: [],
    modelVersion: 0,
    compact: false,
    error: null,
    ruleError: null,
  };
}

/** Extract the 1-based rule index from a service validation message like
 * "rule 2 cause: ...", if it names one. */
export function ruleIndexFromDetail(detail: string): number | null {
  const match = /\brule (\d+)\b/.exec(detail);
  return match ? Number(match[1]) - 1 : null;
}

export class ExplorerStore {
  state: ExplorerState = initialState();

  private listeners: Array<(state: ExplorerState) => void> = [];
  private sliceSeq = 0;
  private inflight = 0;
  private idleResolvers: Array<() => void> = [];

  constructor(private readonly api: ExplorerApi) {}

  subscribe(listener: (state: ExplorerState) => void): void {
    this.listeners.push(listener);
  }

  /** Resolves once no request is in flight; for tests and chained UI steps. */
  whenIdle(): Promise<void> {
    if (this.inflight === 0) return Promise.resolve();
    return new Promise((resolve) => this.idleResolvers.push(resolve));
  }

  highlightFor(no: number): Highlight {
    const slice = this.state.slice;
    if (!slice) return 'none';
    if (no === slice.start) return 'start';
    return slice.members.includes(no) ? 'in-slice' : 'out-of-slice';
  }

  /** Rows to render: all of them, or only slice members in compact view. */
  visibleRows(): TraceRow[] {
    const { rows, slice, compact } = this.state;
    if (!compact || !slice) return rows;
    return rows.filter((row) => slice.members.includes(row.no));
  }

  highlightedRowNumbers(): number[] {
    return this.state.rows
      .map((row) => row.no)
      .filter((no) => {
        const h = this.highlightFor(no);
        return h === 'start' || h === 'in-slice';
      });
  }

  async loadSession(traceText: string, modelText: string): Promise<void> {
    await this.track(async () => {
      let model: unknown;
      try {
        model = JSON.parse(modelText);
      } catch (error) {
        this.patch({ error: `model is not valid JSON: ${String(error)}` });
        return;
      }
      try {
        const loaded = await this.api.createSession(traceText, model);
        const rows = await this.api.getTrace(loaded.session_id);
        const rules = ((model as { cause_effect_rules?: Rule[] })
          .cause_effect_rules ?? []).map((rule) => structuredClone(rule));
        this.sliceSeq += 1; // invalidate any slice response still in flight
        this.patch({
          sessionId: loaded.session_id,
          rows,
          rules,
          modelVersion: loaded.model_version,
          selected: null,
          slice: null,
          error: null,
          ruleError: null,
        });
      } catch (error) {
        this.patch({ error: describeError(error) });
      }
    });
  }

  async sliceFrom(no: number): Promise<void> {
    const { sessionId } = this.state;
    if (!sessionId) return;
    this.patch({ selected: no });
    await this.runSlice(sessionId, no, this.state.mode);
  }

  async setMode(mode: Mode): Promise<void> {
    if (mode === this.state.mode) return;
    this.patch({ mode });
    const { sessionId, selected } = this.state;
    if (sessionId && selected !== null) {
      await this.runSlice(sessionId, selected, mode);
    }
  }

  toggleCompact(): void {
    this.patch({ compact: !this.state.compact });
  }

  deleteRule(index: number): void {
    const rules = this.state.rules.filter((_, i) => i !== index);
    this.patch({ rules, ruleError: null });
  }

  addRule(): void {
    const blank: Rule = { cause: { class: '' }, effect: { class: '' } };
    this.patch({ rules: [...this.state.rules, blank], ruleError: null });
  }

  setRuleField(index: number, side: 'cause' | 'effect',
               field: 'class' | 'op' | 'from' | 'to', value: string): void {
    const rules = this.state.rules.map((rule, i) => {
      if (i !== index) return rule;
      const updated = structuredClone(rule);
      if (value === '') {
        delete updated[side][field];
        if (field === 'class') updated[side].class = '';
      } else {
        updated[side][field] = value;
      }
      return updated;
    });
    this.patch({ rules });
  }

  /** PUT the rule draft; on success re-slice if a slice is active. */
  async applyRules(): Promise<void> {
    const { sessionId } = this.state;
    if (!sessionId) return;
    await this.track(async () => {
      try {
        const version = await this.api.putRules(sessionId, this.state.rules);
        this.patch({ modelVersion: version, ruleError: null });
      } catch (error) {
        if (error instanceof ApiError && error.status === 422) {
          this.patch({
            ruleError: {
              index: ruleIndexFromDetail(error.message),
              message: error.message,
            },
          });
          return;
        }
        this.patch({ error: describeError(error) });
        return;
      }
      const { selected } = this.state;
      if (selected !== null) {
        await this.runSlice(sessionId, selected, this.state.mode);
      }
    });
  }

  private async runSlice(sessionId: string, start: number, mode: Mode): Promise<void> {
    this.sliceSeq += 1;
    const seq = this.sliceSeq;
    await this.track(async () => {
      try {
        const result = await this.api.slice(sessionId, start, mode);
        if (seq !== this.sliceSeq) return; // a newer request superseded this one
        this.patch({ slice: result, error: null });
      } catch (error) {
        if (seq !== this.sliceSeq) return;
        this.patch({ error: describeError(error) });
      }
    });
  }

  private async track(work: () => Promise<void>): Promise<void> {
    this.inflight += 1;
    try {
      await work();
    } finally {
      this.inflight -= 1;
      if (this.inflight === 0) {
        const resolvers = this.idleResolvers;
        this.idleResolvers = [];
        resolvers.forEach((resolve) => resolve());
      }
    }
  }

  private patch(partial: Partial<ExplorerState>): void {
    this.state = { ...this.state, ...partial };
    this.listeners.forEach((listener) => listener(this.state));
  }
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) return error.message;
  return String(error);
}
