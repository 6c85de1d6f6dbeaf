// DOM rendering. The view owns no state: it rebuilds from the store on
// every change (the tables involved are small) and forwards user intent
// through the handler callbacks.

import type { ExplorerStore } from './store.js';
import type { DependencyKind, Edge, Rule } from './types.js';

export interface ViewHandlers {
  onLoad(traceText: string, modelText: string): void;
  onRowClick(no: number): void;
  onModeChange(mode: 'basic' | 'cause-effect'): void;
  onCompactToggle(): void;
  onRuleDelete(index: number): void;
  onRuleAdd(): void;
  onRuleField(index: number, side: 'cause' | 'effect',
              field: 'class' | 'op' | 'from' | 'to', value: string): void;
  onRulesApply(): void;
}

export const EDGE_COLORS: Record<DependencyKind, string> = {
  COS: '#000000',
  LRU: '#1452cc',
  LSRU: '#d97706',
  CE: '#cc1414',
};

const KIND_LEGEND: Array<[DependencyKind, string]> = [
  ['COS', 'Change-Of-State'],
  ['LRU', 'Last-Resource-Use'],
  ['LSRU', 'Last-Shared-Resource-Use'],
  ['CE', 'Cause-Effect'],
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class ExplorerView {
  private readonly statusBar: HTMLElement;
  private readonly versionBadge: HTMLElement;
  private readonly tableHost: HTMLElement;
  private readonly graphHost: HTMLElement;
  private readonly detailHost: HTMLElement;
  private readonly rulesHost: HTMLElement;
  private readonly modeInputs: HTMLInputElement[] = [];
  private readonly compactInput: HTMLInputElement;

  constructor(
    root: HTMLElement,
    private readonly store: ExplorerStore,
    private readonly handlers: ViewHandlers,
  ) {
    root.textContent = '';

    const toolbar = el('div', 'toolbar');
    toolbar.appendChild(this.buildLoadForm());
    toolbar.appendChild(this.buildModeToggle());
    this.compactInput = document.createElement('input');
    toolbar.appendChild(this.buildCompactToggle());
    this.versionBadge = el('span', 'version-badge', 'model v0');
    toolbar.appendChild(this.versionBadge);
    root.appendChild(toolbar);

    this.statusBar = el('div', 'status');
    root.appendChild(this.statusBar);

    const panes = el('div', 'panes');
    this.tableHost = el('div', 'trace-pane');
    this.graphHost = el('div', 'graph-pane');
    const side = el('div', 'side-pane');
    this.detailHost = el('div', 'detail');
    this.rulesHost = el('div', 'rules');
    side.appendChild(this.detailHost);
    side.appendChild(this.rulesHost);
    panes.appendChild(this.tableHost);
    panes.appendChild(this.graphHost);
    panes.appendChild(side);
    root.appendChild(panes);

    store.subscribe(() => this.update());
    this.update();
  }

  private buildLoadForm(): HTMLElement {
    const form = el('div', 'load-form');
    const traceInput = document.createElement('input');
    traceInput.type = 'file';
    traceInput.id = 'trace-file';
    const modelInput = document.createElement('input');
    modelInput.type = 'file';
    modelInput.id = 'model-file';
    const button = el('button', 'load-button', 'Load');
    button.addEventListener('click', async () => {
      const traceFile = traceInput.files?.[0];
      const modelFile = modelInput.files?.[0];
      if (!traceFile || !modelFile) return;
      this.handlers.onLoad(await traceFile.text(), await modelFile.text());
    });
    form.append('Trace: ', traceInput, ' Model: ', modelInput, button);
    return form;
  }

  private buildModeToggle(): HTMLElement {
    const wrap = el('span', 'mode-toggle');
    for (const mode of ['basic', 'cause-effect'] as const) {
      const label = el('label', undefined, ` ${mode} `);
      const input = document.createElement('input');
      input.type = 'radio';
      input.name = 'mode';
      input.value = mode;
      input.checked = mode === 'basic';
      input.addEventListener('change', () => {
        if (input.checked) this.handlers.onModeChange(mode);
      });
      label.prepend(input);
      wrap.appendChild(label);
      this.modeInputs.push(input);
    }
    return wrap;
  }

  private buildCompactToggle(): HTMLElement {
    const label = el('label', 'compact-toggle', ' compact');
    this.compactInput.type = 'checkbox';
    this.compactInput.addEventListener('change', () => this.handlers.onCompactToggle());
    label.prepend(this.compactInput);
    return label;
  }

  update(): void {
    const state = this.store.state;
    this.versionBadge.textContent = `model v${state.modelVersion}`;
    this.statusBar.textContent = state.error ?? this.summaryText();
    this.statusBar.classList.toggle('error', state.error !== null);
    this.modeInputs.forEach((input) => {
      input.checked = input.value === state.mode;
    });
    this.compactInput.checked = state.compact;
    this.renderTable();
    this.renderGraph();
    this.renderDetail();
    this.renderRules();
  }

  private summaryText(): string {
    const { slice, rows } = this.store.state;
    if (!slice) {
      return rows.length ? `${rows.length} events loaded` : 'no trace loaded';
    }
    return `slice from event ${slice.start}: kept ${slice.stats.slice_length} `
      + `of ${slice.stats.trace_length} events `
      + `(ratio ${slice.stats.reduction_ratio.toFixed(2)})`;
  }

  private renderTable(): void {
    this.tableHost.textContent = '';
    const rows = this.store.visibleRows();
    if (!rows.length) return;
    const table = el('table', 'trace');
    const head = el('tr');
    for (const title of ['No.', 'Proc.', 'Oper.', 'Rsrc.', 'Old State', 'New State']) {
      head.appendChild(el('th', undefined, title));
    }
    table.appendChild(head);
    for (const row of rows) {
      const tr = el('tr', `row ${this.store.highlightFor(row.no)}`);
      tr.dataset.no = String(row.no);
      for (const cell of [String(row.no), row.process, row.operation,
                          row.resource, row.old_state, row.new_state]) {
        tr.appendChild(el('td', undefined, cell));
      }
      tr.addEventListener('click', () => this.handlers.onRowClick(row.no));
      table.appendChild(tr);
    }
    this.tableHost.appendChild(table);
  }

  private renderGraph(): void {
    this.graphHost.textContent = '';
    const slice = this.store.state.slice;
    if (!slice) return;

    const legend = el('div', 'legend');
    for (const [kind, label] of KIND_LEGEND) {
      const item = el('span', 'legend-item', ` ${label} `);
      const swatch = el('span', 'swatch');
      swatch.style.background = EDGE_COLORS[kind];
      item.prepend(swatch);
      legend.appendChild(item);
    }
    this.graphHost.appendChild(legend);

    const rowGap = 26;
    const left = 150;
    const height = slice.members.length * rowGap + 10;
    const svg = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
    svg.setAttribute('width', '320');
    svg.setAttribute('height', String(height));
    svg.classList.add('slice-graph');

    const yOf = new Map<number, number>();
    slice.members.forEach((member, i) => yOf.set(member, 18 + i * rowGap));

    for (const edge of slice.edges) {
      const y1 = yOf.get(edge.from) ?? 0;
      const y2 = yOf.get(edge.to) ?? 0;
      const bulge = Math.min(140, 20 + Math.abs(y2 - y1) / 3);
      const path = document.createElementNS('http://www.w3.org/2000/svg', 'path');
      path.setAttribute('d',
        `M ${left} ${y1} C ${left + bulge} ${y1}, ${left + bulge} ${y2}, ${left} ${y2}`);
      path.setAttribute('fill', 'none');
      path.setAttribute('stroke', EDGE_COLORS[edge.kind]);
      path.setAttribute('data-kind', edge.kind);
      path.setAttribute('data-from', String(edge.from));
      path.setAttribute('data-to', String(edge.to));
      const title = document.createElementNS('http://www.w3.org/2000/svg', 'title');
      title.textContent = `${edge.kind} (${edge.from}, ${edge.to})`;
      path.appendChild(title);
      svg.appendChild(path);
    }

    const rowByNo = new Map(this.store.state.rows.map((row) => [row.no, row]));
    for (const member of slice.members) {
      const y = yOf.get(member) ?? 0;
      const row = rowByNo.get(member);
      const text = document.createElementNS('http://www.w3.org/2000/svg', 'text');
      text.setAttribute('x', '4');
      text.setAttribute('y', String(y + 4));
      text.classList.add('graph-node');
      if (member === slice.start) text.classList.add('start');
      text.textContent = row
        ? `${member}: ${row.process} ${row.operation} ${row.resource}`
        : String(member);
      svg.appendChild(text);
    }
    this.graphHost.appendChild(svg);
  }

  private renderDetail(): void {
    this.detailHost.textContent = '';
    const { slice, selected } = this.store.state;
    this.detailHost.appendChild(el('h3', undefined, 'Why is it in the slice?'));
    if (!slice || selected === null) {
      this.detailHost.appendChild(
        el('p', 'hint', 'Click a trace row to slice backward from it.'));
      return;
    }
    const incoming = slice.edges.filter((edge) => edge.to === selected);
    const outgoing = slice.edges.filter((edge) => edge.from === selected);
    const block = (title: string, edges: Edge[]) => {
      this.detailHost.appendChild(el('h4', undefined, title));
      const list = el('ul');
      if (!edges.length) list.appendChild(el('li', 'hint', '(none)'));
      for (const edge of edges) {
        const suffix = edge.base ? ` via ${edge.base}` : '';
        list.appendChild(
          el('li', undefined, `${edge.kind} (${edge.from}, ${edge.to})${suffix}`));
      }
      this.detailHost.appendChild(list);
    };
    block(`influences on event ${selected}`, incoming);
    block(`events influenced by ${selected}`, outgoing);
  }

  private renderRules(): void {
    this.rulesHost.textContent = '';
    const { rules, ruleError } = this.store.state;
    this.rulesHost.appendChild(el('h3', undefined, 'Cause-effect rules'));
    rules.forEach((rule, index) => {
      const row = el('div', 'rule-row');
      row.dataset.index = String(index);
      row.appendChild(this.patternFields(rule, index, 'cause'));
      row.appendChild(el('span', 'arrow', ' causes '));
      row.appendChild(this.patternFields(rule, index, 'effect'));
      const remove = el('button', 'rule-delete', 'delete');
      remove.addEventListener('click', () => this.handlers.onRuleDelete(index));
      row.appendChild(remove);
      if (ruleError && ruleError.index === index) {
        row.appendChild(el('div', 'field-error', ruleError.message));
      }
      this.rulesHost.appendChild(row);
    });
    if (ruleError && ruleError.index === null) {
      this.rulesHost.appendChild(el('div', 'field-error', ruleError.message));
    }
    const add = el('button', 'rule-add', 'add rule');
    add.addEventListener('click', () => this.handlers.onRuleAdd());
    const apply = el('button', 'rules-apply', 'apply rules');
    apply.addEventListener('click', () => this.handlers.onRulesApply());
    this.rulesHost.append(add, ' ', apply);
  }

  private patternFields(rule: Rule, index: number, side: 'cause' | 'effect'): HTMLElement {
    const wrap = el('span', `pattern ${side}`);
    for (const field of ['class', 'op', 'from', 'to'] as const) {
      const input = document.createElement('input');
      input.placeholder = field;
      input.size = 7;
      input.value = rule[side][field] ?? '';
      input.dataset.side = side;
      input.dataset.field = field;
      input.addEventListener('change', () =>
        this.handlers.onRuleField(index, side, field, input.value));
      wrap.appendChild(input);
    }
    return wrap;
  }
}
