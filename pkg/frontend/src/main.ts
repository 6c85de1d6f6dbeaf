// Entry point: wire the store to the view against a service instance.
// The service URL defaults to same-origin and can be overridden with
// ?api=http://127.0.0.1:8000 when the UI is served separately.

import { ApiClient } from './api.js';
import { ExplorerStore } from './store.js';
import { ExplorerView, type ViewHandlers } from './view.js';

export function bootstrap(root: HTMLElement, apiBase: string): ExplorerStore {
  const store = new ExplorerStore(new ApiClient(apiBase));
  const handlers: ViewHandlers = {
    onLoad: (traceText, modelText) => void store.loadSession(traceText, modelText),
    onRowClick: (no) => void store.sliceFrom(no),
    onModeChange: (mode) => void store.setMode(mode),
    onCompactToggle: () => store.toggleCompact(),
    onRuleDelete: (index) => store.deleteRule(index),
    onRuleAdd: () => store.addRule(),
    onRuleField: (index, side, field, value) =>
      store.setRuleField(index, side, field, value),
    onRulesApply: () => void store.applyRules(),
  };
  new ExplorerView(root, store, handlers);
  return store;
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  const params = new URLSearchParams(window.location.search);
  const apiBase = params.get('api') ?? '';
  bootstrap(document.getElementById('app') as HTMLElement, apiBase);
}
