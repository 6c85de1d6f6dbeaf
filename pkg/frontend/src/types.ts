// Wire types for the explorer service. Shapes mirror the service's JSON
// schemas exactly; everything here is data, no behavior.

export type Mode = 'basic' | 'cause-effect';

export type DependencyKind = 'COS' | 'LRU' | 'LSRU' | 'CE';

export interface Edge {
  from: number;
  to: number;
  kind: DependencyKind;
  base?: 'LRU' | 'LSRU';
}

export interface SliceStats {
  trace_length: number;
  slice_length: number;
  reduction_ratio: number;
}

export interface SliceResult {
  start: number;
  mode: Mode;
  members: number[];
  edges: Edge[];
  discovery_edges: Edge[];
  stats: SliceStats;
}

export interface TraceRow {
  no: number;
  process: string;
  operation: string;
  resource: string;
  old_state: string;
  new_state: string;
}

export interface RulePattern {
  class: string;
  op?: string;
  from?: string;
  to?: string;
}

export interface Rule {
  cause: RulePattern;
  effect: RulePattern;
  label?: string;
}

export interface LoadResponse {
  session_id: string;
  trace_length: number;
  model_version: number;
}

export interface HistoryEntry {
  start: number;
  mode: Mode;
  model_version: number;
  trace_length: number;
  slice_length: number;
  reduction_ratio: number;
}

export type Highlight = 'start' | 'in-slice' | 'out-of-slice' | 'none';
