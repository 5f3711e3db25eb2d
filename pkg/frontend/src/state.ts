/** Pure explorer state and transitions.
 *
 * All semantic content (relations, counters, classes) comes from the
 * service; this module only tracks selections and responses.  Required
 * and forbidden selections stay disjoint by construction, and graph
 * responses carry a sequence number so a slow earlier request can never
 * overwrite a newer view.
 */

import { DEFAULT_RELATIONS, GraphDoc, LogHandle, Provenance, Verdict } from "./types.js";

export interface Snapshot {
  graph: GraphDoc;
  provenance: Provenance;
}

export interface BrowserState {
  logs: LogHandle[];
  selectedLog: string | null;
  /** null means every activity is visible (the default) */
  viewActivities: string[] | null;
  relations: string[];
  hyper: boolean;
  required: string[];
  forbidden: string[];
  graph: GraphDoc | null;
  provenance: Provenance | null;
  pinned: Snapshot[];
  requestSeq: number;
  appliedSeq: number;
  error: string | null;
}

export function initialState(): BrowserState {
  return {
    logs: [],
    selectedLog: null,
    viewActivities: null,
    relations: [...DEFAULT_RELATIONS],
    hyper: false,
    required: [],
    forbidden: [],
    graph: null,
    provenance: null,
    pinned: [],
    requestSeq: 0,
    appliedSeq: 0,
    error: null,
  };
}

export function withLogs(state: BrowserState, logs: LogHandle[]): BrowserState {
  return { ...state, logs };
}

export function selectLog(state: BrowserState, id: string): BrowserState {
  // fresh log, fresh selections: all activities, always relations only
  return {
    ...initialState(),
    logs: state.logs,
    pinned: state.pinned,
    selectedLog: id,
    requestSeq: state.requestSeq,
    appliedSeq: state.appliedSeq,
  };
}

function toggle(list: string[], name: string): string[] {
  return list.includes(name) ? list.filter((x) => x !== name) : [...list, name].sort();
}

export function toggleRequired(state: BrowserState, name: string): BrowserState {
  const required = toggle(state.required, name);
  return {
    ...state,
    required,
    forbidden: state.forbidden.filter((x) => !required.includes(x)),
  };
}

export function toggleForbidden(state: BrowserState, name: string): BrowserState {
  const forbidden = toggle(state.forbidden, name);
  return {
    ...state,
    forbidden,
    required: state.required.filter((x) => !forbidden.includes(x)),
  };
}

export function setRelations(state: BrowserState, relations: string[]): BrowserState {
  return { ...state, relations: [...relations].sort() };
}

export function setViewActivities(state: BrowserState, names: string[] | null): BrowserState {
  return { ...state, viewActivities: names ? [...names] : null };
}

export function toggleHyper(state: BrowserState): BrowserState {
  return { ...state, hyper: !state.hyper };
}

/** Clicking a negative verdict's witness applies its filter sets. */
export function applyWitness(state: BrowserState, verdict: Verdict): BrowserState {
  if (!verdict.witness) {
    return state;
  }
  const required = [...(verdict.required ?? [])].sort();
  const forbidden = (verdict.forbidden ?? []).filter((x) => !required.includes(x)).sort();
  return { ...state, required, forbidden };
}

export function beginRequest(state: BrowserState): [BrowserState, number] {
  const seq = state.requestSeq + 1;
  return [{ ...state, requestSeq: seq }, seq];
}

/** Applies a response unless a newer one already landed (stale discard). */
export function applyGraph(
  state: BrowserState,
  seq: number,
  graph: GraphDoc,
  provenance: Provenance,
): BrowserState {
  if (seq <= state.appliedSeq) {
    return state;
  }
  return { ...state, appliedSeq: seq, graph, provenance, error: null };
}

/** Server errors keep the previous view and surface the message. */
export function applyError(state: BrowserState, seq: number, message: string): BrowserState {
  if (seq <= state.appliedSeq) {
    return state;
  }
  return { ...state, appliedSeq: seq, error: message };
}

export function pinCurrent(state: BrowserState): BrowserState {
  if (!state.graph || !state.provenance) {
    return state;
  }
  return {
    ...state,
    pinned: [...state.pinned, { graph: state.graph, provenance: state.provenance }],
  };
}

export function unpin(state: BrowserState, index: number): BrowserState {
  return { ...state, pinned: state.pinned.filter((_, i) => i !== index) };
}

export interface SkeletonQuery {
  required: string[];
  forbidden: string[];
  activities: string[] | null;
  relations: string[];
  hyper: boolean;
}

export function skeletonQuery(state: BrowserState): SkeletonQuery {
  return {
    required: state.required,
    forbidden: state.forbidden,
    activities: state.viewActivities,
    relations: state.relations,
    hyper: state.hyper,
  };
}
