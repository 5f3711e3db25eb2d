import { describe, expect, it } from "vitest";

import {
  applyError,
  applyGraph,
  applyWitness,
  beginRequest,
  initialState,
  pinCurrent,
  selectLog,
  skeletonQuery,
  toggleForbidden,
  toggleRequired,
  unpin,
  withLogs,
} from "../src/state.js";
import { GraphDoc, Provenance, Verdict } from "../src/types.js";

const graph: GraphDoc = { nodes: [], edges: [] };
const provenance: Provenance = {
  log: "L1",
  required: [],
  forbidden: ["a2"],
  activities: [],
  relations: ["always_after", "always_before"],
  hyper: false,
  trace_count: 5,
  source_trace_count: 20,
  cli: "logskeleton build L1 --forbidden a2",
};

describe("defaults", () => {
  it("starts with the always relations and every activity visible", () => {
    const state = initialState();
    expect(state.relations).toEqual(["always_after", "always_before"]);
    expect(state.viewActivities).toBeNull();
    expect(state.hyper).toBe(false);
  });

  it("selecting a log resets filters but keeps pins and stored logs", () => {
    let state = withLogs(initialState(), [
      { id: "log1", name: "L1", alphabet: ["a1"], trace_count: 20 },
    ]);
    state = toggleRequired(state, "a1");
    state = pinCurrent({ ...state, graph, provenance });
    const next = selectLog(state, "log1");
    expect(next.required).toEqual([]);
    expect(next.selectedLog).toBe("log1");
    expect(next.pinned).toHaveLength(1);
    expect(next.logs).toHaveLength(1);
  });
});

describe("filter selections", () => {
  it("keeps required and forbidden disjoint", () => {
    let state = initialState();
    state = toggleRequired(state, "a2");
    state = toggleForbidden(state, "a2");
    expect(state.forbidden).toEqual(["a2"]);
    expect(state.required).toEqual([]);
    state = toggleRequired(state, "a2");
    expect(state.required).toEqual(["a2"]);
    expect(state.forbidden).toEqual([]);
  });

  it("toggling twice removes the selection", () => {
    let state = toggleForbidden(initialState(), "a2");
    state = toggleForbidden(state, "a2");
    expect(state.forbidden).toEqual([]);
  });
});

describe("witness application", () => {
  it("applies the verdict's filter sets", () => {
    const verdict: Verdict = {
      id: 1,
      label: "negative",
      reason: "eq",
      witness: ["a3", "a5"],
      required: [],
      forbidden: ["a2"],
    };
    const state = applyWitness(initialState(), verdict);
    expect(state.forbidden).toEqual(["a2"]);
    expect(state.required).toEqual([]);
  });

  it("ignores positive verdicts", () => {
    const verdict: Verdict = { id: 1, label: "positive", reason: "+", witness: null };
    const before = toggleRequired(initialState(), "a1");
    expect(applyWitness(before, verdict)).toBe(before);
  });
});

describe("request sequencing", () => {
  it("discards stale responses", () => {
    let state = initialState();
    let first: number;
    let second: number;
    [state, first] = beginRequest(state);
    [state, second] = beginRequest(state);
    state = applyGraph(state, second, graph, provenance);
    const afterStale = applyGraph(state, first, { nodes: [], edges: [] }, {
      ...provenance,
      log: "stale",
    });
    expect(afterStale.provenance?.log).toBe("L1");
  });

  it("keeps the previous view on errors", () => {
    let state = initialState();
    let seq: number;
    [state, seq] = beginRequest(state);
    state = applyGraph(state, seq, graph, provenance);
    [state, seq] = beginRequest(state);
    state = applyError(state, seq, "500");
    expect(state.graph).toBe(graph);
    expect(state.error).toBe("500");
  });
});

describe("snapshots", () => {
  it("pins and unpins the current view", () => {
    let state = { ...initialState(), graph, provenance };
    state = pinCurrent(state);
    state = pinCurrent(state);
    expect(state.pinned).toHaveLength(2);
    state = unpin(state, 0);
    expect(state.pinned).toHaveLength(1);
  });

  it("pinning without a view is a no-op", () => {
    const state = initialState();
    expect(pinCurrent(state)).toBe(state);
  });
});

describe("query building", () => {
  it("reflects all selections", () => {
    let state = initialState();
    state = toggleForbidden(state, "a2");
    state = { ...state, hyper: true, viewActivities: ["a1", "a2"] };
    expect(skeletonQuery(state)).toEqual({
      required: [],
      forbidden: ["a2"],
      activities: ["a1", "a2"],
      relations: ["always_after", "always_before"],
      hyper: true,
    });
  });
});
