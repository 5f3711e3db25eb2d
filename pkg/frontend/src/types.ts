/** Wire types mirroring the service's JSON documents. */

export interface LogHandle {
  id: string;
  name: string;
  alphabet: string[];
  trace_count: number;
}

export interface GraphNode {
  name: string;
  kind: "regular" | "start" | "end";
  label: string[];
  class_index: number;
  color: string;
}

export interface GraphEdge {
  sources: number[];
  targets: number[];
  kind: "always" | "never_together" | "directly_follows";
  tail: "obox" | "vee" | "none";
  head: "obox" | "arrow" | "none";
  label: string;
}

export interface GraphDoc {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface Provenance {
  log: string;
  required: string[];
  forbidden: string[];
  activities: string[];
  relations: string[];
  hyper: boolean;
  trace_count: number;
  source_trace_count: number;
  cli: string;
}

export interface SkeletonResponse {
  graph: GraphDoc;
  provenance: Provenance;
}

export interface Verdict {
  id: number;
  label?: "positive" | "negative";
  reason?: string;
  witness?: string[] | null;
  required?: string[];
  forbidden?: string[];
  error?: string;
}

export interface ClassifyResponse {
  verdicts: Verdict[];
}

export const RELATION_OPTIONS = [
  { key: "equivalence", label: "equivalence" },
  { key: "always_after", label: "always after" },
  { key: "always_before", label: "always before" },
  { key: "never_together", label: "never together" },
  { key: "directly_follows", label: "directly follows" },
] as const;

export const DEFAULT_RELATIONS = ["always_after", "always_before"];
