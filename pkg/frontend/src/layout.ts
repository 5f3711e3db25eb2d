/** Layered graph layout for skeleton documents.
 *
 * Deterministic and dependency-free: directed (always / directly
 * follows) edges define layers by longest path, cycles are broken at
 * back edges, crossing reduction runs a few barycenter sweeps, and
 * hyper edges route through a synthetic joint point placed between its
 * source and target layers.  Never-together edges do not influence
 * layering; they are drawn across whatever geometry results.
 */

import { GraphDoc } from "./types.js";

export const NODE_W = 132;
export const NODE_H = 46;
const H_GAP = 36;
const V_GAP = 72;

export interface PlacedNode {
  index: number;
  x: number;
  y: number;
}

export interface PlacedJoint {
  edge: number;
  x: number;
  y: number;
}

export interface Layout {
  nodes: PlacedNode[];
  joints: PlacedJoint[];
  width: number;
  height: number;
}

interface Vertex {
  id: string;
  node?: number;
  edge?: number;
  rank: number;
  order: number;
}

export function layoutGraph(doc: GraphDoc): Layout {
  const vertices: Vertex[] = doc.nodes.map((_, i) => ({ id: `n${i}`, node: i, rank: 0, order: i }));
  const byId = new Map(vertices.map((v) => [v.id, v]));
  const succ = new Map<string, string[]>(vertices.map((v) => [v.id, []]));

  const addVertex = (v: Vertex) => {
    vertices.push(v);
    byId.set(v.id, v);
    succ.set(v.id, []);
  };

  doc.edges.forEach((edge, ei) => {
    if (edge.kind === "never_together") {
      return;
    }
    if (edge.sources.length === 1 && edge.targets.length === 1) {
      succ.get(`n${edge.sources[0]}`)!.push(`n${edge.targets[0]}`);
    } else {
      const joint: Vertex = { id: `j${ei}`, edge: ei, rank: 0, order: 0 };
      addVertex(joint);
      for (const s of edge.sources) succ.get(`n${s}`)!.push(joint.id);
      for (const t of edge.targets) succ.get(joint.id)!.push(`n${t}`);
    }
  });

  rankByLongestPath(vertices, succ);
  orderWithinRanks(vertices, succ, byId);

  // coordinates: rows by rank, rows centred on the widest one
  const rows = new Map<number, Vertex[]>();
  for (const v of vertices) {
    const row = rows.get(v.rank) ?? [];
    row.push(v);
    rows.set(v.rank, row);
  }
  const maxPerRow = Math.max(1, ...[...rows.values()].map((r) => r.length));
  const width = maxPerRow * (NODE_W + H_GAP) + H_GAP;
  const height = (Math.max(0, ...[...rows.keys()]) + 1) * (NODE_H + V_GAP) + V_GAP;

  const nodes: PlacedNode[] = [];
  const joints: PlacedJoint[] = [];
  for (const [rank, row] of rows) {
    row.sort((a, b) => a.order - b.order);
    const rowWidth = row.length * (NODE_W + H_GAP);
    const offset = (width - rowWidth) / 2 + H_GAP / 2;
    row.forEach((v, i) => {
      const x = offset + i * (NODE_W + H_GAP) + NODE_W / 2;
      const y = V_GAP / 2 + rank * (NODE_H + V_GAP) + NODE_H / 2;
      if (v.node !== undefined) {
        nodes.push({ index: v.node, x, y });
      } else {
        joints.push({ edge: v.edge!, x, y });
      }
    });
  }
  nodes.sort((a, b) => a.index - b.index);
  return { nodes, joints, width, height };
}

function rankByLongestPath(vertices: Vertex[], succ: Map<string, string[]>): void {
  // break cycles with a DFS, then take longest path from the sources
  const state = new Map<string, number>(); // 0 new, 1 open, 2 done
  const forward = new Map<string, string[]>(vertices.map((v) => [v.id, []]));

  const visit = (id: string) => {
    state.set(id, 1);
    for (const next of succ.get(id)!) {
      const s = state.get(next) ?? 0;
      if (s === 1) {
        continue; // back edge, dropped for ranking
      }
      forward.get(id)!.push(next);
      if (s === 0) {
        visit(next);
      }
    }
    state.set(id, 2);
  };
  for (const v of vertices) {
    if ((state.get(v.id) ?? 0) === 0) {
      visit(v.id);
    }
  }

  const incoming = new Map<string, number>(vertices.map((v) => [v.id, 0]));
  for (const [, targets] of forward) {
    for (const t of targets) incoming.set(t, incoming.get(t)! + 1);
  }
  const queue = vertices.filter((v) => incoming.get(v.id) === 0).map((v) => v.id);
  const rank = new Map<string, number>(queue.map((id) => [id, 0]));
  const byId = new Map(vertices.map((v) => [v.id, v]));
  while (queue.length) {
    const id = queue.shift()!;
    for (const next of forward.get(id)!) {
      rank.set(next, Math.max(rank.get(next) ?? 0, rank.get(id)! + 1));
      incoming.set(next, incoming.get(next)! - 1);
      if (incoming.get(next) === 0) {
        queue.push(next);
      }
    }
  }
  for (const [id, r] of rank) {
    byId.get(id)!.rank = r;
  }
}

function orderWithinRanks(
  vertices: Vertex[],
  succ: Map<string, string[]>,
  byId: Map<string, Vertex>,
): void {
  const pred = new Map<string, string[]>(vertices.map((v) => [v.id, []]));
  for (const [id, targets] of succ) {
    for (const t of targets) pred.get(t)!.push(id);
  }
  const sweep = (neighbours: Map<string, string[]>) => {
    const rows = new Map<number, Vertex[]>();
    for (const v of vertices) {
      (rows.get(v.rank) ?? rows.set(v.rank, []).get(v.rank)!).push(v);
    }
    for (const row of rows.values()) {
      const score = (v: Vertex) => {
        const ns = neighbours.get(v.id)!.map((id) => byId.get(id)!.order);
        return ns.length ? ns.reduce((a, b) => a + b, 0) / ns.length : v.order;
      };
      row
        .map((v) => [score(v), v] as const)
        .sort((a, b) => a[0] - b[0] || a[1].order - b[1].order)
        .forEach(([, v], i) => {
          v.order = i;
        });
    }
  };
  for (let i = 0; i < 4; i++) {
    sweep(pred);
    sweep(succ);
  }
}
