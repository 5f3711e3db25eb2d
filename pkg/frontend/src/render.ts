/** SVG rendering of a laid-out skeleton graph.
 *
 * Follows the server's drawing conventions: open boxes mark the point
 * of view of always relations (tail = after, head = before),
 * directly-follows arcs carry counts with a triangular head (and a vee
 * tail when both directions were merged), never-together pairs are
 * dashed undirected edges, node fill encodes the equivalence class.
 */

import { GraphDoc } from "./types.js";
import { Layout, NODE_H, NODE_W, layoutGraph } from "./layout.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) {
    node.setAttribute(k, v);
  }
  return node;
}

function defs(): SVGDefsElement {
  const d = el("defs");
  const markers: Array<[string, string, string]> = [
    ["m-arrow", "M0,0 L10,4 L0,8 z", "filled"],
    ["m-vee", "M0,0 L10,4 L0,8 L4,4 z", "filled"],
    ["m-obox", "M1,1 H9 V9 H1 z", "open"],
  ];
  for (const [id, path, fill] of markers) {
    const marker = el("marker", {
      id,
      viewBox: "0 0 10 10",
      refX: id === "m-obox" ? "5" : "9",
      refY: id === "m-obox" ? "5" : "4",
      markerWidth: "9",
      markerHeight: "9",
      orient: "auto-start-reverse",
      markerUnits: "userSpaceOnUse",
    });
    marker.appendChild(
      el("path", {
        d: path,
        fill: fill === "open" ? "white" : "#32424e",
        stroke: "#32424e",
        "stroke-width": fill === "open" ? "1.4" : "0",
      }),
    );
    d.appendChild(marker);
  }
  return d;
}

interface Point {
  x: number;
  y: number;
}

/** Trim a segment so its ends sit on the node borders, not centres. */
function trim(a: Point, b: Point, marginA: number, marginB: number): [Point, Point] {
  const dx = b.x - a.x;
  const dy = b.y - a.y;
  const len = Math.hypot(dx, dy) || 1;
  return [
    { x: a.x + (dx / len) * marginA, y: a.y + (dy / len) * marginA },
    { x: b.x - (dx / len) * marginB, y: b.y - (dy / len) * marginB },
  ];
}

const EDGE_COLOR: Record<string, string> = {
  always: "#32424e",
  never_together: "#9a4d4d",
  directly_follows: "#6b7b86",
};

export function renderGraph(doc: GraphDoc, layout: Layout = layoutGraph(doc)): SVGSVGElement {
  const svg = el("svg", {
    viewBox: `0 0 ${layout.width} ${layout.height}`,
    width: String(layout.width),
    class: "graph",
  });
  svg.appendChild(defs());

  const centers = new Map<number, Point>();
  for (const n of layout.nodes) {
    centers.set(n.index, { x: n.x, y: n.y });
  }
  const jointAt = new Map<number, Point>();
  for (const j of layout.joints) {
    jointAt.set(j.edge, { x: j.x, y: j.y });
  }

  const markerAttrs = (tail: string, head: string): Record<string, string> => {
    const attrs: Record<string, string> = {};
    if (tail === "obox") attrs["marker-start"] = "url(#m-obox)";
    if (tail === "vee") attrs["marker-start"] = "url(#m-vee)";
    if (head === "obox") attrs["marker-end"] = "url(#m-obox)";
    if (head === "arrow") attrs["marker-end"] = "url(#m-arrow)";
    return attrs;
  };

  const margin = (NODE_W + NODE_H) / 4; // crude node-border offset

  doc.edges.forEach((edge, ei) => {
    const group = el("g", { class: `edge edge-${edge.kind}` });
    const stroke = EDGE_COLOR[edge.kind] ?? "#32424e";
    const base: Record<string, string> = {
      stroke,
      fill: "none",
      "stroke-width": "1.4",
    };
    if (edge.kind === "never_together") {
      base["stroke-dasharray"] = "6 4";
    }
    const joint = jointAt.get(ei);
    if (joint) {
      group.appendChild(el("circle", { cx: String(joint.x), cy: String(joint.y), r: "3", fill: stroke }));
      for (const s of edge.sources) {
        const [a, b] = trim(centers.get(s)!, joint, margin, 4);
        group.appendChild(
          el("line", {
            x1: String(a.x), y1: String(a.y), x2: String(b.x), y2: String(b.y),
            ...base,
            ...markerAttrs(edge.tail, "none"),
          }),
        );
      }
      for (const t of edge.targets) {
        const [a, b] = trim(joint, centers.get(t)!, 4, margin);
        group.appendChild(
          el("line", {
            x1: String(a.x), y1: String(a.y), x2: String(b.x), y2: String(b.y),
            ...base,
            ...markerAttrs("none", edge.head),
          }),
        );
      }
    } else {
      const [a, b] = trim(centers.get(edge.sources[0])!, centers.get(edge.targets[0])!, margin, margin);
      group.appendChild(
        el("line", {
          x1: String(a.x), y1: String(a.y), x2: String(b.x), y2: String(b.y),
          ...base,
          ...markerAttrs(edge.tail, edge.head),
        }),
      );
      if (edge.label) {
        const text = el("text", {
          x: String((a.x + b.x) / 2 + 6),
          y: String((a.y + b.y) / 2 - 4),
          class: "edge-label",
        });
        text.textContent = edge.label;
        group.appendChild(text);
      }
    }
    svg.appendChild(group);
  });

  for (const placed of layout.nodes) {
    const node = doc.nodes[placed.index];
    const group = el("g", { class: "node" });
    group.appendChild(
      el("rect", {
        x: String(placed.x - NODE_W / 2),
        y: String(placed.y - NODE_H / 2),
        width: String(NODE_W),
        height: String(NODE_H),
        rx: "8",
        fill: node.color,
        stroke: "#32424e",
        "stroke-width": "1.2",
      }),
    );
    const name = el("text", { x: String(placed.x), y: String(placed.y - 6), class: "node-name" });
    name.textContent = node.name;
    const summary = el("text", { x: String(placed.x), y: String(placed.y + 13), class: "node-summary" });
    summary.textContent = node.label[1];
    group.appendChild(name);
    group.appendChild(summary);
    svg.appendChild(group);
  }
  return svg;
}
