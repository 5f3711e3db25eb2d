// @vitest-environment jsdom
/**
 * Full explorer loop against payloads captured from the real service:
 * upload/select the example log, forbid a2, rebuild, inspect the drawn
 * classes, classify the worked example, and click its witness.
 */
import { readFileSync } from "node:fs";
import { beforeEach, describe, expect, it, vi } from "vitest";

import { Explorer, ExplorerApi, createExplorer } from "../src/app.js";
import { SkeletonQuery } from "../src/state.js";
import { ClassifyResponse, LogHandle, SkeletonResponse } from "../src/types.js";

function fixture<T>(name: string): T {
  // vitest runs with the package root as cwd
  return JSON.parse(readFileSync(`tests/fixtures/${name}`, "utf-8")) as T;
}

const handle = fixture<LogHandle>("handle.json");
const skeletonDefault = fixture<SkeletonResponse>("skeleton_default.json");
const skeletonForbiddenA2 = fixture<SkeletonResponse>("skeleton_forbidden_a2.json");
const classifyWorked = fixture<ClassifyResponse>("classify_worked_example.json");

const PAGE = `
  <input type="file" id="upload-file" />
  <select id="upload-format"><option value="trace-lines">trace-lines</option></select>
  <button id="upload-button"></button>
  <select id="log-select"></select>
  <div id="error-banner" hidden></div>
  <select id="required-select" multiple></select>
  <select id="forbidden-select" multiple></select>
  <button id="rebuild-button"></button>
  <div id="graph-host"></div>
  <div id="provenance" hidden></div>
  <div id="pinned"></div>
  <select id="activities-select" multiple></select>
  <select id="constraints-select" multiple></select>
  <input type="checkbox" id="hyper-toggle" />
  <button id="pin-button"></button>
  <textarea id="classify-input"></textarea>
  <button id="classify-button"></button>
  <table><tbody id="verdict-rows"></tbody></table>
`;

function stubApi(): ExplorerApi & { skeletonCalls: SkeletonQuery[] } {
  const skeletonCalls: SkeletonQuery[] = [];
  return {
    skeletonCalls,
    listLogs: vi.fn(async () => [handle]),
    uploadLog: vi.fn(async () => handle),
    fetchSkeleton: vi.fn(async (_logId: string, query: SkeletonQuery) => {
      skeletonCalls.push(query);
      return query.forbidden.includes("a2") ? skeletonForbiddenA2 : skeletonDefault;
    }),
    classify: vi.fn(async () => classifyWorked),
  };
}

function select(id: string): HTMLSelectElement {
  return document.getElementById(id) as HTMLSelectElement;
}

async function selectLogInUi(explorer: Explorer): Promise<void> {
  const logSelect = select("log-select");
  logSelect.value = handle.id;
  logSelect.dispatchEvent(new Event("change"));
  await vi.waitFor(() => {
    if (!explorer.getState().graph) throw new Error("graph not loaded yet");
  });
}

describe("explorer loop", () => {
  let api: ReturnType<typeof stubApi>;
  let explorer: Explorer;

  beforeEach(async () => {
    document.body.innerHTML = PAGE;
    api = stubApi();
    explorer = createExplorer(api);
    await explorer.start();
  });

  it("loads stored logs and defaults to the always relations", async () => {
    expect(select("log-select").options.length).toBe(1);
    await selectLogInUi(explorer);
    expect(api.skeletonCalls[0].relations).toEqual(["always_after", "always_before"]);
    expect(api.skeletonCalls[0].forbidden).toEqual([]);
    // marker activities are offered for viewing but not for filtering
    const viewable = Array.from(select("activities-select").options).map((o) => o.value);
    expect(viewable).toContain("|>");
    const filterable = Array.from(select("forbidden-select").options).map((o) => o.value);
    expect(filterable).not.toContain("|>");
    expect(filterable).toEqual(handle.alphabet);
  });

  it("forbidding a2 and rebuilding shows a3 and a5 in one class, matching the server doc", async () => {
    await selectLogInUi(explorer);
    const forbidden = select("forbidden-select");
    Array.from(forbidden.options).forEach((o) => (o.selected = o.value === "a2"));
    forbidden.dispatchEvent(new Event("change"));
    (document.getElementById("rebuild-button") as HTMLButtonElement).click();
    await vi.waitFor(() => {
      if (explorer.getState().provenance?.forbidden.join() !== "a2") throw new Error("pending");
    });

    expect(api.skeletonCalls.at(-1)?.forbidden).toEqual(["a2"]);
    const doc = skeletonForbiddenA2.graph;
    const byName = new Map(doc.nodes.map((n) => [n.name, n]));
    expect(byName.get("a3")!.class_index).toBe(byName.get("a5")!.class_index);

    // the displayed node fills match the server's class colours
    const svg = document.querySelector("#graph-host svg")!;
    const fillOf = (name: string) => {
      const label = Array.from(svg.querySelectorAll("text.node-name")).find(
        (t) => t.textContent === name,
      )!;
      return label.parentElement!.querySelector("rect")!.getAttribute("fill");
    };
    expect(fillOf("a3")).toBe(byName.get("a3")!.color);
    expect(fillOf("a3")).toBe(fillOf("a5"));

    const footer = document.getElementById("provenance")!;
    expect(footer.textContent).toContain("forbidden: {a2}");
    expect(footer.textContent).toContain("logskeleton build");
  });

  it("classifies the worked example and clicking the witness applies its filter", async () => {
    await selectLogInUi(explorer);
    (document.getElementById("classify-input") as HTMLTextAreaElement).value =
      "a1,a4,a5,a7\na1,a2,a4,a5,a8";
    (document.getElementById("classify-button") as HTMLButtonElement).click();
    await vi.waitFor(() => {
      if (!document.querySelector("#verdict-rows tr")) throw new Error("pending");
    });

    const rows = document.querySelectorAll("#verdict-rows tr");
    expect(rows).toHaveLength(2);
    const first = rows[0].querySelectorAll("td");
    expect(first[2].textContent).toBe("negative");
    expect(first[3].textContent).toBe("eq");
    expect(first[4].textContent).toBe("(a3, a5)");
    expect(first[6].textContent).toBe("{a2}");
    expect(rows[1].querySelectorAll("td")[2].textContent).toBe("positive");

    (first[4] as HTMLTableCellElement).click();
    await vi.waitFor(() => {
      if (explorer.getState().forbidden.join() !== "a2") throw new Error("pending");
    });
    expect(explorer.getState().required).toEqual([]);
    expect(api.skeletonCalls.at(-1)?.forbidden).toEqual(["a2"]);
  });

  it("reports per-line parse errors inline while classifying the rest", async () => {
    await selectLogInUi(explorer);
    (document.getElementById("classify-input") as HTMLTextAreaElement).value =
      "a1,a4,a5,a7\na1,,broken";
    api.classify = vi.fn(async (_logId: string, lines: string[]) => {
      expect(lines).toHaveLength(2);
      return {
        verdicts: [
          classifyWorked.verdicts[0],
          { id: 2, error: "line 2: empty activity token" },
        ],
      };
    });
    (document.getElementById("classify-button") as HTMLButtonElement).click();
    await vi.waitFor(() => {
      if (document.querySelectorAll("#verdict-rows tr").length !== 2) throw new Error("pending");
    });
    const rows = document.querySelectorAll("#verdict-rows tr");
    expect(rows[1].className).toBe("row-error");
    expect(rows[1].querySelectorAll("td")[3].textContent).toContain("empty activity token");
    expect(rows[0].querySelectorAll("td")[3].textContent).toBe("eq");
  });

  it("keeps the previous view and shows a banner on server errors", async () => {
    await selectLogInUi(explorer);
    const before = explorer.getState().graph;
    api.fetchSkeleton = vi.fn(async () => {
      throw new Error("boom");
    });
    (document.getElementById("rebuild-button") as HTMLButtonElement).click();
    await vi.waitFor(() => {
      if (!explorer.getState().error) throw new Error("pending");
    });
    expect(explorer.getState().graph).toBe(before);
    const banner = document.getElementById("error-banner")!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("boom");
  });

  it("pins the current view for side-by-side comparison", async () => {
    await selectLogInUi(explorer);
    (document.getElementById("pin-button") as HTMLButtonElement).click();
    expect(document.querySelectorAll("#pinned .pinned-card")).toHaveLength(1);
    expect(document.querySelectorAll("#pinned svg")).toHaveLength(1);
  });
});
