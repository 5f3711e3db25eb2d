/** Explorer wiring: DOM, service calls, and state round trips.
 *
 * The pane split mirrors the filter-and-browse workflow: filters on the
 * left rebuild the skeleton from the filtered log, view selections on
 * the right change what the current skeleton shows, and the bottom
 * panel classifies pasted traces against the selected log, with each
 * negative verdict's witness clickable to apply its filter.
 *
 * The service client is injected so tests can drive the whole loop
 * against captured payloads.
 */

import { layoutGraph } from "./layout.js";
import { renderGraph } from "./render.js";
import {
  BrowserState,
  SkeletonQuery,
  applyError,
  applyGraph,
  applyWitness,
  beginRequest,
  initialState,
  pinCurrent,
  selectLog,
  setRelations,
  setViewActivities,
  skeletonQuery,
  toggleForbidden,
  toggleHyper,
  toggleRequired,
  unpin,
  withLogs,
} from "./state.js";
import { parseDocument } from "./tracelines.js";
import { ClassifyResponse, LogHandle, RELATION_OPTIONS, SkeletonResponse, Verdict } from "./types.js";

/** What the explorer needs from the service (satisfied by ApiClient). */
export interface ExplorerApi {
  listLogs(): Promise<LogHandle[]>;
  uploadLog(name: string, format: string, content: string): Promise<LogHandle>;
  fetchSkeleton(logId: string, query: SkeletonQuery): Promise<SkeletonResponse>;
  classify(logId: string, lines: string[]): Promise<ClassifyResponse>;
}

export interface Explorer {
  start(): Promise<void>;
  rebuild(): Promise<void>;
  getState(): BrowserState;
}

export function createExplorer(api: ExplorerApi): Explorer {
  let state: BrowserState = initialState();


  const $ = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

  function update(next: BrowserState): void {
    state = next;
    renderControls();
    renderView();
  }

  async function refreshLogs(selecting?: string): Promise<void> {
    const logs = await api.listLogs();
    let next = withLogs(state, logs);
    if (selecting) {
      next = selectLog(next, selecting);
    }
    update(next);
    if (selecting) {
      await rebuild();
    }
  }

  async function rebuild(): Promise<void> {
    const logId = state.selectedLog;
    if (!logId) {
      return;
    }
    const [begun, seq] = beginRequest(state);
    state = begun;
    try {
      const response = await api.fetchSkeleton(logId, skeletonQuery(state));
      update(applyGraph(state, seq, response.graph, response.provenance));
    } catch (err) {
      update(applyError(state, seq, err instanceof Error ? err.message : String(err)));
    }
  }

  function fillMultiSelect(
    select: HTMLSelectElement,
    options: string[],
    selected: (name: string) => boolean,
    disabled: (name: string) => boolean = () => false,
  ): void {
    select.innerHTML = "";
    for (const name of options) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      option.selected = selected(name);
      option.disabled = disabled(name);
      select.appendChild(option);
    }
  }

  function currentAlphabet(): string[] {
    const handle = state.logs.find((l) => l.id === state.selectedLog);
    return handle ? handle.alphabet : [];
  }

  function renderControls(): void {
    const logSelect = $<HTMLSelectElement>("log-select");
    logSelect.innerHTML = "";
    for (const log of state.logs) {
      const option = document.createElement("option");
      option.value = log.id;
      option.textContent = `${log.name} (${log.trace_count} traces, ${log.id})`;
      option.selected = log.id === state.selectedLog;
      logSelect.appendChild(option);
    }

    const alphabet = currentAlphabet();
    // filters exclude the artificial activities: they are always present
    fillMultiSelect(
      $<HTMLSelectElement>("required-select"),
      alphabet,
      (n) => state.required.includes(n),
      (n) => state.forbidden.includes(n),
    );
    fillMultiSelect(
      $<HTMLSelectElement>("forbidden-select"),
      alphabet,
      (n) => state.forbidden.includes(n),
      (n) => state.required.includes(n),
    );
    fillMultiSelect(
      $<HTMLSelectElement>("activities-select"),
      ["|>", ...alphabet, "[]"],
      (n) => state.viewActivities === null || state.viewActivities.includes(n),
    );
    const constraints = $<HTMLSelectElement>("constraints-select");
    constraints.innerHTML = "";
    for (const { key, label } of RELATION_OPTIONS) {
      const option = document.createElement("option");
      option.value = key;
      option.textContent = label;
      option.selected = state.relations.includes(key);
      constraints.appendChild(option);
    }
    $<HTMLInputElement>("hyper-toggle").checked = state.hyper;
  }

  function renderView(): void {
    const banner = $("error-banner");
    banner.textContent = state.error ?? "";
    banner.hidden = !state.error;

    const host = $("graph-host");
    host.innerHTML = "";
    if (state.graph) {
      if (state.provenance && state.provenance.trace_count === 0) {
        const caution = document.createElement("div");
        caution.className = "caution";
        caution.textContent = "The current filters remove every trace; this is the skeleton of an empty log.";
        host.appendChild(caution);
      }
      host.appendChild(renderGraph(state.graph, layoutGraph(state.graph)));
    } else {
      const hint = document.createElement("p");
      hint.className = "hint";
      hint.textContent = "Upload a log or pick one to see its skeleton.";
      host.appendChild(hint);
    }

    const footer = $("provenance");
    if (state.provenance) {
      const p = state.provenance;
      footer.hidden = false;
      footer.textContent =
        `log: ${p.log} · traces: ${p.trace_count}/${p.source_trace_count} · ` +
        `required: {${p.required.join(", ")}} · forbidden: {${p.forbidden.join(", ")}} · ` +
        `relations: ${p.relations.join(", ")} · activities: ${p.activities.join(", ")}` +
        (p.hyper ? " · hyper arcs" : "") +
        ` — reproduce: ${p.cli}`;
    } else {
      footer.hidden = true;
    }

    const pinnedHost = $("pinned");
    pinnedHost.innerHTML = "";
    state.pinned.forEach((snapshot, i) => {
      const card = document.createElement("div");
      card.className = "pinned-card";
      const bar = document.createElement("div");
      bar.className = "pinned-bar";
      const title = document.createElement("span");
      title.textContent =
        `${snapshot.provenance.log} · required {${snapshot.provenance.required.join(",")}} · ` +
        `forbidden {${snapshot.provenance.forbidden.join(",")}}`;
      const close = document.createElement("button");
      close.textContent = "✕";
      close.onclick = () => update(unpin(state, i));
      bar.appendChild(title);
      bar.appendChild(close);
      card.appendChild(bar);
      card.appendChild(renderGraph(snapshot.graph, layoutGraph(snapshot.graph)));
      pinnedHost.appendChild(card);
    });
  }

  function renderVerdicts(verdicts: Verdict[], lineFor: (id: number) => string): void {
    const tbody = $("verdict-rows");
    tbody.innerHTML = "";
    for (const verdict of verdicts) {
      const row = document.createElement("tr");
      const cells = [
        String(verdict.id),
        lineFor(verdict.id),
        verdict.error ? "parse error" : verdict.label ?? "",
        verdict.error ?? verdict.reason ?? "",
        verdict.witness ? `(${verdict.witness.join(", ")})` : "",
        verdict.required?.length ? `{${verdict.required.join(", ")}}` : "",
        verdict.forbidden?.length ? `{${verdict.forbidden.join(", ")}}` : "",
      ];
      cells.forEach((value, i) => {
        const cell = document.createElement("td");
        cell.textContent = value;
        if (i === 4 && verdict.witness) {
          cell.className = "witness";
          cell.title = "apply this filter to the browser";
          cell.onclick = async () => {
            update(applyWitness(state, verdict));
            await rebuild();
          };
        }
        row.appendChild(cell);
      });
      row.className = verdict.error ? "row-error" : `row-${verdict.label}`;
      tbody.appendChild(row);
    }
  }

  function wire(): void {
    $("upload-button").onclick = async () => {
      const file = $<HTMLInputElement>("upload-file").files?.[0];
      if (!file) {
        return;
      }
      const format = $<HTMLSelectElement>("upload-format").value;
      try {
        const handle = await api.uploadLog(file.name, format, await file.text());
        await refreshLogs(handle.id);
      } catch (err) {
        const [next, seq] = beginRequest(state);
        update(applyError(next, seq, String(err)));
      }
    };

    $<HTMLSelectElement>("log-select").onchange = async (ev) => {
      update(selectLog(state, (ev.target as HTMLSelectElement).value));
      await rebuild();
    };

    $<HTMLSelectElement>("required-select").onchange = (ev) => {
      const select = ev.target as HTMLSelectElement;
      const chosen = new Set(Array.from(select.selectedOptions).map((o) => o.value));
      let next = state;
      for (const name of currentAlphabet()) {
        if (chosen.has(name) !== next.required.includes(name)) {
          next = toggleRequired(next, name);
        }
      }
      update(next);
    };

    $<HTMLSelectElement>("forbidden-select").onchange = (ev) => {
      const select = ev.target as HTMLSelectElement;
      const chosen = new Set(Array.from(select.selectedOptions).map((o) => o.value));
      let next = state;
      for (const name of currentAlphabet()) {
        if (chosen.has(name) !== next.forbidden.includes(name)) {
          next = toggleForbidden(next, name);
        }
      }
      update(next);
    };

    $<HTMLSelectElement>("activities-select").onchange = async (ev) => {
      const select = ev.target as HTMLSelectElement;
      const chosen = Array.from(select.selectedOptions).map((o) => o.value);
      const all = select.options.length === chosen.length;
      update(setViewActivities(state, all ? null : chosen));
      await rebuild();
    };

    $<HTMLSelectElement>("constraints-select").onchange = async (ev) => {
      const select = ev.target as HTMLSelectElement;
      update(setRelations(state, Array.from(select.selectedOptions).map((o) => o.value)));
      await rebuild();
    };

    $<HTMLInputElement>("hyper-toggle").onchange = async () => {
      update(toggleHyper(state));
      await rebuild();
    };

    $("rebuild-button").onclick = () => void rebuild();
    $("pin-button").onclick = () => update(pinCurrent(state));

    $("classify-button").onclick = async () => {
      if (!state.selectedLog) {
        return;
      }
      const text = $<HTMLTextAreaElement>("classify-input").value;
      const parsed = parseDocument(text);
      const lines = parsed.map((p) => p.raw);
      const localErrors = new Map(
        parsed.flatMap((p, i) => (p.kind === "error" ? [[i, p.message] as const] : [])),
      );
      try {
        const response = await api.classify(state.selectedLog, lines);
        const verdicts = response.verdicts.map((v, i) => {
          const local = localErrors.get(i);
          return local && !v.error ? { ...v, error: local } : v;
        });
        renderVerdicts(verdicts, (id) => lines[id - 1] ?? "");
      } catch (err) {
        const [next, seq] = beginRequest(state);
        update(applyError(next, seq, String(err)));
      }
    };
  }

  async function start(): Promise<void> {
    wire();
    renderControls();
    renderView();
    try {
      await refreshLogs();
    } catch {
      const [next, seq] = beginRequest(state);
      update(applyError(next, seq, "service unreachable"));
    }
  }

  return { start, rebuild, getState: () => state };
}
