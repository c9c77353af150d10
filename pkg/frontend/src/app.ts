/**
 * DOM wiring for the annotation page. All decisions live in flow.ts; this
 * module only renders FlowState and forwards clicks and keystrokes.
 */

import { ApiClient } from "./api.js";
import { resolveApiBase, saveApiBase } from "./config.js";
import { interpretKey, isEditableTarget } from "./shortcuts.js";
import { AnnotationFlow, type FlowState } from "./flow.js";

type Screen = "annotate" | "mismatches" | "settings";

let screen: Screen = "annotate";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function button(label: string, onClick: () => void, className = "btn"): HTMLButtonElement {
  const b = el("button", className, label);
  b.type = "button";
  b.addEventListener("click", onClick);
  return b;
}

function renderHeader(flow: AnnotationFlow, state: FlowState): HTMLElement {
  const header = el("header", "topbar");
  header.appendChild(el("h1", "title", "patchtriage annotation"));
  const position = el("span", "position");
  if (state.phase === "annotating" && state.current) {
    const view = flow.currentView();
    if (view) {
      position.textContent = `patch ${view.position.index} of ${view.position.total}`;
    }
  }
  header.appendChild(position);
  const nav = el("nav", "nav");
  nav.appendChild(button("Annotate", () => switchScreen(flow, "annotate")));
  nav.appendChild(
    button("Mismatches", () => {
      switchScreen(flow, "mismatches");
      void flow.loadMismatches();
    }),
  );
  nav.appendChild(button("Settings", () => switchScreen(flow, "settings")));
  header.appendChild(nav);
  return header;
}

function renderDiffTable(flow: AnnotationFlow): HTMLElement {
  const view = flow.currentView();
  const wrap = el("div", "diff");
  if (!view) {
    return wrap;
  }
  if (view.diff.empty) {
    wrap.appendChild(el("p", "diff-empty", "no textual change"));
    return wrap;
  }
  const table = el("table", "diff-table");
  for (const row of view.diff.rows) {
    const tr = el("tr", `diff-row diff-${row.kind}`);
    const marker = { header: "@", removed: "-", added: "+", separator: "", warning: "!" }[
      row.kind
    ];
    tr.appendChild(el("td", "diff-marker", marker));
    tr.appendChild(el("td", "diff-text", row.text));
    table.appendChild(tr);
  }
  wrap.appendChild(table);
  if (view.diff.warnings > 0) {
    wrap.appendChild(
      el(
        "p",
        "diff-note",
        `${view.diff.warnings} line(s) did not parse and are shown verbatim; labeling is unaffected.`,
      ),
    );
  }
  const details = el("details", "raw-diff");
  details.appendChild(el("summary", undefined, "copy source"));
  const pre = el("pre");
  pre.textContent = view.diff.raw;
  details.appendChild(pre);
  wrap.appendChild(details);
  return wrap;
}

function renderAnnotate(flow: AnnotationFlow, state: FlowState): HTMLElement {
  const main = el("main", "annotate");
  if (state.phase === "loading" || state.phase === "idle") {
    main.appendChild(el("p", "status", "loading queue..."));
    return main;
  }
  if (state.phase === "failed") {
    main.appendChild(el("p", "status error", state.lastError ?? "failed to start"));
    main.appendChild(button("Reload", () => void flow.start()));
    return main;
  }
  if (state.phase === "complete") {
    return renderComplete(flow, state);
  }
  const view = flow.currentView();
  if (!view) {
    return main;
  }
  const meta = el("div", "patch-meta");
  meta.appendChild(el("span", "patch-id", view.record.patch_id));
  if (view.record.project) {
    meta.appendChild(el("span", "patch-project", view.record.project));
  }
  if (view.record.llm) {
    meta.appendChild(el("span", "patch-llm", view.record.llm));
  }
  if (view.record.category_auto !== null) {
    meta.appendChild(el("span", "patch-auto", `auto: ${view.record.category_auto}`));
  }
  main.appendChild(meta);
  if (view.summary) {
    main.appendChild(el("p", "summary", view.summary));
  }
  main.appendChild(renderDiffTable(flow));

  const grid = el("div", "category-grid");
  for (const entry of view.taxonomy) {
    const shortcut = entry.id <= 9 ? `${entry.id}` : `shift+${entry.id - 10}`;
    const b = button(
      `${entry.id} ${entry.description} (${shortcut})`,
      () => void flow.label(entry.id),
      entry.noop ? "btn category noop" : "btn category",
    );
    grid.appendChild(b);
  }
  main.appendChild(grid);
  main.appendChild(
    button("Inconclusive (i)", () => void flow.skip(), "btn inconclusive"),
  );
  if (state.lastError) {
    const bar = el("div", "status error");
    bar.appendChild(el("span", undefined, state.lastError));
    bar.appendChild(button("Retry", () => void flow.retry()));
    main.appendChild(bar);
  }
  return main;
}

function renderComplete(flow: AnnotationFlow, state: FlowState): HTMLElement {
  const main = el("main", "complete");
  const heading =
    state.exhausted === "all-labeled"
      ? "Queue complete: every patch is labeled."
      : "Queue paused: only inconclusive patches remain reachable.";
  main.appendChild(el("h2", undefined, heading));
  const counts = state.counts;
  const list = el("ul", "counts");
  list.appendChild(el("li", undefined, `labeled this session: ${counts.labeledThisSession}`));
  list.appendChild(el("li", undefined, `inconclusive: ${counts.inconclusive}`));
  list.appendChild(el("li", undefined, `still unlabeled: ${counts.unlabeledRemaining}`));
  list.appendChild(el("li", undefined, `total records: ${counts.totalRecords}`));
  main.appendChild(list);

  if (state.inconclusiveIds.length > 0) {
    main.appendChild(el("h3", undefined, "Inconclusive"));
    const ul = el("ul", "inconclusive-list");
    for (const id of state.inconclusiveIds) {
      const li = el("li");
      li.appendChild(button(id, () => void flow.openPatch(id), "btn link"));
      ul.appendChild(li);
    }
    main.appendChild(ul);
  }

  main.appendChild(button("Retrain model", () => void flow.retrain(), "btn primary"));
  if (state.lastTrain) {
    const r = state.lastTrain;
    const report = el("dl", "train-report");
    const pairs: [string, string][] = [
      ["model version", r.model_version],
      ["held-out accuracy", r.accuracy === null ? "n/a" : r.accuracy.toFixed(3)],
      ["held-out NMI", r.nmi === null ? "n/a" : r.nmi.toFixed(3)],
      ["test size", `${r.n}`],
    ];
    for (const [k, v] of pairs) {
      report.appendChild(el("dt", undefined, k));
      report.appendChild(el("dd", undefined, v));
    }
    main.appendChild(report);
  }
  if (state.lastError) {
    const bar = el("div", "status error");
    bar.appendChild(el("span", undefined, state.lastError));
    bar.appendChild(button("Retry", () => void flow.retry()));
    main.appendChild(bar);
  }
  return main;
}

function renderMismatches(flow: AnnotationFlow, state: FlowState): HTMLElement {
  const main = el("main", "mismatches");
  main.appendChild(el("h2", undefined, "Auto vs manual mismatches"));
  const view = state.mismatches;
  if (!view) {
    main.appendChild(el("p", "status", "loading..."));
    return main;
  }
  if (view.entries.length === 0) {
    main.appendChild(el("p", undefined, "No disagreements between auto and manual labels."));
    return main;
  }
  main.appendChild(el("p", undefined, `${view.totalDisagreements} disagreeing patches`));
  for (const entry of view.entries) {
    const details = el("details", "mismatch-entry");
    const summary = el("summary");
    summary.textContent =
      `${entry.count} x auto ${entry.auto} (${entry.autoDescription}) ` +
      `vs manual ${entry.manual} (${entry.manualDescription})`;
    details.appendChild(summary);
    if (entry.patches.length === 0) {
      details.appendChild(
        el("p", "drill-note", "none of these patches were seen this session"),
      );
    } else {
      const ul = el("ul");
      for (const record of entry.patches) {
        const li = el("li");
        li.appendChild(button(record.patch_id, () => {
          switchScreen(flow, "annotate");
          void flow.openPatch(record.patch_id);
        }, "btn link"));
        if (record.summary_clean) {
          li.appendChild(el("span", "drill-summary", ` ${record.summary_clean}`));
        }
        ul.appendChild(li);
      }
      details.appendChild(ul);
    }
    main.appendChild(details);
  }
  return main;
}

function renderSettings(flow: AnnotationFlow): HTMLElement {
  const main = el("main", "settings");
  main.appendChild(el("h2", undefined, "Settings"));
  const label = el("label", undefined, "API base URL (empty for same origin): ");
  const input = el("input");
  input.type = "text";
  input.value = resolveApiBase();
  label.appendChild(input);
  main.appendChild(label);
  main.appendChild(
    button("Save and reload", () => {
      saveApiBase(input.value.trim());
      location.reload();
    }, "btn primary"),
  );
  return main;
}

function switchScreen(flow: AnnotationFlow, next: Screen): void {
  screen = next;
  render(flow, flow.getState());
}

function render(flow: AnnotationFlow, state: FlowState): void {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  root.replaceChildren();
  root.appendChild(renderHeader(flow, state));
  if (screen === "mismatches") {
    root.appendChild(renderMismatches(flow, state));
  } else if (screen === "settings") {
    root.appendChild(renderSettings(flow));
  } else {
    root.appendChild(renderAnnotate(flow, state));
  }
}

export function mount(): AnnotationFlow {
  const client = new ApiClient(resolveApiBase());
  const flow = new AnnotationFlow(client);
  flow.subscribe((state) => render(flow, state));
  document.addEventListener("keydown", (event) => {
    if (screen !== "annotate" || isEditableTarget(event.target)) {
      return;
    }
    const action = interpretKey(event);
    if (action) {
      event.preventDefault();
      void flow.dispatch(action);
    }
  });
  render(flow, flow.getState());
  void flow.start();
  return flow;
}

mount();
