/** Per-feature constraint editor plus module toggles and run controls.
 *
 * Drafts are owned by the caller and persist across instance switches; the
 * editor renders one row per feature, offering only the constraint kinds
 * the schema permits for that feature. Numeric bounds widgets are capped by
 * the feature's training range; `fix` disables value controls entirely.
 */

import type { ConstraintDraft, Schema, SchemaFeature } from "../types.js";
import { kindsFor, validateDraft, validateDrafts, validateModules } from "../validation.js";

export interface EditorState {
  drafts: Map<string, ConstraintDraft>;
  modules: Set<number>;
  N: number;
  seed: number;
}

export function defaultDraft(feature: SchemaFeature): ConstraintDraft {
  const draft: ConstraintDraft = {
    feature: feature.name,
    kind: "fix",
    importance: 1.0,
    enabled: false,
  };
  if (feature.kind === "numerical" && feature.range) {
    draft.lb = feature.range[0];
    draft.ub = feature.range[1];
  } else if (feature.categories) {
    draft.values = [...feature.categories];
  }
  return draft;
}

export interface EditorOptions {
  onRun: () => void;
  onChange?: () => void;
}

export function renderConstraintEditor(
  container: HTMLElement,
  schema: Schema,
  state: EditorState,
  options: EditorOptions,
  running = false,
): void {
  container.replaceChildren();

  const table = document.createElement("table");
  table.className = "constraint-editor";
  const head = table.createTHead().insertRow();
  for (const title of ["use", "feature", "constraint", "bounds / values", "importance"]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const feature of schema.features) {
    let draft = state.drafts.get(feature.name);
    if (!draft) {
      draft = defaultDraft(feature);
      state.drafts.set(feature.name, draft);
    }
    body.appendChild(renderDraftRow(schema, feature, draft, options));
  }
  container.appendChild(table);

  container.appendChild(renderModuleToggles(schema, state, options));
  container.appendChild(renderRunControls(schema, state, options, running));
}

function renderDraftRow(
  schema: Schema,
  feature: SchemaFeature,
  draft: ConstraintDraft,
  options: EditorOptions,
): HTMLTableRowElement {
  const tr = document.createElement("tr");
  tr.className = "draft-row";
  tr.dataset.feature = feature.name;

  const enabledCell = tr.insertCell();
  const enabled = document.createElement("input");
  enabled.type = "checkbox";
  enabled.className = "draft-enabled";
  enabled.checked = draft.enabled;
  enabled.addEventListener("change", () => {
    draft.enabled = enabled.checked;
    options.onChange?.();
  });
  enabledCell.appendChild(enabled);

  tr.insertCell().textContent = feature.name;

  const kindCell = tr.insertCell();
  const kindSelect = document.createElement("select");
  kindSelect.className = "draft-kind";
  for (const kind of kindsFor(feature)) {
    const option = document.createElement("option");
    option.value = kind;
    option.textContent = kind;
    option.selected = kind === draft.kind;
    kindSelect.appendChild(option);
  }
  kindCell.appendChild(kindSelect);

  const valueCell = tr.insertCell();
  valueCell.className = "draft-values";

  const importanceCell = tr.insertCell();
  const importance = document.createElement("input");
  importance.type = "number";
  importance.className = "draft-importance";
  importance.min = "0";
  importance.step = "0.5";
  importance.value = String(draft.importance);
  importance.addEventListener("change", () => {
    draft.importance = Number(importance.value);
    showRowErrors(tr, schema, draft);
    options.onChange?.();
  });
  importanceCell.appendChild(importance);

  const renderValueControls = () => {
    valueCell.replaceChildren();
    if (draft.kind === "fix" || draft.kind === "l" || draft.kind === "g" || draft.kind === "le" || draft.kind === "ge") {
      // relative constraints need no value input; fix disables controls
      const note = document.createElement("span");
      note.className = "value-note";
      note.textContent = draft.kind === "fix" ? "current value kept" : "vs. current value";
      valueCell.appendChild(note);
      return;
    }
    if (draft.kind === "range" && feature.range) {
      const [lo, hi] = feature.range;
      for (const bound of ["lb", "ub"] as const) {
        const input = document.createElement("input");
        input.type = "number";
        input.className = `draft-${bound}`;
        input.min = String(lo);
        input.max = String(hi);
        input.step = "any";
        input.value = String(draft[bound] ?? (bound === "lb" ? lo : hi));
        input.addEventListener("change", () => {
          draft[bound] = Number(input.value);
          showRowErrors(tr, schema, draft);
          options.onChange?.();
        });
        valueCell.appendChild(input);
      }
      return;
    }
    if (draft.kind === "set" && feature.categories) {
      const select = document.createElement("select");
      select.multiple = true;
      select.className = "draft-set";
      for (const category of feature.categories) {
        const option = document.createElement("option");
        option.value = category;
        option.textContent = category;
        option.selected = (draft.values ?? []).includes(category);
        select.appendChild(option);
      }
      select.addEventListener("change", () => {
        draft.values = [...select.selectedOptions].map((o) => o.value);
        showRowErrors(tr, schema, draft);
        options.onChange?.();
      });
      valueCell.appendChild(select);
    }
  };

  kindSelect.addEventListener("change", () => {
    draft.kind = kindSelect.value as ConstraintDraft["kind"];
    if (draft.kind === "set" && !draft.values && feature.categories) {
      draft.values = [...feature.categories];
    }
    renderValueControls();
    showRowErrors(tr, schema, draft);
    options.onChange?.();
  });
  renderValueControls();

  const errorCell = tr.insertCell();
  errorCell.className = "draft-errors";
  showRowErrors(tr, schema, draft);
  return tr;
}

function showRowErrors(tr: HTMLTableRowElement, schema: Schema, draft: ConstraintDraft): void {
  const cell = tr.querySelector<HTMLTableCellElement>(".draft-errors");
  if (!cell) return;
  const errors = validateDraft(schema, draft);
  cell.textContent = errors.map((e) => e.message).join("; ");
  tr.classList.toggle("invalid", errors.length > 0);
}

function renderModuleToggles(
  schema: Schema,
  state: EditorState,
  options: EditorOptions,
): HTMLElement {
  const wrap = document.createElement("fieldset");
  wrap.className = "module-toggles";
  const legend = document.createElement("legend");
  legend.textContent = "active modules";
  wrap.appendChild(legend);
  const names: Record<number, string> = {
    1: "validity",
    2: "soundness",
    3: "coherency",
    4: "actionability",
  };
  for (const m of [1, 2, 3, 4]) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.className = `module-toggle module-${m}`;
    box.checked = state.modules.has(m);
    // module 1 is the framework's base and cannot be disabled; modules the
    // artifact was not fitted for cannot be enabled
    box.disabled = m === 1 || !schema.modules.includes(m);
    box.addEventListener("change", () => {
      if (box.checked) state.modules.add(m);
      else state.modules.delete(m);
      options.onChange?.();
    });
    label.append(box, ` ${m}: ${names[m]}`);
    wrap.appendChild(label);
  }
  return wrap;
}

function renderRunControls(
  schema: Schema,
  state: EditorState,
  options: EditorOptions,
  running: boolean,
): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "run-controls";

  const nLabel = document.createElement("label");
  const nInput = document.createElement("input");
  nInput.type = "number";
  nInput.className = "run-n";
  nInput.min = "1";
  nInput.value = String(state.N);
  nInput.addEventListener("change", () => {
    state.N = Math.max(1, Math.floor(Number(nInput.value)) || 1);
  });
  nLabel.append("N ", nInput);

  const seedLabel = document.createElement("label");
  const seedInput = document.createElement("input");
  seedInput.type = "number";
  seedInput.className = "run-seed";
  seedInput.value = String(state.seed);
  seedInput.addEventListener("change", () => {
    state.seed = Math.floor(Number(seedInput.value)) || 0;
  });
  seedLabel.append("seed ", seedInput);

  const run = document.createElement("button");
  run.className = "run-button";
  run.textContent = running ? "running…" : "generate recourse";
  // single in-flight request: the button stays disabled until the response
  const errors = [
    ...validateDrafts(schema, [...state.drafts.values()]),
    ...validateModules([...state.modules], schema),
  ];
  run.disabled = running || errors.length > 0;
  run.addEventListener("click", () => options.onRun());

  const problem = document.createElement("span");
  problem.className = "run-errors";
  problem.textContent = errors.map((e) => `${e.feature}: ${e.message}`).join("; ");

  wrap.append(nLabel, seedLabel, run, problem);
  return wrap;
}
