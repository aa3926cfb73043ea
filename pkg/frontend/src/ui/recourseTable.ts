/** Diff table of counterfactuals: unchanged cells show "–", changed cells
 * are highlighted, objective columns hold the verbatim response values and
 * are sortable. Violated constraints are flagged with their importances.
 */

import { UNCHANGED_CELL, formatObjective, formatPrediction, formatValue, roundedHint } from "../format.js";
import type {
  ConstraintDraft,
  Counterfactual,
  ExplainResponse,
  ObjectiveName,
  Schema,
} from "../types.js";
import { OBJECTIVE_NAMES } from "../types.js";
import { constraintSatisfied } from "../validation.js";

export interface SortState {
  objective: ObjectiveName | null;
  descending: boolean;
}

export interface RecourseTableOptions {
  drafts?: ConstraintDraft[];
  sort?: SortState;
  onSort?: (objective: ObjectiveName) => void;
}

export function violatedConstraints(
  schema: Schema,
  response: ExplainResponse,
  cf: Counterfactual,
  drafts: ConstraintDraft[],
): { feature: string; importance: number }[] {
  const out: { feature: string; importance: number }[] = [];
  for (const draft of drafts) {
    if (!draft.enabled) continue;
    const feature = schema.features.find((f) => f.name === draft.feature);
    if (!feature) continue;
    const oldValue = response.x[draft.feature];
    const newValue = cf.values[draft.feature];
    if (!constraintSatisfied(draft, feature, oldValue, newValue)) {
      out.push({ feature: draft.feature, importance: draft.importance });
    }
  }
  return out;
}

export function renderRecourseTable(
  container: HTMLElement,
  schema: Schema,
  response: ExplainResponse,
  options: RecourseTableOptions = {},
): void {
  container.replaceChildren();

  if (!response.valid) {
    const banner = document.createElement("div");
    banner.className = "best-effort-banner";
    banner.textContent =
      "no fully valid recourse found - showing the best-effort candidates";
    container.appendChild(banner);
  }

  const table = document.createElement("table");
  table.className = "recourse-table";
  const head = table.createTHead().insertRow();
  const columns = ["instance", ...schema.features.map((f) => f.name), "prediction"];
  for (const title of columns) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  for (const objective of OBJECTIVE_NAMES) {
    const th = document.createElement("th");
    th.className = "objective-header";
    th.dataset.objective = objective;
    th.textContent =
      options.sort?.objective === objective
        ? `${objective} ${options.sort.descending ? "↓" : "↑"}`
        : objective;
    th.addEventListener("click", () => options.onSort?.(objective));
    head.appendChild(th);
  }
  const violationsHead = document.createElement("th");
  violationsHead.textContent = "violated";
  head.appendChild(violationsHead);

  const body = table.createTBody();

  const xRow = body.insertRow();
  xRow.className = "x-row";
  xRow.insertCell().textContent = "x";
  for (const feature of schema.features) {
    xRow.insertCell().textContent = formatValue(response.x[feature.name]);
  }
  xRow.insertCell().textContent = formatPrediction(response.x_prediction);
  for (const objective of OBJECTIVE_NAMES) {
    void objective;
    xRow.insertCell().textContent = "";
  }
  xRow.insertCell().textContent = "";

  const order = [...response.counterfactuals.keys()];
  if (options.sort?.objective) {
    const key = options.sort.objective;
    const sign = options.sort.descending ? -1 : 1;
    order.sort(
      (a, b) =>
        sign *
        (response.counterfactuals[a].objectives[key] -
          response.counterfactuals[b].objectives[key]),
    );
  }

  order.forEach((cfIndex, displayIndex) => {
    const cf = response.counterfactuals[cfIndex];
    const tr = body.insertRow();
    tr.className = "cf-row";
    tr.dataset.cf = String(cfIndex);
    tr.insertCell().textContent = `cf${displayIndex + 1}`;
    for (const feature of schema.features) {
      const cell = tr.insertCell();
      if (cf.changed.includes(feature.name)) {
        cell.className = "changed";
        cell.textContent = formatValue(cf.values[feature.name]);
      } else {
        cell.className = "unchanged";
        cell.textContent = UNCHANGED_CELL;
      }
    }
    tr.insertCell().textContent = formatPrediction(cf.prediction);
    for (const objective of OBJECTIVE_NAMES) {
      const cell = tr.insertCell();
      cell.className = `objective objective-${objective}`;
      cell.textContent = formatObjective(cf.objectives[objective]);
      cell.title = roundedHint(cf.objectives[objective]);
    }
    const violationCell = tr.insertCell();
    violationCell.className = "violations";
    const violated = violatedConstraints(schema, response, cf, options.drafts ?? []);
    violationCell.textContent = violated
      .map((v) => `${v.feature} (importance ${v.importance})`)
      .join(", ");
  });

  container.appendChild(table);
}
