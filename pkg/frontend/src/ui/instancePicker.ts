/** Table of test instances with predictions; clicking a row selects it. */

import { formatPrediction, formatValue } from "../format.js";
import type { InstanceRow, InstancesPage, Schema } from "../types.js";

export interface InstancePickerOptions {
  onSelect: (row: InstanceRow) => void;
  onPage: (offset: number) => void;
}

export function renderInstancePicker(
  container: HTMLElement,
  schema: Schema,
  page: InstancesPage,
  options: InstancePickerOptions,
  selectedIndex: number | null = null,
): void {
  container.replaceChildren();
  const table = document.createElement("table");
  table.className = "instance-picker";

  const head = table.createTHead().insertRow();
  for (const name of ["#", ...schema.features.map((f) => f.name), "prediction"]) {
    const th = document.createElement("th");
    th.textContent = name;
    head.appendChild(th);
  }

  const body = table.createTBody();
  for (const row of page.rows) {
    const tr = body.insertRow();
    tr.className = "instance-row" + (row.index === selectedIndex ? " selected" : "");
    tr.dataset.index = String(row.index);
    tr.insertCell().textContent = String(row.index);
    for (const feature of schema.features) {
      tr.insertCell().textContent = formatValue(row.values[feature.name]);
    }
    const predCell = tr.insertCell();
    predCell.className = "prediction";
    predCell.textContent = formatPrediction(row.prediction);
    tr.addEventListener("click", () => options.onSelect(row));
  }
  container.appendChild(table);

  const nav = document.createElement("div");
  nav.className = "pager";
  const prev = document.createElement("button");
  prev.textContent = "previous";
  prev.disabled = page.offset === 0;
  prev.addEventListener("click", () =>
    options.onPage(Math.max(0, page.offset - page.rows.length)),
  );
  const next = document.createElement("button");
  next.textContent = "next";
  next.disabled = page.offset + page.rows.length >= page.total;
  next.addEventListener("click", () => options.onPage(page.offset + page.rows.length));
  const label = document.createElement("span");
  label.textContent = `${page.offset + 1}-${page.offset + page.rows.length} of ${page.total}`;
  nav.append(prev, label, next);
  container.appendChild(nav);
}
