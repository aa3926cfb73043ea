/** Side-by-side per-objective means of the last two runs, with deltas. */

import { roundedHint } from "../format.js";
import type { HistoryEntry } from "../history.js";
import { compareResponses } from "../history.js";

export function renderComparePanel(
  container: HTMLElement,
  lastTwo: [HistoryEntry, HistoryEntry] | undefined,
): void {
  container.replaceChildren();
  if (!lastTwo) return;
  const [before, after] = lastTwo;
  const table = document.createElement("table");
  table.className = "compare-panel";
  const head = table.createTHead().insertRow();
  for (const title of ["objective", "previous run", "latest run", "delta"]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const row of compareResponses(before.response, after.response)) {
    const tr = body.insertRow();
    tr.className = "compare-row";
    tr.dataset.objective = row.name;
    tr.insertCell().textContent = row.name;
    tr.insertCell().textContent = row.before === null ? "-" : roundedHint(row.before);
    tr.insertCell().textContent = row.after === null ? "-" : roundedHint(row.after);
    const delta = tr.insertCell();
    delta.className = "delta";
    if (row.delta === null) {
      delta.textContent = "-";
    } else {
      delta.textContent = `${row.delta >= 0 ? "+" : ""}${roundedHint(row.delta)}`;
      delta.classList.add(row.delta > 0 ? "delta-up" : row.delta < 0 ? "delta-down" : "delta-flat");
    }
  }
  container.appendChild(table);
}
