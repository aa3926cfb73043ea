import { beforeEach, describe, expect, it } from "vitest";

import { UNCHANGED_CELL } from "../src/format.js";
import type { ConstraintDraft, ExplainResponse, ObjectiveName } from "../src/types.js";
import { OBJECTIVE_NAMES } from "../src/types.js";
import { renderRecourseTable, violatedConstraints } from "../src/ui/recourseTable.js";
import { responses, schema } from "./fixtures.js";

let container: HTMLElement;

beforeEach(() => {
  container = document.createElement("div");
  document.body.replaceChildren(container);
});

function cfRows(): HTMLTableRowElement[] {
  return [...container.querySelectorAll<HTMLTableRowElement>("tr.cf-row")];
}

describe("diff rendering over the 20 fixture responses", () => {
  for (const [i, response] of responses.entries()) {
    it(`response ${i}: dashes, changed-cell counts, and verbatim objectives`, () => {
      renderRecourseTable(container, schema, response);
      const rows = cfRows();
      expect(rows.length).toBe(response.counterfactuals.length);
      rows.forEach((row, k) => {
        const cf = response.counterfactuals[k];
        const featureCells = [...row.cells].slice(1, 1 + schema.features.length);
        const changedCells = featureCells.filter((c) => c.classList.contains("changed"));
        const dashCells = featureCells.filter((c) => c.textContent === UNCHANGED_CELL);
        // changed-cell count equals the response's changed-feature list length
        expect(changedCells.length).toBe(cf.changed.length);
        expect(dashCells.length).toBe(schema.features.length - cf.changed.length);
        // every unchanged feature renders the dash, every changed one its value
        schema.features.forEach((feature, j) => {
          const cell = featureCells[j];
          if (cf.changed.includes(feature.name)) {
            expect(cell.textContent).toBe(String(cf.values[feature.name]));
          } else {
            expect(cell.textContent).toBe(UNCHANGED_CELL);
          }
        });
        // objective cells display the payload values verbatim
        const objectiveCells = [...row.querySelectorAll<HTMLTableCellElement>(".objective")];
        expect(objectiveCells.length).toBe(OBJECTIVE_NAMES.length);
        OBJECTIVE_NAMES.forEach((name, j) => {
          expect(objectiveCells[j].textContent).toBe(String(cf.objectives[name]));
        });
      });
    });
  }
});

describe("table behaviors", () => {
  const response = responses[0];

  it("renders the original instance row without dashes", () => {
    renderRecourseTable(container, schema, response);
    const xRow = container.querySelector<HTMLTableRowElement>("tr.x-row")!;
    const featureCells = [...xRow.cells].slice(1, 1 + schema.features.length);
    featureCells.forEach((cell, j) => {
      expect(cell.textContent).toBe(String(response.x[schema.features[j].name]));
    });
  });

  it("shows the best-effort banner when the set is not valid", () => {
    const flagged: ExplainResponse = { ...response, valid: false };
    renderRecourseTable(container, schema, flagged);
    expect(container.querySelector(".best-effort-banner")).not.toBeNull();
    renderRecourseTable(container, schema, response);
    expect(container.querySelector(".best-effort-banner")).toBeNull();
  });

  it("sorts by an objective column", () => {
    const name: ObjectiveName = "distance";
    renderRecourseTable(container, schema, response, {
      sort: { objective: name, descending: false },
    });
    const shown = cfRows().map((row) =>
      Number(row.querySelector(`.objective-${name}`)!.textContent),
    );
    const sorted = [...shown].sort((a, b) => a - b);
    expect(shown).toEqual(sorted);

    renderRecourseTable(container, schema, response, {
      sort: { objective: name, descending: true },
    });
    const shownDesc = cfRows().map((row) =>
      Number(row.querySelector(`.objective-${name}`)!.textContent),
    );
    expect(shownDesc).toEqual([...sorted].reverse());
  });

  it("clicking a header invokes the sort callback", () => {
    let clicked: string | null = null;
    renderRecourseTable(container, schema, response, {
      onSort: (objective) => {
        clicked = objective;
      },
    });
    const header = container.querySelector<HTMLTableCellElement>(
      'th[data-objective="sparsity"]',
    )!;
    header.click();
    expect(clicked).toBe("sparsity");
  });

  it("flags violated constraints with their importances", () => {
    // find a counterfactual that changes some feature, then fix that feature
    const cf = response.counterfactuals.find((c) => c.changed.length > 0)!;
    const changedFeature = cf.changed[0];
    const drafts: ConstraintDraft[] = [
      { feature: changedFeature, kind: "fix", importance: 10, enabled: true },
    ];
    const violated = violatedConstraints(schema, response, cf, drafts);
    expect(violated).toEqual([{ feature: changedFeature, importance: 10 }]);
    renderRecourseTable(container, schema, response, { drafts });
    const texts = cfRows().map((r) => r.querySelector(".violations")!.textContent);
    expect(texts.some((t) => t!.includes(`${changedFeature} (importance 10)`))).toBe(true);
  });
});
