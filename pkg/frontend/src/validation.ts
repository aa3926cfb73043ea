/** Client-side validation: a strict-subset replica of the server's rules.
 *
 * Everything the server would reject with 400/422 must be caught here
 * before a request is built, so the UI never sends a rejectable request.
 */

import type {
  ConstraintDraft,
  ConstraintKind,
  ExplainRequest,
  PreferenceEntry,
  Schema,
  SchemaFeature,
} from "./types.js";

export interface DraftError {
  feature: string;
  message: string;
}

const NUMERIC_KINDS: ConstraintKind[] = ["fix", "l", "g", "le", "ge", "range"];
const CATEGORICAL_KINDS: ConstraintKind[] = ["fix", "set"];

export function kindsFor(feature: SchemaFeature): ConstraintKind[] {
  return feature.kind === "numerical" ? NUMERIC_KINDS : CATEGORICAL_KINDS;
}

export function validateDraft(schema: Schema, draft: ConstraintDraft): DraftError[] {
  const errors: DraftError[] = [];
  const feature = schema.features.find((f) => f.name === draft.feature);
  if (!feature) {
    errors.push({ feature: draft.feature, message: `unknown feature ${draft.feature}` });
    return errors;
  }
  if (!kindsFor(feature).includes(draft.kind)) {
    errors.push({
      feature: draft.feature,
      message: `constraint '${draft.kind}' cannot apply to ${feature.kind} feature`,
    });
  }
  if (!Number.isFinite(draft.importance) || draft.importance <= 0) {
    errors.push({ feature: draft.feature, message: "importance must be a positive number" });
  }
  if (draft.kind === "range") {
    if (typeof draft.lb !== "number" || typeof draft.ub !== "number") {
      errors.push({ feature: draft.feature, message: "range needs numeric lb and ub" });
    } else if (draft.lb > draft.ub) {
      errors.push({ feature: draft.feature, message: "range lower bound exceeds upper bound" });
    }
  }
  if (draft.kind === "set") {
    if (!draft.values || draft.values.length === 0) {
      errors.push({ feature: draft.feature, message: "set needs at least one value" });
    } else if (feature.categories) {
      for (const v of draft.values) {
        if (!feature.categories.includes(v)) {
          errors.push({ feature: draft.feature, message: `unknown category '${v}'` });
        }
      }
    }
  }
  return errors;
}

export function validateDrafts(schema: Schema, drafts: ConstraintDraft[]): DraftError[] {
  const errors: DraftError[] = [];
  const seen = new Set<string>();
  for (const draft of drafts) {
    if (!draft.enabled) continue;
    if (seen.has(draft.feature)) {
      errors.push({ feature: draft.feature, message: "duplicate constraint for feature" });
      continue;
    }
    seen.add(draft.feature);
    errors.push(...validateDraft(schema, draft));
  }
  return errors;
}

export function validateModules(modules: number[], schema: Schema): DraftError[] {
  const errors: DraftError[] = [];
  if (!modules.includes(1)) {
    errors.push({ feature: "modules", message: "module 1 (validity) is always active" });
  }
  for (const m of modules) {
    if (![1, 2, 3, 4].includes(m)) {
      errors.push({ feature: "modules", message: `unknown module ${m}` });
    } else if (!schema.modules.includes(m)) {
      errors.push({ feature: "modules", message: `artifact was not fitted for module ${m}` });
    }
  }
  return errors;
}

function preferenceEntry(draft: ConstraintDraft): PreferenceEntry {
  const entry: PreferenceEntry = { op: draft.kind, importance: draft.importance };
  if (draft.kind === "range") {
    entry.lb = draft.lb;
    entry.ub = draft.ub;
  }
  if (draft.kind === "set") {
    entry.values = [...(draft.values ?? [])];
  }
  return entry;
}

/** Mirror of the server's satisfiability check, used only to flag which
 * constraints a counterfactual violates (the eta cost itself is displayed
 * verbatim from the response, never recomputed). */
export function constraintSatisfied(
  draft: ConstraintDraft,
  feature: SchemaFeature,
  oldValue: number | string,
  newValue: number | string,
): boolean {
  if (feature.kind === "numerical") {
    const oldNum = Number(oldValue);
    const newNum = Number(newValue);
    switch (draft.kind) {
      case "fix":
        return Math.abs(newNum - oldNum) <= 1e-9;
      case "l":
        return newNum < oldNum;
      case "g":
        return newNum > oldNum;
      case "le":
        return newNum <= oldNum;
      case "ge":
        return newNum >= oldNum;
      case "range":
        return (draft.lb ?? -Infinity) <= newNum && newNum <= (draft.ub ?? Infinity);
      default:
        return true;
    }
  }
  if (draft.kind === "fix") return String(newValue) === String(oldValue);
  if (draft.kind === "set") return (draft.values ?? []).includes(String(newValue));
  return true;
}

export interface RequestContext {
  instance: ExplainRequest["instance"];
  modules: number[];
  N: number;
  seed: number;
}

/** Serialize the enabled drafts plus run context into an ExplainRequest.
 * Throws when validation fails: the UI must never build a rejectable
 * request, so callers validate first (and this double-checks). */
export function buildRequest(
  schema: Schema,
  context: RequestContext,
  drafts: ConstraintDraft[],
): ExplainRequest {
  const errors = [...validateDrafts(schema, drafts), ...validateModules(context.modules, schema)];
  if (errors.length > 0) {
    throw new Error(errors.map((e) => `${e.feature}: ${e.message}`).join("; "));
  }
  const enabled = drafts.filter((d) => d.enabled);
  const request: ExplainRequest = {
    instance: context.instance,
    modules: [...context.modules],
    N: context.N,
    seed: context.seed,
  };
  if (enabled.length > 0) {
    const preferences: Record<string, PreferenceEntry> = {};
    for (const draft of enabled) {
      preferences[draft.feature] = preferenceEntry(draft);
    }
    request.preferences = preferences;
  }
  return request;
}
