/** Wire types for the recourse service API. */

export type FeatureKind = "numerical" | "categorical";

export type ConstraintKind = "fix" | "l" | "g" | "le" | "ge" | "range" | "set";

export interface SchemaFeature {
  name: string;
  kind: FeatureKind;
  constraints: ConstraintKind[];
  range?: [number, number];
  categories?: string[];
}

export interface Schema {
  version: number;
  task: "classification" | "regression";
  target: string;
  features: SchemaFeature[];
  modules: number[];
  p_threshold: number;
  class_labels?: string[];
  response_intervals?: [number, number][];
}

export interface Prediction {
  class?: string;
  class_index?: number;
  probabilities?: number[];
  response?: number;
  interval?: number;
}

export interface InstanceRow {
  index: number;
  values: Record<string, number | string>;
  prediction: Prediction;
}

export interface InstancesPage {
  rows: InstanceRow[];
  total: number;
  offset: number;
}

export interface PreferenceEntry {
  op: ConstraintKind;
  importance: number;
  lb?: number;
  ub?: number;
  values?: string[];
}

export interface ExplainRequest {
  instance: { index: number } | { values: Record<string, number | string> };
  desired?: Record<string, unknown>;
  preferences?: Record<string, PreferenceEntry>;
  modules?: number[];
  N?: number;
  seed?: number;
}

export interface Counterfactual {
  values: Record<string, number | string>;
  objectives: Record<string, number>;
  changed: string[];
  prediction: Prediction;
}

export interface ExplainResponse {
  x: Record<string, number | string>;
  x_prediction: Prediction;
  desired: Record<string, unknown>;
  counterfactuals: Counterfactual[];
  valid: boolean;
  modules: number[];
  seed: number;
  N: number;
  timing: number;
}

export interface FieldError {
  field: string;
  message: string;
}

/** One editable constraint in the editor; mirrors the service vocabulary. */
export interface ConstraintDraft {
  feature: string;
  kind: ConstraintKind;
  importance: number;
  enabled: boolean;
  lb?: number;
  ub?: number;
  values?: string[];
}

export const OBJECTIVE_NAMES = [
  "outcome",
  "distance",
  "sparsity",
  "proximity",
  "connectedness",
  "coherency",
  "actionability",
] as const;

export type ObjectiveName = (typeof OBJECTIVE_NAMES)[number];
