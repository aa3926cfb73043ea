import { readFileSync } from "node:fs";
import { join } from "node:path";

import type { ConstraintDraft, ExplainRequest, ExplainResponse, Schema } from "../src/types.js";

function load<T>(name: string): T {
  // vitest runs with the frontend directory as its root
  return JSON.parse(readFileSync(join(process.cwd(), "fixtures", name), "utf-8")) as T;
}

export interface MatrixCase {
  name: string;
  drafts: ConstraintDraft[];
  context: {
    instance: { index: number };
    modules: number[];
    N: number;
    seed: number;
  };
  request: ExplainRequest;
}

export const schema = load<Schema>("schema.json");
export const constraintMatrix = load<MatrixCase[]>("constraint_matrix.json");
export const responses = load<ExplainResponse[]>("responses.json");
