/** Append-only per-instance session history, replayable through seeds. */

import type { ExplainRequest, ExplainResponse, ObjectiveName } from "./types.js";
import { OBJECTIVE_NAMES } from "./types.js";

export interface HistoryEntry {
  request: ExplainRequest;
  response: ExplainResponse;
}

export class SessionHistory {
  private entries: HistoryEntry[] = [];

  append(request: ExplainRequest, response: ExplainResponse): HistoryEntry {
    const entry = { request, response };
    this.entries.push(entry);
    return entry;
  }

  get length(): number {
    return this.entries.length;
  }

  at(index: number): HistoryEntry {
    const entry = this.entries.at(index);
    if (!entry) throw new RangeError(`no history entry at ${index}`);
    return entry;
  }

  last(): HistoryEntry | undefined {
    return this.entries.at(-1);
  }

  lastTwo(): [HistoryEntry, HistoryEntry] | undefined {
    if (this.entries.length < 2) return undefined;
    return [this.entries.at(-2)!, this.entries.at(-1)!];
  }

  /** The exact request of an earlier run; seeds are recorded, so resending
   * it reproduces the response. */
  replayRequest(index: number): ExplainRequest {
    return structuredClone(this.at(index).request);
  }
}

export type ObjectiveMeans = Record<ObjectiveName, number | null>;

export function objectiveMeans(response: ExplainResponse): ObjectiveMeans {
  const means = {} as ObjectiveMeans;
  for (const name of OBJECTIVE_NAMES) {
    const values = response.counterfactuals.map((cf) => cf.objectives[name]);
    means[name] = values.length
      ? values.reduce((a, b) => a + b, 0) / values.length
      : null;
  }
  return means;
}

export interface ObjectiveDelta {
  name: ObjectiveName;
  before: number | null;
  after: number | null;
  delta: number | null;
}

export function compareResponses(
  before: ExplainResponse,
  after: ExplainResponse,
): ObjectiveDelta[] {
  const a = objectiveMeans(before);
  const b = objectiveMeans(after);
  return OBJECTIVE_NAMES.map((name) => ({
    name,
    before: a[name],
    after: b[name],
    delta: a[name] !== null && b[name] !== null ? b[name]! - a[name]! : null,
  }));
}
