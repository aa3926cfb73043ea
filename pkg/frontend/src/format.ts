/** Display formatting helpers.
 *
 * Objective values are rendered verbatim (String of the payload value, no
 * rounding or recomputation) so the table shows exactly what the service
 * returned; friendlier rounded numbers appear only in tooltips.
 */

export const UNCHANGED_CELL = "–"; // "–", the unchanged-feature marker

export function formatObjective(value: number): string {
  return String(value);
}

export function roundedHint(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(4);
}

export function formatValue(value: number | string): string {
  return typeof value === "number" ? String(value) : value;
}

export function formatPrediction(prediction: {
  class?: string;
  probabilities?: number[];
  response?: number;
  interval?: number;
}): string {
  if (prediction.class !== undefined) {
    const p = prediction.probabilities
      ? ` (p=${Math.max(...prediction.probabilities).toFixed(2)})`
      : "";
    return `${prediction.class}${p}`;
  }
  const interval = prediction.interval !== undefined ? ` [interval ${prediction.interval}]` : "";
  return `${prediction.response?.toFixed(4) ?? "?"}${interval}`;
}
