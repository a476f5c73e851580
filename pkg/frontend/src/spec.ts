/**
 * PanelSpec: one JSON document = one rendered SVG panel.
 */

import { SchemaError, readJson } from "./csv.js";

export const PANEL_KINDS = [
  "ccdf",
  "binned_curve",
  "null_bars",
  "report_bars",
  "histogram_overlay",
  "qq",
] as const;

export type PanelKind = (typeof PANEL_KINDS)[number];

export interface SeriesInput {
  path: string;
  label: string;
}

export interface PanelSpec {
  kind: PanelKind;
  title: string;
  output: string;
  inputs: SeriesInput[];
  /** report_bars: dot path into report.json, e.g. "functional.gini" */
  metric?: string;
  /** histogram_overlay: number of display bins (default 30) */
  bins?: number;
  xLog?: boolean;
  yLog?: boolean;
}

export function loadPanelSpec(path: string): PanelSpec {
  const doc = readJson(path);
  if (typeof doc !== "object" || doc === null) {
    throw new SchemaError(`${path}: panel spec must be a JSON object`);
  }
  const spec = doc as Record<string, unknown>;
  const kind = spec.kind;
  if (typeof kind !== "string" || !(PANEL_KINDS as readonly string[]).includes(kind)) {
    throw new SchemaError(
      `${path}: field 'kind' must be one of ${PANEL_KINDS.join(", ")}`,
    );
  }
  if (typeof spec.output !== "string" || spec.output === "") {
    throw new SchemaError(`${path}: missing field 'output'`);
  }
  if (!Array.isArray(spec.inputs) || spec.inputs.length === 0) {
    throw new SchemaError(`${path}: field 'inputs' must be a nonempty array`);
  }
  const inputs: SeriesInput[] = spec.inputs.map((item, index) => {
    const entry = item as Record<string, unknown>;
    if (typeof entry?.path !== "string") {
      throw new SchemaError(`${path}: inputs[${index}] is missing 'path'`);
    }
    return { path: entry.path, label: typeof entry.label === "string" ? entry.label : entry.path };
  });
  return {
    kind: kind as PanelKind,
    title: typeof spec.title === "string" ? spec.title : "",
    output: spec.output,
    inputs,
    metric: typeof spec.metric === "string" ? spec.metric : undefined,
    bins: typeof spec.bins === "number" ? spec.bins : undefined,
    xLog: typeof spec.x_log === "boolean" ? spec.x_log : undefined,
    yLog: typeof spec.y_log === "boolean" ? spec.y_log : undefined,
  };
}
