/**
 * Panel renderers.
 *
 * Each renderer parses its inputs into plain numeric series, records every
 * parsed value (the input checksum), hands exactly those numbers to the
 * SVG marks (the plotted checksum), and never derives new statistics:
 * scales, clamping and histogram display-binning are the only transforms.
 */

import { SchemaError, jsonNumber, numericColumn, readJson, readTable } from "./csv.js";
import { checksumValues } from "./checksum.js";
import type { PanelSpec } from "./spec.js";
import {
  HEIGHT,
  MARGIN,
  SERIES_COLORS,
  WIDTH,
  axes,
  document,
  el,
  fmt,
  legend,
  linearScale,
  logScale,
  text,
  type Scale,
} from "./svg.js";

interface Rendered {
  svg: string;
  inputChecksum: string;
  plottedChecksum: string;
}

const PLOT_RANGE_X: [number, number] = [MARGIN.left, WIDTH - MARGIN.right];
const PLOT_RANGE_Y: [number, number] = [HEIGHT - MARGIN.bottom, MARGIN.top];

function makeScale(log: boolean, domain: [number, number], range: [number, number]): Scale {
  return log ? logScale(domain, range) : linearScale(domain, range);
}

function extent(values: number[], positiveOnly: boolean): [number, number] {
  const usable = positiveOnly ? values.filter((v) => v > 0) : values;
  if (usable.length === 0) throw new SchemaError("no plottable values");
  return [Math.min(...usable), Math.max(...usable)];
}

export function render(spec: PanelSpec): Rendered {
  switch (spec.kind) {
    case "ccdf":
      return renderCcdf(spec);
    case "binned_curve":
      return renderBinnedCurve(spec);
    case "null_bars":
      return renderNullBars(spec);
    case "report_bars":
      return renderReportBars(spec);
    case "histogram_overlay":
      return renderHistogramOverlay(spec);
    case "qq":
      return renderQq(spec);
  }
}

// ------------------------------------------------------------- ccdf

function renderCcdf(spec: PanelSpec): Rendered {
  const xLog = spec.xLog ?? true;
  const yLog = spec.yLog ?? true;
  const inputValues: number[] = [];
  const series = spec.inputs.map((input) => {
    const table = readTable(input.path, ["k", "value"]);
    const k = numericColumn(table, input.path, "k");
    const value = numericColumn(table, input.path, "value");
    inputValues.push(...k, ...value);
    return { label: input.label, k, value };
  });
  const x = makeScale(xLog, extent(series.flatMap((s) => s.k), xLog), PLOT_RANGE_X);
  const y = makeScale(yLog, extent(series.flatMap((s) => s.value), yLog), PLOT_RANGE_Y);
  const plottedValues: number[] = [];
  const marks = series
    .map((s, index) => {
      const color = SERIES_COLORS[index % SERIES_COLORS.length];
      plottedValues.push(...s.k, ...s.value);
      const points = s.k.map((kv, i) => `${fmt(x(kv))},${fmt(y(s.value[i]))}`);
      return (
        el("polyline", {
          points: points.join(" "),
          fill: "none",
          stroke: color,
          "stroke-width": 1.5,
        }) +
        s.k
          .map((kv, i) => el("circle", { cx: fmt(x(kv)), cy: fmt(y(s.value[i])), r: 2, fill: color }))
          .join("")
      );
    })
    .join("");
  const body =
    axes(x, y, { xLabel: "degree k", yLabel: "fraction with degree >= k", xLog, yLog }) +
    marks +
    legend(series.map((s) => s.label));
  return finish(spec.title, body, inputValues, plottedValues);
}

// ------------------------------------------------------ binned curve

function renderBinnedCurve(spec: PanelSpec): Rendered {
  const xLog = spec.xLog ?? true;
  const inputValues: number[] = [];
  const series = spec.inputs.map((input) => {
    const table = readTable(input.path, ["bin_left", "bin_right", "mean", "stderr", "count"]);
    const idx = Object.fromEntries(table.columns.map((c, i) => [c, i]));
    const rows = [];
    for (const row of table.rows) {
      if ((row[idx.mean] ?? "") === "") continue; // empty bin: emitted as absent
      const left = Number(row[idx.bin_left]);
      const right = Number(row[idx.bin_right]);
      const mean = Number(row[idx.mean]);
      const stderr = (row[idx.stderr] ?? "") === "" ? null : Number(row[idx.stderr]);
      const count = Number(row[idx.count]);
      const cells = stderr === null ? [left, right, mean, count] : [left, right, mean, stderr, count];
      if (cells.some((v) => !Number.isFinite(v))) {
        throw new SchemaError(`${input.path}: non-numeric cell in a populated row`);
      }
      inputValues.push(left, right, mean);
      if (stderr !== null) inputValues.push(stderr);
      inputValues.push(count);
      rows.push({ left, right, mean, stderr, count });
    }
    if (rows.length === 0) throw new SchemaError(`${input.path}: no populated bins`);
    return { label: input.label, rows };
  });
  const xs = series.flatMap((s) => s.rows.flatMap((r) => [r.left, r.right]));
  const ys = series.flatMap((s) =>
    s.rows.flatMap((r) => (r.stderr === null ? [r.mean] : [r.mean - r.stderr, r.mean + r.stderr])),
  );
  const x = makeScale(xLog, extent(xs, xLog), PLOT_RANGE_X);
  const y = linearScale([Math.min(0, ...ys), Math.max(...ys)], PLOT_RANGE_Y);
  const plottedValues: number[] = [];
  const marks = series
    .map((s, index) => {
      const color = SERIES_COLORS[index % SERIES_COLORS.length];
      const pieces: string[] = [];
      const linePoints: string[] = [];
      for (const r of s.rows) {
        plottedValues.push(r.left, r.right, r.mean);
        const cx = (x(r.left) + x(r.right)) / 2;
        linePoints.push(`${fmt(cx)},${fmt(y(r.mean))}`);
        if (r.stderr !== null) {
          plottedValues.push(r.stderr);
          pieces.push(
            el("line", {
              x1: fmt(cx), y1: fmt(y(r.mean - r.stderr)),
              x2: fmt(cx), y2: fmt(y(r.mean + r.stderr)),
              stroke: color, "stroke-width": 1,
            }),
          );
        }
        plottedValues.push(r.count);
        pieces.push(el("circle", { cx: fmt(cx), cy: fmt(y(r.mean)), r: 3, fill: color }));
      }
      pieces.unshift(
        el("polyline", {
          points: linePoints.join(" "),
          fill: "none",
          stroke: color,
          "stroke-width": 1.5,
        }),
      );
      return pieces.join("");
    })
    .join("");
  const body =
    axes(x, y, { xLabel: "out-degree bin", yLabel: "mean in-degree", xLog }) +
    marks +
    legend(series.map((s) => s.label));
  return finish(spec.title, body, inputValues, plottedValues);
}

// --------------------------------------------------------- null bars

function renderNullBars(spec: PanelSpec): Rendered {
  const inputValues: number[] = [];
  const groups = spec.inputs.map((input) => {
    const doc = readJson(input.path);
    const real = jsonNumber(doc, input.path, "real");
    const nullMean = jsonNumber(doc, input.path, "null_mean");
    inputValues.push(real, nullMean);
    return { label: input.label, real, nullMean };
  });
  return barPanel(spec, inputValues, groups.map((g) => g.label),
    groups.flatMap((g) => [
      { value: g.real, color: SERIES_COLORS[0] },
      { value: g.nullMean, color: "#a0aec0" },
    ]), ["value (real)", "value (null mean)"]);
}

// ------------------------------------------------------- report bars

function renderReportBars(spec: PanelSpec): Rendered {
  if (!spec.metric) {
    throw new SchemaError("report_bars panel requires a 'metric' field");
  }
  const input = spec.inputs[0];
  const doc = readJson(input.path) as Record<string, unknown>;
  const columns = doc.columns;
  if (!Array.isArray(columns)) {
    throw new SchemaError(`${input.path}: missing field 'columns'`);
  }
  let node: unknown = doc;
  for (const part of spec.metric.split(".")) {
    if (typeof node !== "object" || node === null || !(part in node)) {
      throw new SchemaError(`${input.path}: missing field '${spec.metric}'`);
    }
    node = (node as Record<string, unknown>)[part];
  }
  if (!Array.isArray(node)) {
    throw new SchemaError(`${input.path}: field '${spec.metric}' is not a per-network array`);
  }
  const inputValues: number[] = [];
  const bars = node.map((value, index) => {
    if (typeof value !== "number") {
      throw new SchemaError(`${input.path}: '${spec.metric}' has a non-numeric entry at ${index}`);
    }
    inputValues.push(value);
    const column = columns[index] as Record<string, unknown> | undefined;
    const provenance = typeof column?.provenance === "string" ? column.provenance : "unknown";
    const label = typeof column?.path === "string" ? pathLeaf(column.path) : `#${index}`;
    return {
      value,
      color: provenance === "simulated" ? SERIES_COLORS[1] : SERIES_COLORS[0],
      label: `${label} (${provenance})`,
    };
  });
  return barPanel(spec, inputValues, bars.map((b) => b.label), bars, []);
}

function pathLeaf(p: string): string {
  const parts = p.split(/[\\/]/).filter((s) => s !== "");
  return parts[parts.length - 1] ?? p;
}

interface Bar {
  value: number;
  color: string;
}

function barPanel(
  spec: PanelSpec,
  inputValues: number[],
  groupLabels: string[],
  bars: Bar[],
  legendLabels: string[],
): Rendered {
  const values = bars.map((b) => b.value);
  const lo = Math.min(0, ...values);
  const hi = Math.max(0, ...values);
  const y = linearScale([lo, hi], PLOT_RANGE_Y);
  const x = linearScale([0, bars.length], PLOT_RANGE_X);
  x.ticks = [];
  const plottedValues: number[] = [];
  const slot = (PLOT_RANGE_X[1] - PLOT_RANGE_X[0]) / bars.length;
  const perGroup = bars.length / groupLabels.length;
  const marks = bars
    .map((bar, index) => {
      plottedValues.push(bar.value);
      const x0 = PLOT_RANGE_X[0] + index * slot + slot * 0.15;
      const yTop = Math.min(y(bar.value), y(0));
      const height = Math.abs(y(bar.value) - y(0));
      return el("rect", {
        x: fmt(x0), y: fmt(yTop), width: fmt(slot * 0.7), height: fmt(height), fill: bar.color,
      });
    })
    .join("");
  const labels = groupLabels
    .map((label, index) =>
      text(
        PLOT_RANGE_X[0] + (index + 0.5) * perGroup * slot,
        HEIGHT - MARGIN.bottom + 16,
        label,
        "middle",
        10,
      ),
    )
    .join("");
  const body =
    axes(x, y, { xLabel: "", yLabel: "value" }) +
    marks +
    labels +
    (legendLabels.length ? legend(legendLabels) : "");
  return finish(spec.title, body, inputValues, plottedValues);
}

// ------------------------------------------------ histogram overlay

function renderHistogramOverlay(spec: PanelSpec): Rendered {
  const bins = spec.bins ?? 30;
  const inputValues: number[] = [];
  const series = spec.inputs.map((input) => {
    const table = readTable(input.path, ["replicate", "mean"]);
    const means = numericColumn(table, input.path, "mean");
    inputValues.push(...means);
    return { label: input.label, means };
  });
  const all = series.flatMap((s) => s.means);
  const [lo, hi] = extent(all, false);
  const x = linearScale([lo, hi], PLOT_RANGE_X);
  const width = (hi - lo) || 1;
  const counts = series.map((s) => {
    const c = new Array<number>(bins).fill(0);
    for (const v of s.means) {
      const b = Math.min(bins - 1, Math.floor(((v - lo) / width) * bins));
      c[b] += 1;
    }
    return c;
  });
  const maxCount = Math.max(...counts.flat());
  const y = linearScale([0, maxCount], PLOT_RANGE_Y);
  const plottedValues: number[] = [];
  series.forEach((s) => plottedValues.push(...s.means));
  const marks = counts
    .map((c, index) => {
      const color = SERIES_COLORS[index % SERIES_COLORS.length];
      return c
        .map((count, b) => {
          if (count === 0) return "";
          const x0 = PLOT_RANGE_X[0] + (b / bins) * (PLOT_RANGE_X[1] - PLOT_RANGE_X[0]);
          const barWidth = (PLOT_RANGE_X[1] - PLOT_RANGE_X[0]) / bins;
          return el("rect", {
            x: fmt(x0), y: fmt(y(count)),
            width: fmt(barWidth), height: fmt(PLOT_RANGE_Y[0] - y(count)),
            fill: color, "fill-opacity": 0.45,
          });
        })
        .join("");
    })
    .join("");
  const body =
    axes(x, y, { xLabel: "replicate mean", yLabel: "replicates per bin" }) +
    marks +
    legend(series.map((s) => s.label));
  return finish(spec.title, body, inputValues, plottedValues);
}

// ---------------------------------------------------------------- qq

function renderQq(spec: PanelSpec): Rendered {
  const input = spec.inputs[0];
  const table = readTable(input.path, ["x", "y"]);
  const xs = numericColumn(table, input.path, "x");
  const ys = numericColumn(table, input.path, "y");
  const inputValues = [...xs, ...ys];
  const lo = Math.min(...xs, ...ys);
  const hi = Math.max(...xs, ...ys);
  const x = linearScale([lo, hi], PLOT_RANGE_X);
  const y = linearScale([lo, hi], PLOT_RANGE_Y);
  const plottedValues: number[] = [];
  const points = xs
    .map((xv, i) => {
      plottedValues.push(xv);
      return el("circle", {
        cx: fmt(x(xv)), cy: fmt(y(ys[i])), r: 2.5,
        fill: SERIES_COLORS[0], "fill-opacity": 0.8,
      });
    })
    .join("");
  ys.forEach((v) => plottedValues.push(v));
  const diagonal = el("line", {
    x1: fmt(x(lo)), y1: fmt(y(lo)), x2: fmt(x(hi)), y2: fmt(y(hi)),
    stroke: "#888", "stroke-dasharray": "4 3",
  });
  const body =
    axes(x, y, { xLabel: spec.inputs[0].label || "first sample", yLabel: "second sample" }) +
    diagonal +
    points;
  return finish(spec.title, body, inputValues, plottedValues);
}

// ------------------------------------------------------------ shared

function finish(
  title: string,
  body: string,
  inputValues: number[],
  plottedValues: number[],
): Rendered {
  const inputChecksum = checksumValues(inputValues);
  const plottedChecksum = checksumValues(plottedValues);
  return {
    svg: document(title, body, inputChecksum, plottedChecksum),
    inputChecksum,
    plottedChecksum,
  };
}
