/**
 * Deterministic SVG assembly: no timestamps, no generated ids, fixed
 * number formatting, so identical inputs give identical bytes.
 */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const MARGIN: Margin = { top: 28, right: 16, bottom: 42, left: 56 };
export const WIDTH = 520;
export const HEIGHT = 360;

export const SERIES_COLORS = ["#2b6cb0", "#c05621", "#2f855a", "#6b46c1", "#b83280"];

export function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  return Number(v.toFixed(3)).toString();
}

export interface Scale {
  (value: number): number;
  ticks: number[];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  let [d0, d1] = domain;
  if (d0 === d1) {
    d0 -= 1;
    d1 += 1;
  }
  const scale = ((value: number) =>
    range[0] + ((value - d0) / (d1 - d0)) * (range[1] - range[0])) as Scale;
  const step = tickStep(d0, d1);
  const ticks: number[] = [];
  for (let t = Math.ceil(d0 / step) * step; t <= d1 + 1e-9; t += step) {
    ticks.push(Number(t.toFixed(10)));
  }
  scale.ticks = ticks;
  return scale;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const lo = Math.max(domain[0], Number.MIN_VALUE);
  const hi = Math.max(domain[1], lo * 10);
  const l0 = Math.log10(lo);
  const l1 = Math.log10(hi);
  const scale = ((value: number) => {
    const x = Math.log10(Math.max(value, Number.MIN_VALUE));
    return range[0] + ((x - l0) / (l1 - l0)) * (range[1] - range[0]);
  }) as Scale;
  const ticks: number[] = [];
  for (let e = Math.floor(l0); e <= Math.ceil(l1); e += 1) {
    const t = 10 ** e;
    if (t >= lo / 1.0001 && t <= hi * 1.0001) ticks.push(t);
  }
  scale.ticks = ticks;
  return scale;
}

function tickStep(lo: number, hi: number, count = 6): number {
  const raw = (hi - lo) / count;
  const power = 10 ** Math.floor(Math.log10(raw));
  const candidates = [1, 2, 5, 10].map((m) => m * power);
  return candidates.reduce((a, b) => (Math.abs(b - raw) < Math.abs(a - raw) ? b : a));
}

export function el(tag: string, attrs: Record<string, string | number>, body = ""): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${v}"`)
    .join(" ");
  return body === "" ? `<${tag} ${parts}/>` : `<${tag} ${parts}>${body}</${tag}>`;
}

export function text(x: number, y: number, content: string, anchor = "middle", size = 11): string {
  return el(
    "text",
    { x: fmt(x), y: fmt(y), "text-anchor": anchor, "font-size": size, "font-family": "sans-serif" },
    escapeXml(content),
  );
}

export function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

/** Text-node escape: quotes stay literal so embedded JSON stays parseable. */
export function escapeXmlText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;");
}

export interface AxisOptions {
  xLabel: string;
  yLabel: string;
  xLog?: boolean;
  yLog?: boolean;
}

export function axes(x: Scale, y: Scale, options: AxisOptions): string {
  const pieces: string[] = [];
  const bottom = HEIGHT - MARGIN.bottom;
  pieces.push(
    el("line", {
      x1: MARGIN.left, y1: bottom, x2: WIDTH - MARGIN.right, y2: bottom,
      stroke: "#444", "stroke-width": 1,
    }),
    el("line", {
      x1: MARGIN.left, y1: MARGIN.top, x2: MARGIN.left, y2: bottom,
      stroke: "#444", "stroke-width": 1,
    }),
  );
  for (const t of x.ticks) {
    const px = x(t);
    pieces.push(
      el("line", { x1: fmt(px), y1: bottom, x2: fmt(px), y2: bottom + 4, stroke: "#444" }),
      text(px, bottom + 16, tickLabel(t, options.xLog)),
    );
  }
  for (const t of y.ticks) {
    const py = y(t);
    pieces.push(
      el("line", { x1: MARGIN.left - 4, y1: fmt(py), x2: MARGIN.left, y2: fmt(py), stroke: "#444" }),
      text(MARGIN.left - 7, py + 3.5, tickLabel(t, options.yLog), "end"),
    );
  }
  pieces.push(
    text(MARGIN.left + (WIDTH - MARGIN.left - MARGIN.right) / 2, HEIGHT - 8, options.xLabel),
    el(
      "g",
      { transform: `translate(14 ${MARGIN.top + (HEIGHT - MARGIN.top - MARGIN.bottom) / 2}) rotate(-90)` },
      text(0, 0, options.yLabel),
    ),
  );
  return pieces.join("");
}

function tickLabel(t: number, log?: boolean): string {
  if (log) {
    const e = Math.round(Math.log10(t));
    return e >= -3 && e <= 3 ? t.toString() : `1e${e}`;
  }
  return Math.abs(t) >= 10000 || (t !== 0 && Math.abs(t) < 0.001)
    ? t.toExponential(0)
    : Number(t.toPrecision(6)).toString();
}

export function legend(labels: string[]): string {
  return labels
    .map((label, i) =>
      [
        el("rect", {
          x: WIDTH - MARGIN.right - 130, y: MARGIN.top + 4 + i * 16, width: 10, height: 10,
          fill: SERIES_COLORS[i % SERIES_COLORS.length],
        }),
        text(WIDTH - MARGIN.right - 115, MARGIN.top + 13 + i * 16, label, "start", 10),
      ].join(""),
    )
    .join("");
}

export function document(
  title: string,
  body: string,
  inputChecksum: string,
  plottedChecksum: string,
): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<metadata>${escapeXmlText(
      JSON.stringify({ input_checksum: inputChecksum, plotted_checksum: plottedChecksum }),
    )}</metadata>`,
    el("rect", { x: 0, y: 0, width: WIDTH, height: HEIGHT, fill: "#ffffff" }),
    text(WIDTH / 2, 16, title, "middle", 13),
    body,
    `</svg>`,
  ].join("\n");
}
