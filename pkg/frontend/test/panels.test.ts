import { createHash } from "node:crypto";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { checksumValues } from "../src/checksum.js";
import { numericColumn, parseCsv, SchemaError } from "../src/csv.js";
import { render } from "../src/panels.js";
import { main } from "../src/cli.js";
import { loadPanelSpec, type PanelSpec } from "../src/spec.js";

const FIXTURES = join(__dirname, "fixtures");
const fixture = (name: string) => join(FIXTURES, name);

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "dagkit-figures-"));
}

const PANELS: Record<string, PanelSpec> = {
  ccdf: {
    kind: "ccdf",
    title: "Degree survival",
    output: "",
    inputs: [
      { path: fixture("ccdf_total_a.csv"), label: "network A" },
      { path: fixture("ccdf_total_b.csv"), label: "network B" },
    ],
  },
  binned_curve: {
    kind: "binned_curve",
    title: "Self-degree correlation",
    output: "",
    inputs: [
      { path: fixture("self_degree_a.csv"), label: "network A" },
      { path: fixture("self_degree_b.csv"), label: "network B" },
    ],
  },
  null_bars: {
    kind: "null_bars",
    title: "Real vs null ensemble means",
    output: "",
    inputs: [
      { path: fixture("zscores_a.json"), label: "clustering" },
      { path: fixture("zscores_b.json"), label: "disruption corr" },
    ],
  },
  report_bars: {
    kind: "report_bars",
    title: "Gini of disruption",
    output: "",
    metric: "functional.gini",
    inputs: [{ path: fixture("report.json"), label: "networks" }],
  },
  histogram_overlay: {
    kind: "histogram_overlay",
    title: "Bootstrap means, top vs bottom group",
    output: "",
    inputs: [
      { path: fixture("bootstrap_top.csv"), label: "top 20%" },
      { path: fixture("bootstrap_bottom.csv"), label: "bottom 20%" },
    ],
  },
  qq: {
    kind: "qq",
    title: "Windowed vs full disruption quantiles",
    output: "",
    inputs: [{ path: fixture("qq.csv"), label: "full-history quantiles" }],
  },
};

describe("panel rendering", () => {
  for (const [name, spec] of Object.entries(PANELS)) {
    it(`renders the ${name} panel from golden fixtures`, () => {
      const result = render(spec);
      expect(result.svg).toContain("<svg");
      expect(result.svg).toContain("</svg>");
      expect(result.svg).toContain(result.inputChecksum);
    });

    it(`${name}: plotted checksum equals input checksum`, () => {
      const result = render(spec);
      expect(result.plottedChecksum).toBe(result.inputChecksum);
    });

    it(`${name}: rendering is deterministic`, () => {
      expect(render(spec).svg).toBe(render(spec).svg);
    });
  }

  it("embeds the checksum of the values actually in the file", () => {
    // independent recomputation for the qq fixture: x column then y column
    const table = parseCsv(readFileSync(fixture("qq.csv"), "utf8"));
    const xs = numericColumn(table, "qq.csv", "x");
    const ys = numericColumn(table, "qq.csv", "y");
    const expected = checksumValues([...xs, ...ys]);
    const result = render(PANELS.qq);
    expect(result.inputChecksum).toBe(expected);
    const meta = JSON.parse(/<metadata>(.*)<\/metadata>/.exec(result.svg)![1]);
    expect(meta.input_checksum).toBe(expected);
    expect(meta.plotted_checksum).toBe(expected);
  });

  it("ccdf axes default to log-log", () => {
    const svg = render(PANELS.ccdf).svg;
    // log ticks are powers of ten
    expect(svg).toContain(">1<");
    expect(svg).toContain(">10<");
  });
});

describe("schema errors", () => {
  it("names a missing column", () => {
    const dir = tmp();
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "k,fraction\n1,0.5\n");
    const spec = { ...PANELS.ccdf, inputs: [{ path: bad, label: "x" }] };
    expect(() => render(spec)).toThrow(/missing column 'value'/);
  });

  it("names a missing json field", () => {
    const dir = tmp();
    const bad = join(dir, "bad.json");
    writeFileSync(bad, JSON.stringify({ metric: "x" }));
    const spec = { ...PANELS.null_bars, inputs: [{ path: bad, label: "x" }] };
    expect(() => render(spec)).toThrow(/missing field 'real'/);
  });

  it("names a missing report metric", () => {
    const spec = { ...PANELS.report_bars, metric: "functional.nope" };
    expect(() => render(spec)).toThrow(/missing field 'functional.nope'/);
  });

  it("rejects non-numeric cells", () => {
    const dir = tmp();
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "x,y\n1,2\nfoo,3\n");
    const spec = { ...PANELS.qq, inputs: [{ path: bad, label: "x" }] };
    expect(() => render(spec)).toThrow(/non-numeric 'foo' in column 'x'/);
  });

  it("rejects an unknown panel kind in a spec file", () => {
    const dir = tmp();
    const specPath = join(dir, "spec.json");
    writeFileSync(specPath, JSON.stringify({ kind: "pie", output: "x.svg", inputs: [] }));
    expect(() => loadPanelSpec(specPath)).toThrow(SchemaError);
  });
});

describe("cli", () => {
  it("renders every panel kind end to end", () => {
    const dir = tmp();
    const specPaths = Object.entries(PANELS).map(([name, panel]) => {
      const output = join(dir, `${name}.svg`);
      const specPath = join(dir, `${name}.json`);
      const doc: Record<string, unknown> = { ...panel, output };
      writeFileSync(specPath, JSON.stringify(doc));
      return { specPath, output };
    });
    expect(main(specPaths.map((s) => s.specPath))).toBe(0);
    for (const { output } of specPaths) {
      const svg = readFileSync(output, "utf8");
      expect(svg).toContain("</svg>");
      const meta = JSON.parse(/<metadata>(.*)<\/metadata>/.exec(svg)![1]);
      expect(meta.plotted_checksum).toBe(meta.input_checksum);
    }
  });

  it("identical inputs give identical bytes", () => {
    const dir = tmp();
    const outputs = [join(dir, "a.svg"), join(dir, "b.svg")];
    for (const output of outputs) {
      const specPath = join(dir, "spec.json");
      writeFileSync(specPath, JSON.stringify({ ...PANELS.histogram_overlay, output }));
      expect(main([specPath])).toBe(0);
    }
    const [a, b] = outputs.map((p) => createHash("sha256").update(readFileSync(p)).digest("hex"));
    expect(a).toBe(b);
  });

  it("exits 2 on a schema problem, naming the column", () => {
    const dir = tmp();
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "replicate,avg\n0,1.5\n");
    const specPath = join(dir, "spec.json");
    writeFileSync(
      specPath,
      JSON.stringify({
        kind: "histogram_overlay",
        title: "t",
        output: join(dir, "x.svg"),
        inputs: [{ path: bad, label: "bad" }],
      }),
    );
    expect(main([specPath])).toBe(2);
  });

  it("exits 2 without arguments", () => {
    expect(main([])).toBe(2);
  });
});
