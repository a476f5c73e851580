#!/usr/bin/env node
/**
 * dagkit-render <panel-spec.json> [...more specs]
 *
 * Renders each PanelSpec to its `output` SVG path. Exits 2 on schema or
 * input problems (the message names the offending file/column), 1 on
 * anything unexpected.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import { pathToFileURL } from "node:url";

import { SchemaError } from "./csv.js";
import { render } from "./panels.js";
import { loadPanelSpec } from "./spec.js";

export function main(argv: string[]): number {
  if (argv.length === 0) {
    console.error("usage: dagkit-render <panel-spec.json> [...more specs]");
    return 2;
  }
  try {
    for (const specPath of argv) {
      const spec = loadPanelSpec(specPath);
      const result = render(spec);
      mkdirSync(dirname(spec.output), { recursive: true });
      writeFileSync(spec.output, result.svg + "\n", "utf8");
      console.log(`${spec.output} (${spec.kind}, plotted ${result.plottedChecksum.slice(0, 23)}...)`);
    }
  } catch (error) {
    if (error instanceof SchemaError) {
      console.error(`dagkit-render: ${error.message}`);
      return 2;
    }
    console.error(`dagkit-render: unexpected failure: ${String(error)}`);
    return 1;
  }
  return 0;
}

if (process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
