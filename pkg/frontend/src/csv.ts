/**
 * Strict readers for the analysis artifacts.
 *
 * Every reader validates the header and fails naming the missing column;
 * rendering must never guess at schemas.
 */

import { readFileSync } from "node:fs";

export class SchemaError extends Error {}

export interface Table {
  columns: string[];
  rows: string[][];
}

/** Minimal RFC-4180 CSV reader (quoted fields, escaped quotes). */
export function parseCsv(text: string): Table {
  const rows: string[][] = [];
  let row: string[] = [];
  let field = "";
  let inQuotes = false;
  let i = 0;
  const push = () => {
    row.push(field);
    field = "";
  };
  const endRow = () => {
    push();
    if (row.length > 1 || row[0] !== "") rows.push(row);
    row = [];
  };
  while (i < text.length) {
    const c = text[i];
    if (inQuotes) {
      if (c === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i += 1;
        } else {
          inQuotes = false;
        }
      } else {
        field += c;
      }
    } else if (c === '"') {
      inQuotes = true;
    } else if (c === ",") {
      push();
    } else if (c === "\n") {
      endRow();
    } else if (c !== "\r") {
      field += c;
    }
    i += 1;
  }
  if (field.length > 0 || row.length > 0) endRow();
  if (rows.length === 0) throw new SchemaError("empty CSV");
  const [columns, ...data] = rows;
  return { columns, rows: data };
}

export function readTable(path: string, required: string[]): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new SchemaError(`cannot read input file: ${path}`);
  }
  const table = parseCsv(text);
  for (const column of required) {
    if (!table.columns.includes(column)) {
      throw new SchemaError(`${path}: missing column '${column}'`);
    }
  }
  return table;
}

/** Numeric column; empty cells are dropped when `optional`, else fatal. */
export function numericColumn(
  table: Table,
  path: string,
  column: string,
  optional = false,
): number[] {
  const index = table.columns.indexOf(column);
  const out: number[] = [];
  for (const [rowIndex, row] of table.rows.entries()) {
    const cell = row[index] ?? "";
    if (cell === "") {
      if (optional) continue;
      throw new SchemaError(`${path}: empty value in column '${column}' (row ${rowIndex + 2})`);
    }
    const value = Number(cell);
    if (!Number.isFinite(value)) {
      throw new SchemaError(`${path}: non-numeric '${cell}' in column '${column}'`);
    }
    out.push(value);
  }
  return out;
}

export function readJson(path: string): unknown {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new SchemaError(`cannot read input file: ${path}`);
  }
  try {
    return JSON.parse(text);
  } catch {
    throw new SchemaError(`${path}: not valid JSON`);
  }
}

/** Fetch a (possibly nested, dot-separated) numeric field from JSON. */
export function jsonNumber(doc: unknown, path: string, field: string): number {
  let node: unknown = doc;
  for (const part of field.split(".")) {
    if (typeof node !== "object" || node === null || !(part in node)) {
      throw new SchemaError(`${path}: missing field '${field}'`);
    }
    node = (node as Record<string, unknown>)[part];
  }
  if (typeof node !== "number") {
    throw new SchemaError(`${path}: field '${field}' is not a number`);
  }
  return node;
}
