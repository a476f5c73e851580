/**
 * The display-only contract: a panel embeds one checksum over the values
 * parsed from its inputs and one over the values actually handed to the
 * SVG marks. The two must be identical — rendering may scale and draw,
 * never recompute.
 */

import { createHash } from "node:crypto";

export function checksumValues(values: number[]): string {
  const canonical = values.map((v) => v.toString()).join("\n");
  return "sha256:" + createHash("sha256").update(canonical).digest("hex");
}
