/**
 * Stub encode path: deterministic pseudo-embeddings with a programmed
 * per-request delay, so the bench harness can be exercised without any
 * model files.
 */

import { createHash } from "node:crypto";

/** Deterministic pseudo-embedding in [-1, 1], a pure function of the text. */
export function stubVector(text: string, dim: number): number[] {
  const out: number[] = [];
  let counter = 0;
  while (out.length < dim) {
    const ctr = Buffer.alloc(4);
    ctr.writeUInt32LE(counter, 0);
    const digest = createHash("sha256").update(text, "utf8").update(ctr).digest();
    for (let i = 0; i + 4 <= digest.length && out.length < dim; i += 4) {
      out.push(digest.readUInt32LE(i) / 2147483647.5 - 1);
    }
    counter++;
  }
  return out;
}
