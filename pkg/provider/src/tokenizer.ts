/**
 * Hashing tokenizer: words are bucketed into a fixed vocabulary by FNV-1a,
 * so no vocabulary file ships with the model. Every sequence starts with a
 * CLS token, which keeps cls pooling anchored and empty input non-degenerate.
 */

export const CLS_ID = 1;
const RESERVED_IDS = 2; // 0 = padding (unused), 1 = CLS

/** FNV-1a 32-bit hash over UTF-16 code units. */
export function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

/** Token ids for a text: [CLS, word buckets...], truncated to maxSeqLen. */
export function tokenize(text: string, vocabSize: number, maxSeqLen: number): number[] {
  const ids = [CLS_ID];
  const buckets = vocabSize - RESERVED_IDS;
  for (const match of text.toLowerCase().matchAll(/[\p{L}\p{N}]+/gu)) {
    if (ids.length >= maxSeqLen) break;
    ids.push(RESERVED_IDS + (fnv1a(match[0]) % buckets));
  }
  return ids;
}
