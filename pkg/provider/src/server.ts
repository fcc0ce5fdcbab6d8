/**
 * Request loop for the provider wire protocol: newline-delimited JSON on
 * stdin/stdout, one request in flight at a time.
 *
 *   {"cmd": "hello"}                   -> {"ok": true, "model_id": str, "dim": int}
 *   {"cmd": "encode", "texts": [...]}  -> {"ok": true, "vectors": [[...], ...]}
 *   {"cmd": "echo"}                    -> {"ok": true}
 *   {"cmd": "status"}                  -> {"ok": true, "peak_mem_bytes": int}
 *   {"cmd": "shutdown"}                -> {"ok": true}, then the loop exits 0
 *
 * Failures reply {"ok": false, "error": "..."} and keep serving, with one
 * exception: when the model failed to load, hello reports the error and the
 * loop exits nonzero.
 */

import { createInterface } from "node:readline";
import type { Readable, Writable } from "node:stream";

export interface Encoder {
  modelId: string;
  dim: number;
  encode(texts: string[]): number[][] | Promise<number[][]>;
}

export type LoadResult =
  | { ok: true; encoder: Encoder }
  | { ok: false; error: string };

/** Serve the protocol until shutdown or EOF; resolves to the process exit code. */
export async function serve(
  load: LoadResult,
  input: Readable = process.stdin,
  output: Writable = process.stdout,
): Promise<number> {
  let peak = process.memoryUsage().rss;
  const observeMemory = () => {
    peak = Math.max(peak, process.memoryUsage().rss);
  };

  // Await the drain so the reply is on the wire before we act on it —
  // matters for shutdown, where exiting early could truncate the line.
  const reply = (obj: unknown): Promise<void> =>
    new Promise((resolve) => {
      if (output.write(JSON.stringify(obj) + "\n")) resolve();
      else output.once("drain", resolve);
    });

  const rl = createInterface({ input });
  for await (const raw of rl) {
    const line = raw.trim();
    if (line === "") continue;

    let msg: { cmd?: unknown; texts?: unknown };
    try {
      msg = JSON.parse(line);
    } catch (err) {
      await reply({ ok: false, error: `bad json: ${(err as Error).message}` });
      continue;
    }
    const cmd = msg?.cmd;

    if (!load.ok) {
      await reply({ ok: false, error: load.error });
      if (cmd === "hello") {
        rl.close();
        return 1;
      }
      continue;
    }

    const encoder = load.encoder;
    switch (cmd) {
      case "hello":
        await reply({ ok: true, model_id: encoder.modelId, dim: encoder.dim });
        break;
      case "encode": {
        const texts = msg.texts;
        if (!Array.isArray(texts) || !texts.every((t) => typeof t === "string")) {
          await reply({ ok: false, error: "encode expects a list of strings" });
          break;
        }
        try {
          const vectors = await encoder.encode(texts);
          observeMemory();
          await reply({ ok: true, vectors });
        } catch (err) {
          await reply({ ok: false, error: `encode failed: ${(err as Error).message}` });
        }
        break;
      }
      case "echo":
        await reply({ ok: true });
        break;
      case "status":
        observeMemory();
        await reply({ ok: true, peak_mem_bytes: peak });
        break;
      case "shutdown":
        await reply({ ok: true });
        rl.close();
        return 0;
      default:
        await reply({ ok: false, error: `unknown command ${JSON.stringify(cmd)}` });
    }
  }
  return 0;
}
