#!/usr/bin/env node
/**
 * Provider entry point. With no flags it serves the bundled tiny model;
 * --stub serves deterministic vectors instead. See USAGE in config.ts.
 */

import { setTimeout as sleep } from "node:timers/promises";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import { parseCliArgs, UsageError, USAGE } from "./config.js";
import { EmbeddingModel, ModelLoadError, type Pooling } from "./model.js";
import { serve, type Encoder, type LoadResult } from "./server.js";
import { stubVector } from "./stub.js";

const PACKAGE_ROOT = join(dirname(fileURLToPath(import.meta.url)), "..");
const DEFAULT_MODEL = join(PACKAGE_ROOT, "models", "tiny-encoder");

class StubEncoder implements Encoder {
  readonly modelId: string;
  constructor(readonly dim: number, private readonly delayMs: number) {
    this.modelId = `stub-${dim}d`;
  }

  async encode(texts: string[]): Promise<number[][]> {
    if (this.delayMs > 0) await sleep(this.delayMs);
    return texts.map((t) => stubVector(t, this.dim));
  }
}

class ModelEncoder implements Encoder {
  readonly modelId: string;
  readonly dim: number;
  constructor(
    private readonly model: EmbeddingModel,
    private readonly pooling: Pooling,
    private readonly maxSeqLen: number,
  ) {
    this.modelId = model.modelId;
    this.dim = model.dim;
  }

  encode(texts: string[]): number[][] {
    return this.model.encode(texts, this.pooling, this.maxSeqLen);
  }
}

// A consumer that exits mid-reply should end us quietly, not stack-trace.
process.stdout.on("error", (err: NodeJS.ErrnoException) => {
  if (err.code === "EPIPE") process.exit(1);
  throw err;
});

async function main(): Promise<number> {
  let config;
  try {
    config = parseCliArgs(process.argv.slice(2), DEFAULT_MODEL);
  } catch (err) {
    if (err instanceof UsageError) {
      process.stderr.write(`${err.message}\n${USAGE}\n`);
      return 2;
    }
    throw err;
  }

  let load: LoadResult;
  if (config.mode === "stub") {
    load = { ok: true, encoder: new StubEncoder(config.dim, config.delayMs) };
  } else {
    try {
      const model = await EmbeddingModel.load(config.modelRef, config.adapterRef);
      load = {
        ok: true,
        encoder: new ModelEncoder(model, config.pooling ?? model.defaultPooling, config.maxSeqLen),
      };
    } catch (err) {
      if (!(err instanceof ModelLoadError)) throw err;
      load = { ok: false, error: err.message };
    }
  }
  return serve(load);
}

main()
  .then((code) => {
    process.exitCode = code;
    process.stdin.destroy(); // let the event loop drain instead of process.exit
  })
  .catch((err) => {
    process.stderr.write(`fatal: ${err instanceof Error ? err.stack ?? err.message : err}\n`);
    process.exitCode = 1;
    process.stdin.destroy();
  });
