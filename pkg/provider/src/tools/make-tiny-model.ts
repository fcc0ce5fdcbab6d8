/**
 * Generates the bundled tiny models and adapter under models/. Weights are
 * seeded, so repeated builds produce byte-identical files; nothing is
 * downloaded. Run via `npm run build` (after tsc) or directly:
 *
 *   node dist/tools/make-tiny-model.js
 */

import { mkdir, writeFile } from "node:fs/promises";
import { dirname, join } from "node:path";
import { fileURLToPath, pathToFileURL } from "node:url";
import { uniformWeights } from "../rng.js";
import type { AdapterConfig, ModelConfig } from "../model.js";

export interface ModelSeeds {
  embeddings: number;
  projection: number;
}

function matrixBytes(weights: Float32Array): Buffer {
  const buf = Buffer.alloc(weights.length * 4);
  for (let i = 0; i < weights.length; i++) buf.writeFloatLE(weights[i], i * 4);
  return buf;
}

/** Write config.json + weight files for one model directory. */
export async function writeModel(dir: string, cfg: ModelConfig, seeds: ModelSeeds): Promise<void> {
  await mkdir(dir, { recursive: true });
  await writeFile(join(dir, "config.json"), JSON.stringify(cfg, null, 2) + "\n");
  await writeFile(
    join(dir, "embeddings.bin"),
    matrixBytes(uniformWeights(seeds.embeddings, cfg.vocab_size * cfg.hidden_size, 0.5)),
  );
  await writeFile(
    join(dir, "projection.bin"),
    matrixBytes(uniformWeights(seeds.projection, cfg.hidden_size * cfg.embedding_dim, 0.3)),
  );
}

/** Write adapter.json + low-rank factors for one adapter directory. */
export async function writeAdapter(dir: string, cfg: AdapterConfig, seeds: ModelSeeds): Promise<void> {
  await mkdir(dir, { recursive: true });
  await writeFile(join(dir, "adapter.json"), JSON.stringify(cfg, null, 2) + "\n");
  await writeFile(
    join(dir, "lora_a.bin"),
    matrixBytes(uniformWeights(seeds.embeddings, cfg.hidden_size * cfg.rank, 0.2)),
  );
  await writeFile(
    join(dir, "lora_b.bin"),
    matrixBytes(uniformWeights(seeds.projection, cfg.rank * cfg.embedding_dim, 0.2)),
  );
}

export async function generateBundledModels(root: string): Promise<void> {
  await writeModel(
    join(root, "models", "tiny-encoder"),
    {
      model_id: "tiny-encoder-24d",
      arch_class: "encoder",
      vocab_size: 2048,
      hidden_size: 32,
      embedding_dim: 24,
    },
    { embeddings: 11, projection: 12 },
  );
  await writeModel(
    join(root, "models", "tiny-decoder"),
    {
      model_id: "tiny-decoder-24d",
      arch_class: "decoder",
      vocab_size: 2048,
      hidden_size: 32,
      embedding_dim: 24,
    },
    { embeddings: 21, projection: 22 },
  );
  await writeAdapter(
    join(root, "models", "tiny-adapter"),
    { rank: 4, alpha: 8, hidden_size: 32, embedding_dim: 24 },
    { embeddings: 31, projection: 32 },
  );
}

const runAsScript =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;

if (runAsScript) {
  const root = join(dirname(fileURLToPath(import.meta.url)), "..", "..");
  generateBundledModels(root).catch((err) => {
    process.stderr.write(`model generation failed: ${err}\n`);
    process.exitCode = 1;
  });
}
