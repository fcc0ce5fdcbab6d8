/**
 * Tiny bag-of-tokens embedding model loaded from a local directory:
 *
 *   config.json      model_id, arch_class, vocab_size, hidden_size, embedding_dim
 *   embeddings.bin   vocab_size x hidden_size float32, little-endian
 *   projection.bin   hidden_size x embedding_dim float32, little-endian
 *
 * Encoding looks up token rows in the embedding table, pools them (mean,
 * cls, or last_token), and projects the pooled state to the output dim.
 * An optional low-rank adapter directory patches the projection matrix as
 * W + (alpha / rank) * A @ B, merged once at load time.
 */

import { readFile } from "node:fs/promises";
import { join } from "node:path";
import { z } from "zod";
import { tokenize } from "./tokenizer.js";

export type Pooling = "mean" | "cls" | "last_token";

/** Raised for anything that should surface as a handshake failure. */
export class ModelLoadError extends Error {}

const modelConfigSchema = z.object({
  model_id: z.string().min(1),
  arch_class: z.enum(["encoder", "decoder"]),
  vocab_size: z.number().int().min(8),
  hidden_size: z.number().int().min(1),
  embedding_dim: z.number().int().min(1),
});

const adapterConfigSchema = z.object({
  rank: z.number().int().min(1),
  alpha: z.number().positive(),
  hidden_size: z.number().int().min(1),
  embedding_dim: z.number().int().min(1),
});

export type ModelConfig = z.infer<typeof modelConfigSchema>;
export type AdapterConfig = z.infer<typeof adapterConfigSchema>;

async function readJson(path: string): Promise<unknown> {
  let raw: string;
  try {
    raw = await readFile(path, "utf8");
  } catch (err) {
    throw new ModelLoadError(`cannot read ${path}: ${(err as Error).message}`);
  }
  try {
    return JSON.parse(raw);
  } catch (err) {
    throw new ModelLoadError(`${path} is not valid JSON: ${(err as Error).message}`);
  }
}

/** Read a rows x cols float32 matrix, rejecting size mismatches and non-finite values. */
async function readMatrix(path: string, rows: number, cols: number): Promise<Float32Array> {
  let buf: Buffer;
  try {
    buf = await readFile(path);
  } catch (err) {
    throw new ModelLoadError(`cannot read ${path}: ${(err as Error).message}`);
  }
  const expected = rows * cols * 4;
  if (buf.length !== expected) {
    throw new ModelLoadError(
      `${path}: expected ${expected} bytes (${rows}x${cols} float32), got ${buf.length}`,
    );
  }
  const out = new Float32Array(rows * cols);
  for (let i = 0; i < out.length; i++) {
    const v = buf.readFloatLE(i * 4);
    if (!Number.isFinite(v)) {
      throw new ModelLoadError(`${path}: non-finite weight at index ${i}`);
    }
    out[i] = v;
  }
  return out;
}

export class EmbeddingModel {
  private constructor(
    readonly modelId: string,
    readonly dim: number,
    readonly defaultPooling: Pooling,
    private readonly vocabSize: number,
    private readonly hidden: number,
    private readonly embeddings: Float32Array,
    private readonly projection: Float64Array,
  ) {}

  /** Load a model directory, optionally merging a low-rank adapter into the projection. */
  static async load(modelDir: string, adapterDir?: string): Promise<EmbeddingModel> {
    const parsed = modelConfigSchema.safeParse(await readJson(join(modelDir, "config.json")));
    if (!parsed.success) {
      throw new ModelLoadError(`${modelDir}/config.json: ${parsed.error.issues[0]?.message}`);
    }
    const cfg = parsed.data;
    const embeddings = await readMatrix(
      join(modelDir, "embeddings.bin"), cfg.vocab_size, cfg.hidden_size,
    );
    const base = await readMatrix(
      join(modelDir, "projection.bin"), cfg.hidden_size, cfg.embedding_dim,
    );

    const projection = new Float64Array(base);
    if (adapterDir !== undefined) {
      applyAdapter(projection, cfg, await loadAdapter(adapterDir, cfg));
    }

    const defaultPooling: Pooling = cfg.arch_class === "encoder" ? "mean" : "last_token";
    return new EmbeddingModel(
      cfg.model_id, cfg.embedding_dim, defaultPooling,
      cfg.vocab_size, cfg.hidden_size, embeddings, projection,
    );
  }

  /** Pooled, projected, unnormalized sentence embeddings, one per text. */
  encode(texts: string[], pooling: Pooling, maxSeqLen: number): number[][] {
    return texts.map((text) => this.embedOne(text, pooling, maxSeqLen));
  }

  private embedOne(text: string, pooling: Pooling, maxSeqLen: number): number[] {
    const ids = tokenize(text, this.vocabSize, maxSeqLen);
    const pooled = new Float64Array(this.hidden);

    if (pooling === "mean") {
      for (const id of ids) {
        const row = id * this.hidden;
        for (let h = 0; h < this.hidden; h++) pooled[h] += this.embeddings[row + h];
      }
      for (let h = 0; h < this.hidden; h++) pooled[h] /= ids.length;
    } else {
      const id = pooling === "cls" ? ids[0] : ids[ids.length - 1];
      const row = id * this.hidden;
      for (let h = 0; h < this.hidden; h++) pooled[h] = this.embeddings[row + h];
    }

    const out = new Array<number>(this.dim);
    for (let j = 0; j < this.dim; j++) {
      let acc = 0;
      for (let h = 0; h < this.hidden; h++) acc += pooled[h] * this.projection[h * this.dim + j];
      out[j] = acc;
    }
    return out;
  }
}

async function loadAdapter(
  adapterDir: string, model: ModelConfig,
): Promise<{ cfg: AdapterConfig; a: Float32Array; b: Float32Array }> {
  const parsed = adapterConfigSchema.safeParse(await readJson(join(adapterDir, "adapter.json")));
  if (!parsed.success) {
    throw new ModelLoadError(`${adapterDir}/adapter.json: ${parsed.error.issues[0]?.message}`);
  }
  const cfg = parsed.data;
  if (cfg.hidden_size !== model.hidden_size || cfg.embedding_dim !== model.embedding_dim) {
    throw new ModelLoadError(
      `adapter shape ${cfg.hidden_size}x${cfg.embedding_dim} does not match ` +
      `model ${model.hidden_size}x${model.embedding_dim}`,
    );
  }
  if (cfg.rank > Math.min(cfg.hidden_size, cfg.embedding_dim)) {
    throw new ModelLoadError(
      `adapter rank ${cfg.rank} exceeds min(${cfg.hidden_size}, ${cfg.embedding_dim})`,
    );
  }
  const a = await readMatrix(join(adapterDir, "lora_a.bin"), cfg.hidden_size, cfg.rank);
  const b = await readMatrix(join(adapterDir, "lora_b.bin"), cfg.rank, cfg.embedding_dim);
  return { cfg, a, b };
}

function applyAdapter(
  projection: Float64Array,
  model: ModelConfig,
  adapter: { cfg: AdapterConfig; a: Float32Array; b: Float32Array },
): void {
  const { rank, alpha } = adapter.cfg;
  const scale = alpha / rank;
  const dim = model.embedding_dim;
  for (let h = 0; h < model.hidden_size; h++) {
    for (let j = 0; j < dim; j++) {
      let acc = 0;
      for (let r = 0; r < rank; r++) acc += adapter.a[h * rank + r] * adapter.b[r * dim + j];
      projection[h * dim + j] += scale * acc;
    }
  }
}
