/** Command-line parsing for the provider; flags mirror the runtime config. */

import { parseArgs } from "node:util";
import type { Pooling } from "./model.js";

/** Raised for bad command lines; main reports it on stderr and exits 2. */
export class UsageError extends Error {}

export interface ModelMode {
  mode: "model";
  modelRef: string;
  adapterRef?: string;
  maxSeqLen: number;
  pooling?: Pooling; // absent means: use the model's arch-class default
  device: string;
}

export interface StubMode {
  mode: "stub";
  dim: number;
  delayMs: number;
}

export type ProviderConfig = ModelMode | StubMode;

export const USAGE = [
  "usage: main.js [--model-ref PATH] [--adapter-ref PATH] [--max-seq-len N]",
  "               [--pooling mean|cls|last_token] [--device cpu]",
  "       main.js --stub [--dim N] [--delay-ms MS]",
].join("\n");

const POOLINGS: readonly Pooling[] = ["mean", "cls", "last_token"];

function intFlag(name: string, raw: string, min: number): number {
  const value = Number(raw);
  if (!Number.isInteger(value) || value < min) {
    throw new UsageError(`--${name} must be an integer >= ${min}, got ${JSON.stringify(raw)}`);
  }
  return value;
}

/** Parse argv into a provider config; defaultModelRef backs a bare invocation. */
export function parseCliArgs(argv: string[], defaultModelRef: string): ProviderConfig {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        "model-ref": { type: "string" },
        "adapter-ref": { type: "string" },
        "max-seq-len": { type: "string" },
        "pooling": { type: "string" },
        "device": { type: "string" },
        "stub": { type: "boolean", default: false },
        "dim": { type: "string" },
        "delay-ms": { type: "string" },
      },
    }));
  } catch (err) {
    throw new UsageError((err as Error).message);
  }

  if (values.stub) {
    for (const flag of ["model-ref", "adapter-ref", "max-seq-len", "pooling", "device"] as const) {
      if (values[flag] !== undefined) throw new UsageError(`--${flag} does not apply to --stub`);
    }
    const dim = values.dim === undefined ? 8 : intFlag("dim", values.dim, 1);
    let delayMs = 0;
    if (values["delay-ms"] !== undefined) {
      delayMs = Number(values["delay-ms"]);
      if (!Number.isFinite(delayMs) || delayMs < 0) {
        throw new UsageError(`--delay-ms must be a number >= 0, got ${JSON.stringify(values["delay-ms"])}`);
      }
    }
    return { mode: "stub", dim, delayMs };
  }

  for (const flag of ["dim", "delay-ms"] as const) {
    if (values[flag] !== undefined) throw new UsageError(`--${flag} only applies to --stub`);
  }
  const pooling = values.pooling as Pooling | undefined;
  if (pooling !== undefined && !POOLINGS.includes(pooling)) {
    throw new UsageError(`--pooling must be one of ${POOLINGS.join(", ")}`);
  }
  const device = values.device ?? "cpu";
  if (device !== "cpu") {
    throw new UsageError(`only --device cpu is supported, got ${JSON.stringify(device)}`);
  }
  return {
    mode: "model",
    modelRef: values["model-ref"] ?? defaultModelRef,
    adapterRef: values["adapter-ref"],
    maxSeqLen: values["max-seq-len"] === undefined ? 512 : intFlag("max-seq-len", values["max-seq-len"], 1),
    pooling,
    device,
  };
}
