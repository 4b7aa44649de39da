/**
 * Embedding export: one interchange row per (record id, text field), in
 * corpus order, with a header comment documenting the encoder settings.
 */

import { mkdirSync, renameSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";

import { EMBED_FIELDS, readCorpus } from "./corpus.js";
import { DEFAULT_MODEL, resolveEncoder } from "./encoder.js";

export interface EmbedConfig {
  corpusPath: string;
  outPath: string;
  model: string;
  batchSize: number;
}

export const DEFAULT_BATCH = 32;

function atomicWrite(path: string, content: string): void {
  const dir = dirname(path) || ".";
  mkdirSync(dir, { recursive: true });
  const tmp = join(dir, `.${process.pid}.${Math.random().toString(36).slice(2)}.tmp`);
  writeFileSync(tmp, content, "utf-8");
  renameSync(tmp, path);
}

export async function embedCorpus(config: EmbedConfig): Promise<{ rows: number; dim: number }> {
  if (!Number.isInteger(config.batchSize) || config.batchSize < 1) {
    throw new Error(`batch size must be a positive integer, got ${config.batchSize}`);
  }
  const records = readCorpus(config.corpusPath);
  const encoder = await resolveEncoder(config.model);

  const pending: Array<{ id: string; field: string; text: string }> = [];
  for (const record of records) {
    for (const field of EMBED_FIELDS) {
      pending.push({ id: record.id, field, text: record[field] });
    }
  }

  const lines: string[] = [
    "# " +
      JSON.stringify({
        model: encoder.modelId,
        pooling: encoder.pooling,
        normalized: true,
        dim: encoder.dim,
      }),
  ];
  for (let start = 0; start < pending.length; start += config.batchSize) {
    const batch = pending.slice(start, start + config.batchSize);
    const vectors = await encoder.encode(batch.map((item) => item.text));
    batch.forEach((item, offset) => {
      const vector = vectors[offset];
      if (vector.length !== encoder.dim) {
        throw new Error(`encoder returned dimension ${vector.length}, expected ${encoder.dim}`);
      }
      if (vector.every((v) => v === 0)) {
        console.warn(`warning: empty text for id=${item.id} field=${item.field}, zero vector emitted`);
      }
      lines.push(JSON.stringify({ id: item.id, field: item.field, vector }));
    });
  }
  atomicWrite(config.outPath, lines.join("\n") + "\n");
  return { rows: pending.length, dim: encoder.dim };
}

export { DEFAULT_MODEL };
