/**
 * POS-tag export: one row per record answer, tags aligned one-to-one with
 * the consumer's tokenization of that answer.
 */

import { mkdirSync, renameSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";

import { readCorpus } from "./corpus.js";
import { tagTokens } from "./postag.js";
import { tokenize } from "./tokenize.js";

export interface TagConfig {
  corpusPath: string;
  outPath: string;
}

export function tagCorpus(config: TagConfig): { rows: number } {
  const records = readCorpus(config.corpusPath);
  const lines = records.map((record) => {
    const tags = tagTokens(tokenize(record.answer));
    return JSON.stringify({ id: record.id, field: "answer", tags });
  });
  const dir = dirname(config.outPath) || ".";
  mkdirSync(dir, { recursive: true });
  const tmp = join(dir, `.${process.pid}.${Math.random().toString(36).slice(2)}.tmp`);
  writeFileSync(tmp, lines.join("\n") + "\n", "utf-8");
  renameSync(tmp, config.outPath);
  return { rows: records.length };
}
