/**
 * Minimal reader for the graded-answer corpus interchange: one JSON object
 * per line with the text fields this tool embeds or tags.
 */

import { readFileSync } from "node:fs";

export const EMBED_FIELDS = ["context", "question", "answer", "rubric_fc"] as const;
export type EmbedField = (typeof EMBED_FIELDS)[number];

export interface CorpusRecord {
  id: string;
  context: string;
  question: string;
  answer: string;
  rubric_fc: string;
}

export function readCorpus(path: string): CorpusRecord[] {
  const records: CorpusRecord[] = [];
  const seen = new Set<string>();
  const lines = readFileSync(path, "utf-8").split("\n");
  lines.forEach((line, index) => {
    const trimmed = line.trim();
    if (!trimmed) return;
    const where = `${path}:${index + 1}`;
    let parsed: unknown;
    try {
      parsed = JSON.parse(trimmed);
    } catch (err) {
      throw new Error(`${where}: invalid JSON (${(err as Error).message})`);
    }
    const record = parsed as Record<string, unknown>;
    if (typeof record !== "object" || record === null) {
      throw new Error(`${where}: record is not an object`);
    }
    for (const field of ["id", ...EMBED_FIELDS]) {
      if (typeof record[field] !== "string") {
        throw new Error(`${where}: missing or non-string field '${field}'`);
      }
    }
    const id = record.id as string;
    if (seen.has(id)) {
      throw new Error(`${where}: duplicate id '${id}'`);
    }
    seen.add(id);
    records.push({
      id,
      context: record.context as string,
      question: record.question as string,
      answer: record.answer as string,
      rubric_fc: record.rubric_fc as string,
    });
  });
  if (records.length === 0) {
    throw new Error(`${path}: corpus is empty`);
  }
  return records;
}
