#!/usr/bin/env node
/**
 * embed-sidecar: write embedding / POS-tag interchange files for a corpus.
 *
 *   embed --corpus c.jsonl --out e.jsonl [--model <id>] [--batch 32]
 *   tag   --corpus c.jsonl --out t.jsonl
 *
 * Builtin deterministic models: hash-d<dim> (e.g. hash-d256). Other model
 * ids load through transformers.js when it is installed.
 */

import { DEFAULT_BATCH, DEFAULT_MODEL, embedCorpus } from "./embed.js";
import { tagCorpus } from "./tag.js";

const USAGE = `usage:
  embed-sidecar embed --corpus <corpus.jsonl> --out <embeddings.jsonl> [--model <id>] [--batch <n>]
  embed-sidecar tag   --corpus <corpus.jsonl> --out <tags.jsonl>

default model: ${DEFAULT_MODEL} (requires transformers.js); builtin: hash-d<dim>`;

function parseFlags(argv: string[], allowed: Set<string>): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || !allowed.has(key)) {
      throw new UsageError(`unknown or misplaced flag '${key}'`);
    }
    const value = argv[i + 1];
    if (value === undefined) {
      throw new UsageError(`flag '${key}' needs a value`);
    }
    flags.set(key.slice(2), value);
  }
  return flags;
}

class UsageError extends Error {}

function required(flags: Map<string, string>, name: string): string {
  const value = flags.get(name);
  if (value === undefined) {
    throw new UsageError(`missing required flag '--${name}'`);
  }
  return value;
}

async function run(argv: string[]): Promise<void> {
  const [command, ...rest] = argv;
  if (command === "embed") {
    const flags = parseFlags(rest, new Set(["--corpus", "--out", "--model", "--batch"]));
    const result = await embedCorpus({
      corpusPath: required(flags, "corpus"),
      outPath: required(flags, "out"),
      model: flags.get("model") ?? DEFAULT_MODEL,
      batchSize: Number(flags.get("batch") ?? DEFAULT_BATCH),
    });
    console.log(`wrote ${result.rows} embedding rows (dim ${result.dim})`);
  } else if (command === "tag") {
    const flags = parseFlags(rest, new Set(["--corpus", "--out"]));
    const result = tagCorpus({
      corpusPath: required(flags, "corpus"),
      outPath: required(flags, "out"),
    });
    console.log(`wrote ${result.rows} tag rows`);
  } else {
    throw new UsageError(command ? `unknown command '${command}'` : "no command given");
  }
}

run(process.argv.slice(2)).catch((err) => {
  if (err instanceof UsageError) {
    console.error(`error: ${err.message}\n\n${USAGE}`);
    process.exit(2);
  }
  console.error(JSON.stringify({ error: err.name ?? "Error", message: err.message ?? String(err) }));
  process.exit(1);
});
