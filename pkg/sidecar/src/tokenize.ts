/**
 * Tokenizer matching the consumer's documented rules: lowercased maximal runs
 * of Unicode letters/digits, apostrophes kept only word-internally (boundary
 * apostrophes are treated as quotation marks). Tag files must align with the
 * consumer's token counts, so this must not drift.
 */

const TOKEN = /[\p{L}\p{N}]+(?:'[\p{L}\p{N}]+)*/gu;

export function tokenize(text: string): string[] {
  const normalized = text.toLowerCase().replace(/’/g, "'");
  return normalized.match(TOKEN) ?? [];
}
