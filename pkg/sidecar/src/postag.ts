/**
 * Coarse part-of-speech tagger: closed-class lexicon plus suffix heuristics,
 * defaulting to noun. Mirrors the consumer's fallback tagger so densities
 * computed from this file and from the fallback agree.
 */

export const CONTENT_TAGS = new Set(["noun", "verb", "adjective", "adverb"]);

const FUNCTION_WORDS = new Set(
  `a an the this that these those some any each every either neither no such
   i you he she it we they me him her us them my your his its our their mine
   yours hers ours theirs myself yourself himself herself itself ourselves
   yourselves themselves who whom whose which what whatever whichever whoever
   something anything nothing everything someone anyone everyone somebody
   anybody nobody everybody one ones
   of in to for with on at by from up down about into over after under above
   below between among through during before behind beyond within without
   against along across around near off out onto upon toward towards per via
   and or but nor so yet if because although though while whereas unless since
   than as whether once until when where why how
   be am is are was were been being have has had having do does did doing
   will would shall should may might must can could ought
   not n't never also there here then thus hence however therefore`
    .split(/\s+/)
    .filter(Boolean),
);

const NUMBER_WORDS = new Set(
  `zero one two three four five six seven eight nine ten eleven twelve
   thirteen fourteen fifteen sixteen seventeen eighteen nineteen twenty
   thirty forty fifty sixty seventy eighty ninety hundred thousand million
   billion first second third`
    .split(/\s+/)
    .filter(Boolean),
);

const SUFFIX_RULES: Array<[string, string, number]> = [
  ["ly", "adverb", 5],
  ["ing", "verb", 5],
  ["ed", "verb", 4],
  ["ize", "verb", 5],
  ["ise", "verb", 5],
  ["tion", "noun", 6],
  ["sion", "noun", 6],
  ["ment", "noun", 6],
  ["ness", "noun", 6],
  ["ity", "noun", 5],
  ["ance", "noun", 6],
  ["ence", "noun", 6],
  ["ship", "noun", 6],
  ["hood", "noun", 6],
  ["ism", "noun", 5],
  ["ous", "adjective", 5],
  ["ful", "adjective", 5],
  ["less", "adjective", 6],
  ["able", "adjective", 6],
  ["ible", "adjective", 6],
  ["ive", "adjective", 5],
  ["ish", "adjective", 5],
  ["ic", "adjective", 4],
  ["al", "adjective", 5],
];

export function tagToken(token: string): string {
  if (FUNCTION_WORDS.has(token)) return "function";
  if (/^\d+$/.test(token) || NUMBER_WORDS.has(token)) return "number";
  for (const [suffix, tag, minLen] of SUFFIX_RULES) {
    if (token.length >= minLen && token.endsWith(suffix)) return tag;
  }
  return "noun";
}

export function tagTokens(tokens: string[]): string[] {
  return tokens.map(tagToken);
}
