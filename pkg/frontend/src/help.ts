// Static reference sheets shown in the help panel. Annotators unfamiliar
// with UD conventions keep these open while reviewing.

export interface ReferenceRow {
  tag: string;
  label: string;
  example: string;
}

export const UPOS_REFERENCE: ReferenceRow[] = [
  { tag: "NOUN", label: "Noun", example: "house, tree" },
  { tag: "VERB", label: "Verb", example: "to run, to speak" },
  { tag: "ADJ", label: "Adjective", example: "big, pretty" },
  { tag: "PRON", label: "Pronoun", example: "I, they" },
  { tag: "ADV", label: "Adverb", example: "quickly, well" },
  { tag: "ADP", label: "Adposition", example: "in, under" },
  { tag: "DET", label: "Determiner", example: "the, his/her" },
  { tag: "PROPN", label: "Proper noun", example: "Spain, Juan" },
  { tag: "NUM", label: "Numeral", example: "three, twenty" },
  { tag: "CCONJ", label: "Coordinating conjunction", example: "and, but" },
  { tag: "SCONJ", label: "Subordinating conjunction", example: "because, although" },
  { tag: "PART", label: "Particle", example: "not, n't" },
  { tag: "INTJ", label: "Interjection", example: "hello!, ugh!" },
  { tag: "PUNCT", label: "Punctuation", example: ". , ?" },
  { tag: "SYM", label: "Symbol", example: "%, 🙂" },
  { tag: "other", label: "Miscellaneous", example: "context-dependent" },
];

export const DEPREL_REFERENCE: ReferenceRow[] = [
  { tag: "nsubj", label: "Nominal subject", example: "SHE ran" },
  { tag: "obj", label: "Direct object", example: "I saw HIM" },
  { tag: "iobj", label: "Indirect object", example: "I gave HER a book" },
  { tag: "root", label: "Sentence root", example: "he LEFT" },
  { tag: "det", label: "Determiner", example: "THE book" },
  { tag: "case", label: "Case marker", example: "IN the house" },
  { tag: "amod", label: "Adjectival modifier", example: "BIG house" },
  { tag: "advmod", label: "Adverbial modifier", example: "ran QUICKLY" },
  { tag: "conj", label: "Conjunct", example: "tea and COFFEE" },
  { tag: "cc", label: "Coordinating conjunction", example: "tea AND coffee" },
  { tag: "aux", label: "Auxiliary", example: "she DID n't go" },
  { tag: "cop", label: "Copula", example: "it WAS the same" },
  { tag: "mark", label: "Subordinator", example: "said THAT she left" },
  { tag: "xcomp", label: "Open clausal complement", example: "wants TO RIDE" },
  { tag: "ccomp", label: "Clausal complement", example: "said SHE LEFT" },
  { tag: "discourse", label: "Discourse element", example: "BUENO, whatever" },
  { tag: "orphan", label: "Orphan under ellipsis", example: "and she DANCING" },
  { tag: "parataxis", label: "Side-by-side clauses", example: "tú sabes, it was" },
  { tag: "punct", label: "Punctuation", example: "attached to the root" },
  { tag: "dep", label: "Unclassified dependency", example: "last resort" },
];

export const EDITING_NOTES: string[] = [
  "Every sentence needs exactly one root (HEAD ID 0, relation root).",
  "Pick heads by clicking a token in the tree pane; indices are never typed.",
  "Punctuation attaches to the root or main clause verb with punct.",
  "Repetitions keep the same role and head on both instances.",
  "Unrecoverable heads stay unset (_); use orphan or dep under ellipsis.",
  "English contractions stay split (did + n't); Guaraní words are never split.",
  "The SPEC toggle marks informal structures (repetition, ellipsis, hesitation).",
];
