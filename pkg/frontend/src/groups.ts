// The seven label-equivalence groups used by relaxed evaluation (static
// mirror of the service's default groups file). The UI uses them only for
// hints: when a staged label and the stored label differ but share a group,
// the edit is flagged as an evaluation-equivalent variant.

export interface EquivalenceGroup {
  name: string;
  labels: string[];
}

export const EQUIVALENCE_GROUPS: EquivalenceGroup[] = [
  { name: "Verbal Core", labels: ["root", "aux", "cop"] },
  { name: "Clausal Complements", labels: ["xcomp", "ccomp"] },
  {
    name: "Discourse/Clause Linking",
    labels: ["parataxis", "appos", "conj", "discourse", "mark", "advmod"],
  },
  { name: "Adjectival/Clausal Modifiers", labels: ["amod", "acl", "acl:relcl"] },
  { name: "Nominal Modifiers", labels: ["nmod", "obl", "advmod"] },
  { name: "Numeric/Adjectival Modifiers", labels: ["nummod", "amod"] },
  {
    name: "Referential/Appositional Structures",
    labels: ["appos", "nmod", "conj"],
  },
];

/** Any-common-group equivalence; deliberately not transitive. */
export function tagsEquivalent(a: string, b: string): boolean {
  if (a === b) return true;
  return EQUIVALENCE_GROUPS.some(
    (g) => g.labels.includes(a) && g.labels.includes(b),
  );
}

/** Groups containing both labels (empty when not equivalent). */
export function sharedGroups(a: string, b: string): string[] {
  if (a === b) return [];
  return EQUIVALENCE_GROUPS.filter(
    (g) => g.labels.includes(a) && g.labels.includes(b),
  ).map((g) => g.name);
}
