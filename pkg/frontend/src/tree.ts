// Dependency-tree view model built from the server's children_map. Head
// editing happens by clicking a node here, never by typing an index, so a
// chosen head always exists in the sentence.

import type { SentenceJson, TokenJson } from "./types";

export interface TreeNode {
  token: TokenJson;
  children: TreeNode[];
}

/**
 * Nested tree from the server's children_map (null when the structure is
 * not a well-formed tree; callers fall back to a flat token list).
 */
export function buildTree(sentence: SentenceJson): TreeNode[] | null {
  const map = sentence.children_map;
  if (map === null) return null;
  const byId = new Map(sentence.tokens.map((t) => [t.id, t]));
  const build = (id: number): TreeNode | null => {
    const token = byId.get(id);
    if (!token) return null;
    const children = (map[String(id)] ?? [])
      .map(build)
      .filter((n): n is TreeNode => n !== null);
    return { token, children };
  };
  return sentence.tokens
    .filter((t) => t.head_id === 0)
    .map((t) => build(t.id))
    .filter((n): n is TreeNode => n !== null);
}

/** Flattened (node, depth) rows for indented rendering. */
export function treeRows(roots: TreeNode[]): Array<{ token: TokenJson; depth: number }> {
  const rows: Array<{ token: TokenJson; depth: number }> = [];
  const walk = (node: TreeNode, depth: number) => {
    rows.push({ token: node.token, depth });
    for (const child of node.children) walk(child, depth + 1);
  };
  for (const root of roots) walk(root, 0);
  return rows;
}
