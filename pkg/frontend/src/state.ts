// Review session state: one sentence at a time, staged edits on top of the
// last server snapshot.
//
// Two invariants hold throughout:
//   1. every displayed value is either the server's last response or a
//      visibly staged local edit (nothing else is ever synthesized);
//   2. Accept is offered only while the server reports zero hard
//      violations, and the server re-checks on POST anyway.
//
// Staged edits echo the server value they replace (optimistic concurrency);
// a 409 means the sentence moved underneath us and the user is asked to
// reload, while a network failure keeps the staged edits untouched so no
// work is lost offline.

import { ApiClient, ConflictError, NetworkError } from "./api";
import { sharedGroups } from "./groups";
import type {
  EditableField,
  SentenceJson,
  TokenJson,
  ViolationJson,
} from "./types";

export interface StagedEdit {
  tokenId: number | null;
  field: EditableField;
  oldValue: unknown;
  newValue: unknown;
}

export type SessionNotice =
  | { kind: "conflict"; message: string }
  | { kind: "offline"; message: string }
  | { kind: "rejected"; message: string }
  | { kind: "accept-blocked"; message: string; violations: ViolationJson[] };

function editKey(tokenId: number | null, field: EditableField): string {
  return `${tokenId ?? "sentence"}:${field}`;
}

export function serverValue(
  sentence: SentenceJson,
  tokenId: number | null,
  field: EditableField,
): unknown {
  if (field === "SPEC") return sentence.spec;
  const token = sentence.tokens.find((t) => t.id === tokenId);
  if (!token) throw new Error(`no token ${tokenId} in ${sentence.sent_id}`);
  switch (field) {
    case "UPOS":
      return token.upos;
    case "HEAD_ID":
      return token.head_id;
    case "DEPREL":
      return token.deprel;
    case "LEMMA":
      return token.lemma;
  }
}

export class ReviewSession {
  sentence: SentenceJson | null = null;
  staged = new Map<string, StagedEdit>();
  notice: SessionNotice | null = null;
  needsReload = false;
  headPickFor: number | null = null;

  constructor(private api: ApiClient) {}

  async load(sentId: string): Promise<void> {
    this.sentence = await this.api.sentence(sentId);
    this.staged.clear();
    this.notice = null;
    this.needsReload = false;
    this.headPickFor = null;
  }

  get readOnly(): boolean {
    return this.sentence !== null && this.sentence.status === "ACCEPTED";
  }

  /** Stage a local edit; the echo (oldValue) is the current server value. */
  stageEdit(tokenId: number | null, field: EditableField, newValue: unknown): void {
    if (!this.sentence) throw new Error("no sentence loaded");
    if (this.readOnly) throw new Error("sentence is accepted; view is read-only");
    const oldValue = serverValue(this.sentence, tokenId, field);
    const key = editKey(tokenId, field);
    if (newValue === oldValue) {
      this.staged.delete(key); // back to the server value: nothing to submit
      return;
    }
    this.staged.set(key, { tokenId, field, oldValue, newValue });
  }

  /** The value a cell shows: staged edit if present, else server truth. */
  displayValue(tokenId: number | null, field: EditableField): unknown {
    if (!this.sentence) return undefined;
    const edit = this.staged.get(editKey(tokenId, field));
    return edit ? edit.newValue : serverValue(this.sentence, tokenId, field);
  }

  isStaged(tokenId: number | null, field: EditableField): boolean {
    return this.staged.has(editKey(tokenId, field));
  }

  /** Violation badges, from the server response only (never recomputed). */
  badgesFor(tokenId: number): ViolationJson[] {
    if (!this.sentence) return [];
    return this.sentence.violations.filter((v) => v.token_id === tokenId);
  }

  sentenceBadges(): ViolationJson[] {
    if (!this.sentence) return [];
    return this.sentence.violations.filter((v) => v.token_id === null);
  }

  get hardViolations(): ViolationJson[] {
    return (this.sentence?.violations ?? []).filter((v) => v.hard);
  }

  /** Accept is offered only when the server reports a clean structure and
   * there is nothing staged or pending. */
  get canAccept(): boolean {
    return (
      this.sentence !== null &&
      !this.readOnly &&
      this.staged.size === 0 &&
      this.hardViolations.length === 0
    );
  }

  /** Evaluation-equivalence hint for a staged DEPREL edit: names the groups
   * in which the staged label and the stored label are interchangeable. */
  equivalenceHint(tokenId: number): string | null {
    if (!this.sentence) return null;
    const edit = this.staged.get(editKey(tokenId, "DEPREL"));
    if (!edit) return null;
    const before = edit.oldValue;
    const after = edit.newValue;
    if (typeof before !== "string" || typeof after !== "string") return null;
    const groups = sharedGroups(before, after);
    if (groups.length === 0) return null;
    return `"${after}" and "${before}" are evaluation-equivalent (${groups.join(", ")})`;
  }

  // -- head picking (click a token in the tree pane, never type an index)

  beginHeadPick(tokenId: number): void {
    if (this.readOnly) return;
    this.headPickFor = tokenId;
  }

  pickHead(headId: number): void {
    if (this.headPickFor === null) return;
    if (headId !== this.headPickFor) {
      this.stageEdit(this.headPickFor, "HEAD_ID", headId);
    }
    this.headPickFor = null;
  }

  pickRoot(): void {
    if (this.headPickFor === null) return;
    this.stageEdit(this.headPickFor, "HEAD_ID", 0);
    this.headPickFor = null;
  }

  // -- submission

  /**
   * Submit staged edits one by one; each response replaces the sentence
   * snapshot (and its violations) wholesale. On conflict the remaining
   * staged edits are kept and the caller is told to reload; on network
   * failure everything stays staged.
   */
  async submitStaged(): Promise<boolean> {
    if (!this.sentence) throw new Error("no sentence loaded");
    this.notice = null;
    for (const [key, edit] of [...this.staged]) {
      try {
        const response = await this.api.postCorrection(this.sentence.sent_id, {
          token_id: edit.tokenId,
          field: edit.field,
          old_value: edit.oldValue,
          new_value: edit.newValue,
        });
        this.sentence = response.sentence;
        this.staged.delete(key);
      } catch (err) {
        if (err instanceof ConflictError) {
          this.needsReload = true;
          this.notice = {
            kind: "conflict",
            message: `${err.message} — reload the sentence to continue`,
          };
          return false;
        }
        if (err instanceof NetworkError) {
          this.notice = {
            kind: "offline",
            message: "service unreachable; your edits are kept locally",
          };
          return false;
        }
        this.notice = { kind: "rejected", message: String(err) };
        return false;
      }
    }
    return true;
  }

  async accept(): Promise<boolean> {
    if (!this.sentence) throw new Error("no sentence loaded");
    if (!this.canAccept) return false;
    try {
      const result = await this.api.accept(this.sentence.sent_id);
      this.sentence = {
        ...this.sentence,
        status: result.status as SentenceJson["status"],
        reviewed_by: result.reviewed_by,
      };
      return true;
    } catch (err) {
      if (err instanceof ConflictError) {
        this.notice = {
          kind: "accept-blocked",
          message: err.message,
          violations: err.violations,
        };
        return false;
      }
      if (err instanceof NetworkError) {
        this.notice = { kind: "offline", message: "service unreachable" };
        return false;
      }
      throw err;
    }
  }
}

/** Next reviewable sentence for the queue flow. */
export function nextPending(
  summaries: Array<{ sent_id: string; status: string }>,
): string | null {
  const pending = summaries.find((s) => s.status === "PENDING");
  return pending ? pending.sent_id : null;
}

export function langClass(token: TokenJson): string {
  const base = token.lang.split("-")[0];
  return ["en", "es", "gn", "ne"].includes(base) ? `lang-${base}` : "lang-other";
}

/** The line the agreement page shows for a service response. */
export function agreementSummary(result: {
  a: string;
  b: string;
  field: string;
  n_sentences: number;
  kappa: number;
}): string {
  return (
    `Cohen's kappa (${result.field}, ${result.a} vs ${result.b}, ` +
    `${result.n_sentences} sentence(s)): ${result.kappa.toFixed(4)}`
  );
}
