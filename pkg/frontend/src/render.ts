// DOM rendering: small hand-rolled views over the session state. Each
// render*() wipes and rebuilds its container from the current state, so
// the screen is always a pure function of (server snapshot, staged edits).

import { ApiClient } from "./api";
import { DEPREL_REFERENCE, EDITING_NOTES, UPOS_REFERENCE } from "./help";
import { agreementSummary, langClass, nextPending, ReviewSession } from "./state";
import { buildTree, treeRows } from "./tree";
import type { EditableField, ViolationJson } from "./types";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function violationBadge(violation: ViolationJson): HTMLElement {
  const badge = el("span", violation.hard ? "badge hard" : "badge soft",
    violation.code);
  badge.title = violation.message;
  return badge;
}

export async function renderQueue(
  container: HTMLElement,
  api: ApiClient,
  corpusId: string,
  openSentence: (sentId: string) => void,
): Promise<void> {
  const summaries = await api.sentences(corpusId);
  container.replaceChildren();
  const heading = el("h2", undefined, `Queue — ${corpusId}`);
  container.append(heading);

  const next = nextPending(summaries);
  const nextButton = el("button", "primary",
    next ? `Review next pending (${next})` : "No pending sentences");
  nextButton.disabled = next === null;
  if (next) nextButton.onclick = () => openSentence(next);
  container.append(nextButton);

  const list = el("table", "queue");
  const head = el("tr");
  for (const title of ["sentence", "status", "violations", "text"]) {
    head.append(el("th", undefined, title));
  }
  list.append(head);
  for (const summary of summaries) {
    const row = el("tr", `status-${summary.status.toLowerCase()}`);
    const link = el("a", undefined, summary.sent_id);
    link.href = `#/sentence/${summary.sent_id}`;
    const cell = el("td");
    cell.append(link);
    row.append(cell);
    row.append(el("td", undefined, summary.status));
    row.append(el("td", undefined,
      summary.n_hard ? `${summary.n_violations} (${summary.n_hard} hard)`
        : String(summary.n_violations)));
    row.append(el("td", "text", summary.text));
    list.append(row);
  }
  container.append(list);
}

function renderTreePane(container: HTMLElement, session: ReviewSession): void {
  const pane = el("div", "tree-pane");
  pane.append(el("h3", undefined, "Dependency tree"));
  if (session.headPickFor !== null) {
    const note = el("p", "pick-note",
      `Pick the head for token ${session.headPickFor} (or choose “root”).`);
    const rootButton = el("button", undefined, "root");
    rootButton.onclick = () => {
      session.pickRoot();
      rerender(session);
    };
    note.append(" ", rootButton);
    pane.append(note);
  }
  const tree = session.sentence ? buildTree(session.sentence) : null;
  if (!tree) {
    pane.append(el("p", "muted",
      "No well-formed tree to draw (unannotated or broken heads)."));
  } else {
    for (const { token, depth } of treeRows(tree)) {
      const row = el("div", "tree-row");
      row.style.paddingLeft = `${depth * 1.4}em`;
      const label = el("button", `tree-token ${langClass(token)}`,
        `${token.id} ${token.form}`);
      label.onclick = () => {
        if (session.headPickFor !== null) {
          session.pickHead(token.id);
          rerender(session);
        }
      };
      row.append(label, el("span", "muted", ` ${token.deprel ?? "_"}`));
      pane.append(row);
    }
  }
  container.append(pane);
}

function renderTokenTable(container: HTMLElement, session: ReviewSession): void {
  const sentence = session.sentence!;
  const table = el("table", "tokens");
  const head = el("tr");
  for (const title of ["ID", "FORM", "LANG", "LEMMA", "UPOS", "HEAD ID",
                       "HEAD", "DEPREL", "issues"]) {
    head.append(el("th", undefined, title));
  }
  table.append(head);

  for (const token of sentence.tokens) {
    const row = el("tr");
    row.append(el("td", undefined, String(token.id)));
    row.append(el("td", `form ${langClass(token)}`, token.form));
    row.append(el("td", langClass(token), token.lang));
    for (const field of ["LEMMA", "UPOS", "HEAD_ID"] satisfies EditableField[]) {
      row.append(editableCell(session, token.id, field));
    }
    row.append(el("td", "muted", token.head_form ?? "_"));
    const deprelCell = editableCell(session, token.id, "DEPREL");
    const hint = session.equivalenceHint(token.id);
    if (hint) deprelCell.append(el("div", "hint", hint));
    row.append(deprelCell);
    const badges = el("td", "badges");
    for (const violation of session.badgesFor(token.id)) {
      badges.append(violationBadge(violation));
    }
    row.append(badges);
    table.append(row);
  }
  container.append(table);
}

function editableCell(
  session: ReviewSession,
  tokenId: number,
  field: EditableField,
): HTMLTableCellElement {
  const cell = el("td", session.isStaged(tokenId, field) ? "staged" : undefined);
  const value = session.displayValue(tokenId, field);
  if (session.readOnly) {
    cell.append(el("span", undefined, value === null ? "_" : String(value)));
    return cell;
  }
  if (field === "HEAD_ID") {
    const button = el("button", "head-pick", value === null ? "_" : String(value));
    button.title = "click, then pick the head token in the tree pane";
    button.onclick = () => {
      session.beginHeadPick(tokenId);
      rerender(session);
    };
    cell.append(button);
    return cell;
  }
  const input = el("input");
  input.value = value === null ? "" : String(value);
  input.onchange = () => {
    session.stageEdit(tokenId, field, input.value === "" ? null : input.value);
    rerender(session);
  };
  cell.append(input);
  return cell;
}

let activeContainer: HTMLElement | null = null;

function rerender(session: ReviewSession): void {
  if (activeContainer) renderSentence(activeContainer, session);
}

export function renderSentence(container: HTMLElement, session: ReviewSession): void {
  activeContainer = container;
  const sentence = session.sentence;
  container.replaceChildren();
  if (!sentence) {
    container.append(el("p", "muted", "No sentence loaded."));
    return;
  }

  const header = el("div", "sentence-header");
  header.append(el("h2", undefined, `${sentence.sent_id} — ${sentence.text}`));
  const meta = el("p", "muted",
    `${sentence.pair} · status ${sentence.status}` +
    (sentence.speaker ? ` · speaker ${sentence.speaker}` : "") +
    (sentence.reviewed_by.length
      ? ` · reviewed by ${sentence.reviewed_by.join(", ")}` : ""));
  header.append(meta);
  if (session.readOnly) {
    header.append(el("p", "accepted-note", "Accepted — read-only view."));
  }

  const specLabel = el("label", "spec-toggle");
  const spec = el("input");
  spec.type = "checkbox";
  spec.checked = Boolean(session.displayValue(null, "SPEC"));
  spec.disabled = session.readOnly;
  spec.onchange = () => {
    session.stageEdit(null, "SPEC", spec.checked);
    rerender(session);
  };
  specLabel.append(spec, el("span", undefined, " informal structure (SPEC)"));
  header.append(specLabel);
  container.append(header);

  for (const violation of session.sentenceBadges()) {
    container.append(violationBadge(violation));
  }
  if (session.notice) {
    container.append(el("p", `notice ${session.notice.kind}`,
      session.notice.message));
  }

  const main = el("div", "sentence-main");
  const left = el("div", "left");
  renderTokenTable(left, session);

  const actions = el("div", "actions");
  const submit = el("button", "primary",
    `Submit ${session.staged.size} staged edit(s)`);
  submit.disabled = session.staged.size === 0 || session.readOnly;
  submit.onclick = async () => {
    await session.submitStaged();
    rerender(session);
  };
  const accept = el("button", "accept", "Accept");
  accept.disabled = !session.canAccept;
  accept.title = session.canAccept
    ? "mark this sentence as reviewed and correct"
    : "blocked: hard violations or unsubmitted edits remain";
  accept.onclick = async () => {
    await session.accept();
    rerender(session);
  };
  const reload = el("button", undefined, "Reload");
  reload.onclick = async () => {
    await session.load(sentence.sent_id);
    rerender(session);
  };
  actions.append(submit, accept, reload);
  left.append(actions);

  if (sentence.advisories.length) {
    const advisories = el("div", "advisories");
    for (const note of sentence.advisories) {
      advisories.append(el("p", "muted", `note: ${note}`));
    }
    left.append(advisories);
  }

  main.append(left);
  renderTreePane(main, session);
  container.append(main);

  if (sentence.history.length) {
    const history = el("details", "history");
    history.append(el("summary", undefined,
      `history (${sentence.history.length})`));
    for (const entry of sentence.history) {
      history.append(el("p", "muted",
        `${entry.timestamp} ${entry.annotator_id}: token ${entry.token_id ?? "—"} ` +
        `${entry.field} ${JSON.stringify(entry.old_value)} → ` +
        `${JSON.stringify(entry.new_value)}`));
    }
    container.append(history);
  }
}

export async function renderAgreement(
  container: HTMLElement,
  api: ApiClient,
  corpusId: string,
  a: string,
  b: string,
  field: string,
): Promise<void> {
  container.replaceChildren();
  container.append(el("h2", undefined, "Inter-annotator agreement"));
  try {
    const result = await api.agreement(a, b, field, corpusId);
    container.append(el("p", "kappa", agreementSummary(result)));
  } catch (err) {
    container.append(el("p", "notice rejected", String(err)));
  }
}

export function renderHelp(container: HTMLElement): void {
  container.replaceChildren();
  container.append(el("h2", undefined, "Reference sheets"));
  const notes = el("ul");
  for (const note of EDITING_NOTES) notes.append(el("li", undefined, note));
  container.append(notes);
  for (const [title, rows] of [
    ["UPOS tags", UPOS_REFERENCE],
    ["Dependency relations", DEPREL_REFERENCE],
  ] as const) {
    container.append(el("h3", undefined, title));
    const table = el("table", "reference");
    for (const row of rows) {
      const tr = el("tr");
      tr.append(el("td", "tag", row.tag));
      tr.append(el("td", undefined, row.label));
      tr.append(el("td", "muted", row.example));
      table.append(tr);
    }
    container.append(table);
  }
}
