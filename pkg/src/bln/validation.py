"""Structural validation of annotated sentences.

validate() is pure and returns the full list of violations (never raises);
the list is empty exactly when the sentence satisfies every structural
invariant. Codes are a closed set. MULTIPLE_ROOTS / NO_ROOT /
HEAD_OUT_OF_RANGE / SELF_HEAD / CYCLE / DUPLICATE_ID are "hard" (tree-
breaking) violations; HEAD_FORM_MISMATCH, PUNCT_NOT_PUNCT_REL and BAD_LABEL
are label-quality warnings surfaced for review.

Tokens whose HEAD ID is absent ("_", the ellipsis convention) are skipped by
root and cycle checks: partial trees are representable and only annotated
tokens are judged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .table import Sentence
from .tags import is_valid_deprel, is_valid_upos

MULTIPLE_ROOTS = "MULTIPLE_ROOTS"
NO_ROOT = "NO_ROOT"
HEAD_OUT_OF_RANGE = "HEAD_OUT_OF_RANGE"
SELF_HEAD = "SELF_HEAD"
CYCLE = "CYCLE"
HEAD_FORM_MISMATCH = "HEAD_FORM_MISMATCH"
PUNCT_NOT_PUNCT_REL = "PUNCT_NOT_PUNCT_REL"
DUPLICATE_ID = "DUPLICATE_ID"
BAD_LABEL = "BAD_LABEL"

VIOLATION_CODES = frozenset({
    MULTIPLE_ROOTS, NO_ROOT, HEAD_OUT_OF_RANGE, SELF_HEAD, CYCLE,
    HEAD_FORM_MISMATCH, PUNCT_NOT_PUNCT_REL, DUPLICATE_ID, BAD_LABEL,
})

# Violations that make a dependency structure unusable as a tree. A self
# head is a one-node cycle, so it belongs here alongside CYCLE.
HARD_CODES = frozenset({
    MULTIPLE_ROOTS, NO_ROOT, HEAD_OUT_OF_RANGE, SELF_HEAD, CYCLE,
    DUPLICATE_ID,
})


@dataclass(frozen=True)
class Violation:
    code: str
    sent_id: str
    token_id: int | None
    message: str

    def is_hard(self) -> bool:
        return self.code in HARD_CODES


class TreeError(ValueError):
    """Raised when an operation requires a well-formed tree and got none."""


def _ids_regular(s: Sentence) -> bool:
    return [t.id for t in s.tokens] == list(range(1, len(s) + 1))


def _check_ids(s: Sentence, out: list[Violation]) -> None:
    ids = [t.id for t in s.tokens]
    seen: set[int] = set()
    duplicated: list[int] = []
    for i in ids:
        if i in seen and i not in duplicated:
            duplicated.append(i)
        seen.add(i)
    for i in duplicated:
        out.append(Violation(DUPLICATE_ID, s.sent_id, i, f"token id {i} occurs more than once"))
    if not duplicated and ids != list(range(1, len(ids) + 1)):
        out.append(Violation(
            DUPLICATE_ID, s.sent_id, None,
            f"token ids must be exactly 1..{len(ids)}, got {ids}"))


def _check_token(s: Sentence, t, n: int, out: list[Violation]) -> None:
    if not is_valid_upos(t.upos):
        out.append(Violation(BAD_LABEL, s.sent_id, t.id, f"unknown UPOS {t.upos!r}"))
    if t.deprel is not None and not is_valid_deprel(t.deprel):
        out.append(Violation(BAD_LABEL, s.sent_id, t.id, f"unknown DEPREL {t.deprel!r}"))
    if t.upos == "PUNCT" and t.deprel != "punct":
        out.append(Violation(
            PUNCT_NOT_PUNCT_REL, s.sent_id, t.id,
            f"PUNCT token {t.form!r} has deprel {t.deprel!r}, expected punct"))
    if (t.head_id is None) != (t.head_form is None):
        out.append(Violation(
            HEAD_FORM_MISMATCH, s.sent_id, t.id,
            "HEAD ID and HEAD must be both present or both absent"))
    if t.head_id is None:
        return
    if t.head_id == t.id:
        out.append(Violation(SELF_HEAD, s.sent_id, t.id, f"token {t.id} is its own head"))
    elif not 0 <= t.head_id <= n:
        out.append(Violation(
            HEAD_OUT_OF_RANGE, s.sent_id, t.id,
            f"HEAD ID {t.head_id} outside [0, {n}]"))
    if t.head_id == 0:
        if t.deprel != "root":
            out.append(Violation(
                BAD_LABEL, s.sent_id, t.id,
                f"root token must carry deprel root, got {t.deprel!r}"))
        if t.head_form is not None and t.head_form != "root":
            out.append(Violation(
                HEAD_FORM_MISMATCH, s.sent_id, t.id,
                f"HEAD ID 0 requires HEAD \"root\", got {t.head_form!r}"))
    elif t.deprel == "root":
        out.append(Violation(
            BAD_LABEL, s.sent_id, t.id,
            f"deprel root requires HEAD ID 0, got {t.head_id}"))


def _check_head_forms(s: Sentence, n: int, out: list[Violation]) -> None:
    for t in s.tokens:
        if t.head_id is None or t.head_form is None or not 1 <= t.head_id <= n:
            continue
        if t.head_id == t.id:
            continue
        actual = s.tokens[t.head_id - 1].form
        if t.head_form != actual:
            out.append(Violation(
                HEAD_FORM_MISMATCH, s.sent_id, t.id,
                f"HEAD ID {t.head_id} is {actual!r} but HEAD says {t.head_form!r}"))


def _check_roots(s: Sentence, out: list[Violation]) -> None:
    annotated = [t for t in s.tokens if t.head_id is not None]
    roots = [t.id for t in annotated if t.head_id == 0]
    if len(roots) > 1:
        out.append(Violation(
            MULTIPLE_ROOTS, s.sent_id, None,
            f"{len(roots)} root tokens: {roots}"))
    elif annotated and not roots:
        out.append(Violation(
            NO_ROOT, s.sent_id, None,
            "no root among annotated tokens"))


def _check_cycles(s: Sentence, n: int, out: list[Violation]) -> None:
    head = {t.id: t.head_id for t in s.tokens
            if t.head_id is not None and 1 <= t.head_id <= n and t.head_id != t.id}
    color: dict[int, int] = {}  # 1 = on current walk, 2 = done
    reported: set[frozenset[int]] = set()
    for start in head:
        if color.get(start):
            continue
        walk = []
        node = start
        while node in head and not color.get(node):
            color[node] = 1
            walk.append(node)
            node = head[node]
        if color.get(node) == 1:
            cycle = walk[walk.index(node):]
            key = frozenset(cycle)
            if key not in reported:
                reported.add(key)
                out.append(Violation(
                    CYCLE, s.sent_id, min(cycle),
                    "head cycle through tokens " + " -> ".join(map(str, cycle + [node]))))
        for visited in walk:
            color[visited] = 2


def validate(s: Sentence) -> list[Violation]:
    """All structural violations, ordered by token id then code."""
    out: list[Violation] = []
    n = len(s)
    _check_ids(s, out)
    for t in s.tokens:
        _check_token(s, t, n, out)
    if _ids_regular(s):
        _check_head_forms(s, n, out)
        _check_cycles(s, n, out)
    _check_roots(s, out)
    out.sort(key=lambda v: (v.token_id if v.token_id is not None else 0, v.code, v.message))
    return out


def hard_violations(s: Sentence) -> list[Violation]:
    return [v for v in validate(s) if v.is_hard()]


def advisories(s: Sentence) -> list[str]:
    """Informational notes (not violations): punctuation attachment style.

    Punctuation ought to hang off the root or a main clause verb; "main
    clause verb" is not machine-decidable, so anything other than a direct
    root attachment is only reported, never flagged.
    """
    notes = []
    roots = {t.id for t in s.tokens if t.head_id == 0}
    for t in s.tokens:
        if t.upos != "PUNCT" or t.head_id in (None, 0):
            continue
        if t.head_id not in roots:
            notes.append(
                f"token {t.id} ({t.form!r}): punctuation attached to "
                f"non-root token {t.head_id}")
    return notes


def children_map(s: Sentence) -> dict[int, list[int]]:
    """Map of token id -> ordered dependent ids (only ids with dependents).

    Requires a fully annotated, well-formed structure; raises TreeError
    naming the first blocking violation otherwise.
    """
    missing = [t.id for t in s.tokens if t.head_id is None]
    if missing:
        raise TreeError(f"unannotated heads on tokens {missing}")
    blocking = [v for v in validate(s)
                if v.code in (CYCLE, HEAD_OUT_OF_RANGE, SELF_HEAD, DUPLICATE_ID)]
    if blocking:
        v = blocking[0]
        raise TreeError(f"{v.code}: {v.message}")
    out: dict[int, list[int]] = {}
    for t in s.tokens:
        if t.head_id and t.head_id >= 1:
            out.setdefault(t.head_id, []).append(t.id)
    return out
