"""Expert-review store: corrections, acceptance, agreement, reports.

State is event-sourced into a single JSON-lines log (corpus loads,
corrections, accepts); replaying the log rebuilds the store exactly, and an
optional snapshot file only short-circuits the replay. Per corpus the store
keeps the machine annotations frozen as loaded, the current (corrected)
state, and optionally a gold reference, so reports can score machine output
against either reference at any time.

Each annotator gets a parallel label track: every correction records that
annotator's label for the touched token/field, and accepting a sentence
snapshots all its current values into the accepting annotator's track.
Agreement (Cohen's kappa) is computed over these tracks, never over the
merged sentence state.

Corrections use optimistic concurrency: a correction must echo the value it
is replacing; a stale echo is a conflict. Status changes only through
accept (which requires zero hard structural violations); a correction that
re-introduces a hard violation on an accepted sentence demotes it back to
review.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .evaluate import EquivalenceGroups, EvalReport, cohen_kappa, corpus_report
from .table import Corpus, Sentence, Token, parse_corpus, corpus_to_text
from .validation import Violation, hard_violations, validate

PENDING = "PENDING"
IN_REVIEW = "IN_REVIEW"
ACCEPTED = "ACCEPTED"

GOLD = "GOLD"
REVIEWED = "REVIEWED"

FIELD_UPOS = "UPOS"
FIELD_HEAD_ID = "HEAD_ID"
FIELD_DEPREL = "DEPREL"
FIELD_LEMMA = "LEMMA"
FIELD_SPEC = "SPEC"
CORRECTION_FIELDS = (FIELD_UPOS, FIELD_HEAD_ID, FIELD_DEPREL, FIELD_LEMMA, FIELD_SPEC)


class NotFound(KeyError):
    pass


class Conflict(ValueError):
    """old_value does not match the stored value (stale correction)."""


class InvalidCorrection(ValueError):
    pass


class AcceptBlocked(ValueError):
    def __init__(self, message: str, violations: list[Violation]):
        self.violations = violations
        super().__init__(message)


@dataclass(frozen=True)
class Correction:
    sent_id: str
    token_id: int | None
    field: str
    old_value: object
    new_value: object
    annotator_id: str
    timestamp: str


@dataclass
class ReviewState:
    sent_id: str
    status: str = PENDING
    reviewed_by: set = field(default_factory=set)


def _now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def _current_value(sentence: Sentence, token_id: int | None, field: str):
    if field == FIELD_SPEC:
        return sentence.spec
    token = _find_token(sentence, token_id)
    return {
        FIELD_UPOS: token.upos,
        FIELD_HEAD_ID: token.head_id,
        FIELD_DEPREL: token.deprel,
        FIELD_LEMMA: token.lemma,
    }[field]


def _find_token(sentence: Sentence, token_id: int | None) -> Token:
    for t in sentence.tokens:
        if t.id == token_id:
            return t
    raise NotFound(f"no token {token_id} in sentence {sentence.sent_id!r}")


def _typecheck(field: str, value) -> None:
    if field == FIELD_SPEC:
        if not isinstance(value, bool):
            raise InvalidCorrection(f"SPEC takes a boolean, got {value!r}")
    elif field == FIELD_HEAD_ID:
        if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
            raise InvalidCorrection(f"HEAD_ID takes an integer or null, got {value!r}")
    elif field in (FIELD_UPOS, FIELD_LEMMA):
        if not isinstance(value, str) or not value:
            raise InvalidCorrection(f"{field} takes a non-empty string, got {value!r}")
    elif field == FIELD_DEPREL:
        if value is not None and (not isinstance(value, str) or not value):
            raise InvalidCorrection(f"DEPREL takes a string or null, got {value!r}")
    else:
        raise InvalidCorrection(f"unknown field {field!r}")


def _apply_to_sentence(sentence: Sentence, c: Correction) -> Sentence:
    if c.field == FIELD_SPEC:
        return replace(sentence, spec=c.new_value)
    tokens = []
    n = len(sentence)
    for t in sentence.tokens:
        if t.id != c.token_id:
            tokens.append(t)
            continue
        if c.field == FIELD_UPOS:
            t = replace(t, upos=c.new_value)
        elif c.field == FIELD_LEMMA:
            t = replace(t, lemma=c.new_value)
        elif c.field == FIELD_DEPREL:
            t = replace(t, deprel=c.new_value)
        elif c.field == FIELD_HEAD_ID:
            head_id = c.new_value
            if head_id is None:
                head_form = None
            elif head_id == 0:
                head_form = "root"
            elif 1 <= head_id <= n and sentence.tokens[head_id - 1].id == head_id:
                head_form = sentence.tokens[head_id - 1].form
            else:
                head_form = None
            t = replace(t, head_id=head_id, head_form=head_form)
        tokens.append(t)
    return sentence.with_tokens(tokens)


class ReviewStore:
    """Event-sourced annotation store over one JSON-lines log file."""

    def __init__(self, path: str | Path | None = None,
                 groups: EquivalenceGroups | None = None):
        self.path = Path(path) if path is not None else None
        self.groups = groups or EquivalenceGroups.default()
        self._lock = threading.Lock()
        self.machine: dict[str, dict[str, Sentence]] = {}
        self.current: dict[str, dict[str, Sentence]] = {}
        self.gold: dict[str, dict[str, Sentence]] = {}
        self.order: dict[str, list[str]] = {}
        self.sent_corpus: dict[str, str] = {}
        self.states: dict[str, ReviewState] = {}
        self.history: dict[str, list[Correction]] = {}
        # annotator -> sent_id -> field -> token_id (None for SPEC) -> value
        self.tracks: dict[str, dict[str, dict[str, dict[int | None, object]]]] = {}
        if self.path is not None and self.path.exists():
            self._replay()

    # ------------------------------------------------------------------
    # event log

    def _append_event(self, event: dict) -> None:
        if self.path is None:
            return
        with self.path.open("a", encoding="utf-8") as f:
            f.write(json.dumps(event, ensure_ascii=False) + "\n")

    def _replay(self) -> None:
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            event = json.loads(line)
            kind = event["event"]
            if kind == "corpus":
                corpus = parse_corpus(event["text"], name=event["corpus_id"])
                self._load(event["corpus_id"], corpus, event["role"], record=False)
            elif kind == "correction":
                c = Correction(
                    sent_id=event["sent_id"],
                    token_id=event["token_id"],
                    field=event["field"],
                    old_value=event["old_value"],
                    new_value=event["new_value"],
                    annotator_id=event["annotator_id"],
                    timestamp=event["timestamp"],
                )
                self._apply(c, record=False)
            elif kind == "accept":
                self._accept(event["sent_id"], event["annotator_id"], record=False)
            else:
                raise ValueError(f"unknown event type {kind!r} in {self.path}")

    # ------------------------------------------------------------------
    # corpus loading

    def load_corpus(self, corpus_id: str, corpus: Corpus, role: str = "machine") -> None:
        with self._lock:
            self._load(corpus_id, corpus, role, record=True)

    def _load(self, corpus_id: str, corpus: Corpus, role: str, record: bool) -> None:
        if role not in ("machine", "gold"):
            raise ValueError(f"role must be machine or gold, got {role!r}")
        by_id = {s.sent_id: s for s in corpus.sentences}
        if len(by_id) != len(corpus):
            raise ValueError(f"corpus {corpus_id!r} has duplicate sent_ids")
        if role == "gold":
            self.gold[corpus_id] = by_id
        else:
            if corpus_id in self.machine:
                raise ValueError(f"corpus {corpus_id!r} already loaded")
            for sent_id in by_id:
                if sent_id in self.sent_corpus:
                    raise ValueError(f"sent_id {sent_id!r} already exists in store")
            self.machine[corpus_id] = by_id
            self.current[corpus_id] = dict(by_id)
            self.order[corpus_id] = [s.sent_id for s in corpus.sentences]
            for sent_id in by_id:
                self.sent_corpus[sent_id] = corpus_id
                self.states[sent_id] = ReviewState(sent_id)
                self.history[sent_id] = []
        if record:
            self._append_event({
                "event": "corpus", "corpus_id": corpus_id, "role": role,
                "text": corpus_to_text(corpus),
            })

    # ------------------------------------------------------------------
    # lookups

    def corpus_ids(self) -> list[str]:
        return sorted(self.machine)

    def sentence(self, sent_id: str) -> Sentence:
        corpus_id = self.sent_corpus.get(sent_id)
        if corpus_id is None:
            raise NotFound(f"unknown sentence {sent_id!r}")
        return self.current[corpus_id][sent_id]

    def sentences_of(self, corpus_id: str, status: str | None = None) -> list[Sentence]:
        if corpus_id not in self.machine:
            raise NotFound(f"unknown corpus {corpus_id!r}")
        out = []
        for sent_id in self.order[corpus_id]:
            if status is None or self.states[sent_id].status == status:
                out.append(self.current[corpus_id][sent_id])
        return out

    def state(self, sent_id: str) -> ReviewState:
        if sent_id not in self.states:
            raise NotFound(f"unknown sentence {sent_id!r}")
        return self.states[sent_id]

    # ------------------------------------------------------------------
    # mutations

    def apply_correction(self, sent_id: str, token_id: int | None, field: str,
                         old_value, new_value, annotator_id: str,
                         ) -> tuple[Sentence, list[Violation]]:
        c = Correction(sent_id=sent_id, token_id=token_id, field=field,
                       old_value=old_value, new_value=new_value,
                       annotator_id=annotator_id, timestamp=_now())
        with self._lock:
            return self._apply(c, record=True)

    def _apply(self, c: Correction, record: bool) -> tuple[Sentence, list[Violation]]:
        corpus_id = self.sent_corpus.get(c.sent_id)
        if corpus_id is None:
            raise NotFound(f"unknown sentence {c.sent_id!r}")
        sentence = self.current[corpus_id][c.sent_id]
        if c.field not in CORRECTION_FIELDS:
            raise InvalidCorrection(f"unknown field {c.field!r}")
        if c.field != FIELD_SPEC and c.token_id is None:
            raise InvalidCorrection(f"{c.field} corrections need a token_id")
        _typecheck(c.field, c.new_value)
        current = _current_value(sentence, c.token_id, c.field)
        if current != c.old_value:
            raise Conflict(
                f"stale correction: {c.field} of {c.sent_id}/{c.token_id} is "
                f"{current!r}, not {c.old_value!r}")
        if c.new_value == c.old_value:
            raise InvalidCorrection("no-op correction (old_value == new_value)")

        updated = _apply_to_sentence(sentence, c)
        self.current[corpus_id][c.sent_id] = updated
        self.history[c.sent_id].append(c)
        state = self.states[c.sent_id]
        state.reviewed_by.add(c.annotator_id)
        track = (self.tracks.setdefault(c.annotator_id, {})
                 .setdefault(c.sent_id, {}).setdefault(c.field, {}))
        track[c.token_id] = c.new_value
        violations = validate(updated)
        if state.status == ACCEPTED and any(v.is_hard() for v in violations):
            state.status = IN_REVIEW
        if record:
            self._append_event({
                "event": "correction", "sent_id": c.sent_id,
                "token_id": c.token_id, "field": c.field,
                "old_value": c.old_value, "new_value": c.new_value,
                "annotator_id": c.annotator_id, "timestamp": c.timestamp,
            })
        return updated, violations

    def accept(self, sent_id: str, annotator_id: str) -> ReviewState:
        with self._lock:
            return self._accept(sent_id, annotator_id, record=True)

    def _accept(self, sent_id: str, annotator_id: str, record: bool) -> ReviewState:
        corpus_id = self.sent_corpus.get(sent_id)
        if corpus_id is None:
            raise NotFound(f"unknown sentence {sent_id!r}")
        sentence = self.current[corpus_id][sent_id]
        hard = hard_violations(sentence)
        if hard:
            raise AcceptBlocked(
                f"cannot accept {sent_id!r}: {len(hard)} hard violation(s)", hard)
        state = self.states[sent_id]
        state.status = ACCEPTED
        state.reviewed_by.add(annotator_id)
        annotator = self.tracks.setdefault(annotator_id, {}).setdefault(sent_id, {})
        for field in CORRECTION_FIELDS:
            if field == FIELD_SPEC:
                annotator.setdefault(FIELD_SPEC, {})[None] = sentence.spec
                continue
            per_token = annotator.setdefault(field, {})
            for t in sentence.tokens:
                per_token[t.id] = _current_value(sentence, t.id, field)
        if record:
            self._append_event({
                "event": "accept", "sent_id": sent_id,
                "annotator_id": annotator_id, "timestamp": _now(),
            })
        return state

    # ------------------------------------------------------------------
    # analysis

    def agreement(self, sent_ids: Sequence[str], annotator_a: str,
                  annotator_b: str, field: str) -> float:
        """Cohen's kappa between two annotators' label tracks."""
        if field not in CORRECTION_FIELDS:
            raise InvalidCorrection(f"unknown field {field!r}")
        labels_a, labels_b = [], []
        missing: list[str] = []
        for sent_id in sent_ids:
            sentence = self.sentence(sent_id)
            keys: Iterable[int | None]
            keys = [None] if field == FIELD_SPEC else [t.id for t in sentence.tokens]
            for key in keys:
                values = []
                for annotator in (annotator_a, annotator_b):
                    track = self.tracks.get(annotator, {}).get(sent_id, {}).get(field, {})
                    if key not in track:
                        missing.append(f"{annotator}:{sent_id}/{key}")
                        values = None
                        break
                    values.append(track[key])
                if values is not None:
                    labels_a.append(str(values[0]))
                    labels_b.append(str(values[1]))
        if missing:
            raise ValueError(
                "incomplete annotator coverage for: " + ", ".join(missing))
        return cohen_kappa(labels_a, labels_b)

    def recompute_report(self, corpus_id: str, reference: str = REVIEWED) -> EvalReport:
        """Score the frozen machine annotations against a reference corpus."""
        if corpus_id not in self.machine:
            raise NotFound(f"unknown corpus {corpus_id!r}")
        if not self.machine[corpus_id]:
            raise NotFound(f"corpus {corpus_id!r} is empty")
        if reference == GOLD:
            if corpus_id not in self.gold:
                raise NotFound(f"no gold reference loaded for corpus {corpus_id!r}")
            ref_by_id = self.gold[corpus_id]
            ref = Corpus(tuple(ref_by_id[s] for s in sorted(ref_by_id)))
        elif reference == REVIEWED:
            ref = Corpus(tuple(self.current[corpus_id][s] for s in self.order[corpus_id]))
        else:
            raise ValueError(f"reference must be {GOLD} or {REVIEWED}, got {reference!r}")
        pred = Corpus(tuple(self.machine[corpus_id][s] for s in self.order[corpus_id]))
        return corpus_report(ref, pred, self.groups)
