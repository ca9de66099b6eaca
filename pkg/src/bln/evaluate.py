"""Scoring of predicted annotations against references.

Metrics: UPOS accuracy, DEPREL accuracy (strict and relaxed), labeled
attachment score (strict and relaxed), and Cohen's kappa for inter-annotator
agreement. "Relaxed" treats dependency labels as interchangeable when they
share a semantic equivalence group; the default groups ship in
data/equivalence_groups.json. Equivalence is any-common-group, deliberately
NOT closed under transitivity: groups overlap, and chaining them would
collapse most clause-level labels into one class.

Scoring conventions:
  - punctuation counts in every denominator;
  - tokens with an absent reference head are excluded from attachment and
    DEPREL denominators (nothing to match) but still count for UPOS;
  - relaxation applies to DEPREL only, UPOS is always strict;
  - corpus scores are micro-averages over pooled token counts;
  - a fraction with an empty denominator is reported as 1.0 (vacuous).
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

from .table import Corpus, Sentence

# Published reference scores for this task family (gold-standard vs
# human-reviewed references; UDSL is a supervised sequence-labeling
# baseline). Context for report readers only; nothing here reproduces them.
REFERENCE_BASELINES = {
    "spa_eng": {"las_gold": 0.7632, "las_reviewed": 0.9529,
                "upos_reviewed": 0.9954, "deprel_reviewed": 0.9714},
    "spa_gua": {"las_gold": 0.5990, "las_reviewed": 0.7742,
                "upos_reviewed": 0.8421, "deprel_reviewed": 0.5990},
    "udsl_spa_eng": {"las_gold": 0.1471},
}


class AlignmentError(ValueError):
    """Gold/predicted token sequences do not line up."""


@dataclass(frozen=True)
class EquivalenceGroups:
    groups: tuple[tuple[str, frozenset[str]], ...]

    @classmethod
    def from_lists(cls, groups: Sequence[tuple[str, Sequence[str]]]) -> "EquivalenceGroups":
        return cls(tuple((name, frozenset(labels)) for name, labels in groups))

    @classmethod
    def load(cls, path: str | Path) -> "EquivalenceGroups":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls.from_lists([(g["name"], g["labels"]) for g in data["groups"]])

    @classmethod
    def default(cls) -> "EquivalenceGroups":
        text = resources.files("bln").joinpath("data/equivalence_groups.json").read_text("utf-8")
        data = json.loads(text)
        return cls.from_lists([(g["name"], g["labels"]) for g in data["groups"]])


def tags_equivalent(a: str | None, b: str | None, groups: EquivalenceGroups) -> bool:
    """Exact match, or both labels inside one group (never transitive)."""
    if a == b:
        return True
    if a is None or b is None:
        return False
    return any(a in labels and b in labels for _, labels in groups.groups)


@dataclass
class _Tally:
    n_tokens: int = 0
    upos_correct: int = 0
    attach_total: int = 0
    deprel_strict: int = 0
    deprel_relaxed: int = 0
    las_strict: int = 0
    las_relaxed: int = 0
    confusion: Counter = field(default_factory=Counter)

    def add(self, other: "_Tally") -> None:
        self.n_tokens += other.n_tokens
        self.upos_correct += other.upos_correct
        self.attach_total += other.attach_total
        self.deprel_strict += other.deprel_strict
        self.deprel_relaxed += other.deprel_relaxed
        self.las_strict += other.las_strict
        self.las_relaxed += other.las_relaxed
        self.confusion.update(other.confusion)


@dataclass(frozen=True)
class EvalReport:
    n_tokens: int
    upos_acc: float
    deprel_acc_strict: float
    deprel_acc_relaxed: float
    las_strict: float
    las_relaxed: float
    per_label_confusion: dict[tuple[str, str], int]

    def to_json(self) -> dict:
        confusion: dict[str, dict[str, int]] = {}
        for (gold, pred), count in sorted(self.per_label_confusion.items()):
            confusion.setdefault(gold, {})[pred] = count
        return {
            "n_tokens": self.n_tokens,
            "upos_acc": self.upos_acc,
            "deprel_acc_strict": self.deprel_acc_strict,
            "deprel_acc_relaxed": self.deprel_acc_relaxed,
            "las_strict": self.las_strict,
            "las_relaxed": self.las_relaxed,
            "per_label_confusion": confusion,
        }


def _div(num: int, den: int) -> float:
    return num / den if den else 1.0


def _tally_sentence(gold: Sentence, pred: Sentence, groups: EquivalenceGroups) -> _Tally:
    if len(gold) != len(pred):
        raise AlignmentError(
            f"{gold.sent_id or '<sentence>'}: gold has {len(gold)} tokens, "
            f"pred has {len(pred)}")
    t = _Tally()
    for pos, (g, p) in enumerate(zip(gold.tokens, pred.tokens), start=1):
        if g.form != p.form:
            raise AlignmentError(
                f"{gold.sent_id or '<sentence>'}: form mismatch at position "
                f"{pos}: {g.form!r} vs {p.form!r}")
        t.n_tokens += 1
        if g.upos == p.upos:
            t.upos_correct += 1
        if g.head_id is None:
            continue
        t.attach_total += 1
        t.confusion[(g.deprel or "_", p.deprel or "_")] += 1
        head_ok = p.head_id == g.head_id
        strict_label = p.deprel == g.deprel
        relaxed_label = tags_equivalent(g.deprel, p.deprel, groups)
        if strict_label:
            t.deprel_strict += 1
        if relaxed_label:
            t.deprel_relaxed += 1
        if head_ok and strict_label:
            t.las_strict += 1
        if head_ok and relaxed_label:
            t.las_relaxed += 1
    return t


def _report(t: _Tally) -> EvalReport:
    return EvalReport(
        n_tokens=t.n_tokens,
        upos_acc=_div(t.upos_correct, t.n_tokens),
        deprel_acc_strict=_div(t.deprel_strict, t.attach_total),
        deprel_acc_relaxed=_div(t.deprel_relaxed, t.attach_total),
        las_strict=_div(t.las_strict, t.attach_total),
        las_relaxed=_div(t.las_relaxed, t.attach_total),
        per_label_confusion=dict(t.confusion),
    )


def score(gold: Sentence, pred: Sentence,
          groups: EquivalenceGroups | None = None) -> EvalReport:
    """Score one predicted sentence against its reference."""
    return _report(_tally_sentence(gold, pred, groups or EquivalenceGroups.default()))


def corpus_report(gold: Corpus, pred: Corpus,
                  groups: EquivalenceGroups | None = None) -> EvalReport:
    """Micro-averaged report over sentences aligned by sent_id."""
    groups = groups or EquivalenceGroups.default()
    gold_by_id = {s.sent_id: s for s in gold.sentences}
    pred_by_id = {s.sent_id: s for s in pred.sentences}
    missing_pred = sorted(set(gold_by_id) - set(pred_by_id))
    missing_gold = sorted(set(pred_by_id) - set(gold_by_id))
    if missing_pred or missing_gold:
        raise AlignmentError(
            f"sentence ids do not align; missing from pred: {missing_pred}; "
            f"missing from gold: {missing_gold}")
    total = _Tally()
    for sent_id in (s.sent_id for s in gold.sentences):
        total.add(_tally_sentence(gold_by_id[sent_id], pred_by_id[sent_id], groups))
    return _report(total)


def cohen_kappa(labels_a: Sequence, labels_b: Sequence) -> float:
    """Chance-corrected agreement between two aligned label sequences."""
    if len(labels_a) != len(labels_b):
        raise ValueError(
            f"label sequences differ in length: {len(labels_a)} vs {len(labels_b)}")
    n = len(labels_a)
    if n == 0:
        raise ValueError("label sequences are empty")
    observed = sum(a == b for a, b in zip(labels_a, labels_b)) / n
    counts_a = Counter(labels_a)
    counts_b = Counter(labels_b)
    expected = sum((counts_a[l] / n) * (counts_b[l] / n) for l in counts_a)
    if expected == 1.0:
        # both annotators constant on the same label; agreement is perfect
        return 1.0
    return (observed - expected) / (1.0 - expected)
