"""Intra-sentential switch-point detection and aggregation.

A switch point is a content-language token whose tag differs from the last
content-language tag seen to its left. Neutral tags (other, ne-*) neither
emit records nor update the tracked language: punctuation and entities
between the two languages do not create spurious switches. A strict
"previous token" mode is available for comparison.

Aggregations are plain counts over the UPOS or DEPREL of switch-in tokens,
per direction or pooled, normalized within each emitted distribution.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .table import Corpus, Sentence
from .tags import LangTag

UPOS = "upos"
DEPREL = "deprel"

MODE_CONTENT = "content"    # compare against last content-language token
MODE_PREVIOUS = "previous"  # compare against the literal previous token

# Unicode blocks counted as emoji, plus any VS-16 presentation sequence.
EMOJI_RANGES = (
    (0x1F300, 0x1F5FF),  # misc symbols & pictographs
    (0x1F600, 0x1F64F),  # emoticons
    (0x1F680, 0x1F6FF),  # transport & map
    (0x1F900, 0x1F9FF),  # supplemental symbols & pictographs
)
VS16 = "️"


@dataclass(frozen=True)
class SwitchRecord:
    sent_id: str
    token_id: int
    from_lang: LangTag
    to_lang: LangTag
    upos: str
    deprel: str | None

    @property
    def direction(self) -> tuple[str, str]:
        return (self.from_lang.code, self.to_lang.code)


@dataclass(frozen=True)
class Distribution:
    field: str
    direction: tuple[str, str] | None
    counts: dict[str, int]
    proportions: dict[str, float]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def detect_switch_points(s: Sentence, mode: str = MODE_CONTENT) -> list[SwitchRecord]:
    """Switch records for one sentence, left to right."""
    records: list[SwitchRecord] = []
    previous: LangTag | None = None
    for t in s.tokens:
        if not t.lang.is_content:
            if mode == MODE_PREVIOUS:
                previous = None
            continue
        if previous is not None and t.lang.code != previous.code:
            records.append(SwitchRecord(
                sent_id=s.sent_id,
                token_id=t.id,
                from_lang=previous,
                to_lang=t.lang,
                upos=t.upos,
                deprel=t.deprel,
            ))
        previous = t.lang
    return records


def detect_corpus(c: Corpus, mode: str = MODE_CONTENT) -> list[SwitchRecord]:
    records: list[SwitchRecord] = []
    for s in c.sentences:
        records.extend(detect_switch_points(s, mode))
    return records


def aggregate(records: Iterable[SwitchRecord], field: str,
              direction: tuple[str, str] | None = None) -> Distribution:
    """Count distribution over the requested field, optionally per direction.

    direction=None pools every record. DEPREL distributions skip records
    whose switch-in token has no dependency label.
    """
    if field not in (UPOS, DEPREL):
        raise ValueError(f"field must be {UPOS!r} or {DEPREL!r}, got {field!r}")
    counts: Counter[str] = Counter()
    for r in records:
        if direction is not None and r.direction != direction:
            continue
        value = r.upos if field == UPOS else r.deprel
        if value is None:
            continue
        counts[value] += 1
    total = sum(counts.values())
    proportions = {label: n / total for label, n in counts.items()}
    return Distribution(field=field, direction=direction,
                        counts=dict(counts), proportions=proportions)


def contains_emoji(text: str, ranges: Sequence[tuple[int, int]] = EMOJI_RANGES) -> bool:
    if VS16 in text:
        return True
    return any(lo <= ord(ch) <= hi for ch in text for lo, hi in ranges)


def split_by_emoji(c: Corpus,
                   ranges: Sequence[tuple[int, int]] = EMOJI_RANGES) -> tuple[Corpus, Corpus]:
    """Exact partition into (sentences with an emoji token, the rest)."""
    with_emoji = tuple(s for s in c.sentences
                       if any(contains_emoji(t.form, ranges) for t in s.tokens))
    without = tuple(s for s in c.sentences
                    if not any(contains_emoji(t.form, ranges) for t in s.tokens))
    return (Corpus(with_emoji, name=c.name, subset="emoji"),
            Corpus(without, name=c.name, subset="noemoji"))


PAIR_DIRECTIONS = {
    "spa_eng": (("en", "es"), ("es", "en")),
    "spa_gua": (("es", "gn"), ("gn", "es")),
}


def _directions_for(c: Corpus, records: Sequence[SwitchRecord]) -> list[tuple[str, str]]:
    directions = {r.direction for r in records}
    for pair in sorted({s.pair for s in c.sentences}):
        directions.update(PAIR_DIRECTIONS.get(pair, ()))
    return sorted(directions)


def _direction_name(direction: tuple[str, str] | None) -> str:
    return "pooled" if direction is None else f"{direction[0]}-{direction[1]}"


def _distribution_rows(dist: Distribution) -> list[tuple[str, int, float]]:
    return sorted(((label, n, dist.proportions[label]) for label, n in dist.counts.items()),
                  key=lambda row: (-row[1], row[0]))


def _csv_text(dist: Distribution) -> str:
    lines = ["label,count,proportion"]
    for label, count, proportion in _distribution_rows(dist):
        lines.append(f"{label},{count},{proportion:.6f}")
    return "\n".join(lines) + "\n"


def export_distributions(c: Corpus, out_dir: str | Path,
                         mode: str = MODE_CONTENT) -> list[Path]:
    """Write one CSV per (field, direction, subset) plus a JSON summary.

    Subsets: all / emoji / noemoji sentences. Directions: both canonical
    directions of the corpus pair(s), any other observed direction, and a
    pooled file. Rows are sorted by count descending then label, so output
    bytes are a pure function of the corpus.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc}") from exc

    with_emoji, without = split_by_emoji(c)
    subsets = {"all": c, "emoji": with_emoji, "noemoji": without}
    all_records = detect_corpus(c, mode)
    directions: list[tuple[str, str] | None] = list(_directions_for(c, all_records))
    directions.append(None)

    written: list[Path] = []
    summary: dict[str, dict] = {}
    for subset_name, subset in subsets.items():
        records = detect_corpus(subset, mode)
        for field in (UPOS, DEPREL):
            for direction in directions:
                dist = aggregate(records, field, direction)
                key = f"{field}|{_direction_name(direction)}|{subset_name}"
                path = out_dir / f"{field}_{_direction_name(direction)}_{subset_name}.csv"
                try:
                    path.write_text(_csv_text(dist), encoding="utf-8")
                except OSError as exc:
                    raise OSError(f"cannot write {path}: {exc}") from exc
                written.append(path)
                summary[key] = {
                    "total": dist.total,
                    "labels": [
                        {"label": label, "count": count, "proportion": proportion}
                        for label, count, proportion in _distribution_rows(dist)
                    ],
                }
    summary_path = out_dir / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n",
                            encoding="utf-8")
    written.append(summary_path)
    return written
