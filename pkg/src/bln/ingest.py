"""Raw corpus ingestion: tagged-token files -> Corpus, plus CSW filtering.

Raw file schema (both the Miami-style and GUA-SPA-style fixtures):

    # sent_id = miami_0001        optional; auto-numbered when absent
    # utterance_id = her001.23    optional
    # speaker = MAR               optional
    and     en
    tú      es
    ...
    <blank line between utterances>

One token per line: FORM then its raw language tag, whitespace separated.
Tags are normalized (es-b-ul -> es, ne-b-org -> ne-org, unknown -> other);
UD fields stay unset. The two readers differ only in the language pair they
stamp on the sentences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .table import SPA_ENG, SPA_GUA, Corpus, Sentence, Token
from .tags import normalize_lang_tag

UNANNOTATED = "_"

ELLIPSIS_MARKS = ("...", "…")


class IngestError(ValueError):
    pass


@dataclass(frozen=True)
class RawToken:
    form: str
    raw_tag: str
    position: int


@dataclass(frozen=True)
class CorpusStats:
    n_sentences: int
    n_tokens: int
    n_csw_sentences: int
    n_analysis_sentences: int

    def to_json(self) -> dict:
        return {
            "sentences": self.n_sentences,
            "tokens": self.n_tokens,
            "csw": self.n_csw_sentences,
            "analysis": self.n_analysis_sentences,
        }


def _finish_sentence(raw_tokens: list[RawToken], meta: dict, pair: str,
                     source: str | None, index: int) -> Sentence:
    tokens = tuple(
        Token(id=rt.position, form=rt.form, lang=normalize_lang_tag(rt.raw_tag),
              lemma=UNANNOTATED, upos=UNANNOTATED)
        for rt in raw_tokens
    )
    return Sentence(
        tokens=tokens,
        sent_id=meta.get("sent_id", f"s{index:04d}"),
        utterance_id=meta.get("utterance_id"),
        speaker=meta.get("speaker"),
        source_file=source,
        pair=pair,
    )


def read_tagged_lines(lines: Iterable[str], pair: str,
                      source: str | None = None) -> Corpus:
    sentences: list[Sentence] = []
    raw_tokens: list[RawToken] = []
    meta: dict = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            if raw_tokens:
                sentences.append(_finish_sentence(
                    raw_tokens, meta, pair, source, len(sentences) + 1))
                raw_tokens, meta = [], {}
            continue
        # metadata lines are "# key = value"; a bare "#..." first field is
        # a token form (hashtags occur in the social-media data)
        if line.lstrip().startswith("# "):
            body = line.lstrip("# ").strip()
            key, sep, value = body.partition("=")
            if not sep:
                raise IngestError(
                    f"{source or '<input>'}:{lineno}: malformed metadata line {line!r}")
            meta[key.strip()] = value.strip()
            continue
        fields = line.split()
        if len(fields) != 2:
            raise IngestError(
                f"{source or '<input>'}:{lineno}: expected FORM and TAG, got {line!r}")
        form, tag = fields
        raw_tokens.append(RawToken(form=form, raw_tag=tag, position=len(raw_tokens) + 1))
    if raw_tokens:
        sentences.append(_finish_sentence(
            raw_tokens, meta, pair, source, len(sentences) + 1))
    return Corpus(tuple(sentences), name=source or "")


def read_miami(lines: Iterable[str], source: str | None = None) -> Corpus:
    """Spanish-English transcript fixture -> raw Corpus."""
    return read_tagged_lines(lines, SPA_ENG, source)


def read_guaspa(lines: Iterable[str], source: str | None = None) -> Corpus:
    """Spanish-Guaraní tagged fixture (with ne-* entity tags) -> raw Corpus."""
    return read_tagged_lines(lines, SPA_GUA, source)


def read_raw_file(path: str | Path, fmt: str) -> Corpus:
    path = Path(path)
    reader = {"miami": read_miami, "guaspa": read_guaspa}[fmt]
    with path.open(encoding="utf-8") as f:
        return reader(f, source=path.name)


def is_code_switched(s: Sentence) -> bool:
    """At least two distinct content languages among the token tags."""
    codes = {t.lang.code for t in s.tokens if t.lang.is_content}
    return len(codes) >= 2


def filter_corpus(c: Corpus, min_analysis_tokens: int = 3) -> tuple[Corpus, Corpus, CorpusStats]:
    """Split into the code-switched subset and the analysis-eligible subset.

    Length filtering applies only to the analysis subset; the CSW subset
    keeps every switched sentence regardless of length.
    """
    csw_sentences = tuple(s for s in c.sentences if is_code_switched(s))
    analysis_sentences = tuple(s for s in csw_sentences if len(s) >= min_analysis_tokens)
    stats = CorpusStats(
        n_sentences=len(c),
        n_tokens=c.n_tokens,
        n_csw_sentences=len(csw_sentences),
        n_analysis_sentences=len(analysis_sentences),
    )
    csw = Corpus(csw_sentences, name=c.name, subset="csw")
    analysis = Corpus(analysis_sentences, name=c.name, subset="analysis")
    return csw, analysis, stats


def flag_spec(s: Sentence) -> bool:
    """Heuristic informal-structure flag for annotated sentences.

    True on any of: adjacent duplicate forms (case-insensitive), a token
    with an unannotated head, an interjection, or a trailing ellipsis mark.
    """
    forms = [t.form for t in s.tokens]
    for a, b in zip(forms, forms[1:]):
        if a.lower() == b.lower():
            return True
    if any(t.head_id is None for t in s.tokens):
        return True
    if any(t.upos == "INTJ" for t in s.tokens):
        return True
    return bool(forms) and forms[-1] in ELLIPSIS_MARKS


def write_stats(stats: CorpusStats, path: str | Path) -> None:
    Path(path).write_text(json.dumps(stats.to_json(), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")
