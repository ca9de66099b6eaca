"""Eight-column annotation tables: data model, parsing, serialization.

The canonical ".bln" format is one token per row with tab-separated columns
ID, FORM, LANG, LEMMA, UPOS, HEAD ID, HEAD, DEPREL. "_" marks an absent
HEAD ID / HEAD / DEPREL. Sentence metadata travels in "# key = value"
comment lines; sentences in a corpus file are separated by blank lines.
Pipe-separated rows (as chat models tend to produce) are accepted on input.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

from .tags import LangTag, normalize_lang_tag

SPA_ENG = "spa_eng"
SPA_GUA = "spa_gua"
PAIRS = (SPA_ENG, SPA_GUA)

COLUMNS = ("ID", "FORM", "LANG", "LEMMA", "UPOS", "HEAD ID", "HEAD", "DEPREL")

UNSET = "_"


class TableParseError(ValueError):
    """Malformed table input; `line` is the 1-based offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Token:
    id: int
    form: str
    lang: LangTag
    lemma: str
    upos: str
    head_id: int | None = None
    head_form: str | None = None
    deprel: str | None = None


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    sent_id: str = ""
    utterance_id: str | None = None
    speaker: str | None = None
    source_file: str | None = None
    spec: bool = False
    pair: str = SPA_ENG

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def forms(self) -> tuple[str, ...]:
        return tuple(t.form for t in self.tokens)

    @property
    def text(self) -> str:
        return " ".join(self.forms)

    def token(self, token_id: int) -> Token:
        """Token with the given id (ids must be the regular 1..n sequence)."""
        tok = self.tokens[token_id - 1]
        if tok.id != token_id:
            raise KeyError(f"token ids are irregular; no positional token {token_id}")
        return tok

    def with_tokens(self, tokens: Iterable[Token]) -> "Sentence":
        return replace(self, tokens=tuple(tokens))


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[Sentence, ...]
    name: str = ""
    subset: str = "full"

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    @property
    def n_tokens(self) -> int:
        return sum(len(s) for s in self.sentences)


def _split_cells(line: str) -> list[str]:
    if "\t" in line:
        return [c.strip() for c in line.split("\t")]
    if "|" in line:
        stripped = line.strip()
        if stripped.startswith("|"):
            stripped = stripped[1:]
        if stripped.endswith("|"):
            stripped = stripped[:-1]
        return [c.strip() for c in stripped.split("|")]
    return [line.strip()]


def _is_divider(cells: list[str]) -> bool:
    return all(c and set(c) <= set("-=: ") for c in cells)


def _parse_meta(line: str, meta: dict) -> None:
    body = line.lstrip("#").strip()
    key, sep, value = body.partition("=")
    if not sep:
        return
    meta[key.strip()] = value.strip()


def _parse_row(cells: list[str], lineno: int) -> Token:
    if len(cells) != 8:
        raise TableParseError(f"expected 8 columns, got {len(cells)}", lineno)
    raw_id, form, lang, lemma, upos, raw_head, head_form, deprel = cells
    try:
        token_id = int(raw_id)
    except ValueError:
        raise TableParseError(f"non-integer ID {raw_id!r}", lineno) from None
    if token_id < 1:
        raise TableParseError(f"ID must be >= 1, got {token_id}", lineno)
    if raw_head == UNSET:
        head_id = None
    else:
        try:
            head_id = int(raw_head)
        except ValueError:
            raise TableParseError(f"non-integer HEAD ID {raw_head!r}", lineno) from None
    return Token(
        id=token_id,
        form=form,
        lang=normalize_lang_tag(lang),
        lemma=lemma,
        upos=upos,
        head_id=head_id,
        head_form=None if head_form == UNSET else head_form,
        deprel=None if deprel == UNSET else deprel,
    )


def _sentence_from_meta(tokens: list[Token], meta: dict) -> Sentence:
    pair = meta.get("pair", SPA_ENG)
    return Sentence(
        tokens=tuple(tokens),
        sent_id=meta.get("sent_id", ""),
        utterance_id=meta.get("utterance_id"),
        speaker=meta.get("speaker"),
        source_file=meta.get("source"),
        spec=meta.get("spec", "false").lower() == "true",
        pair=pair,
    )


def parse_table_lines(numbered_lines: Iterable[tuple[int, str]]) -> Sentence:
    """Parse (lineno, line) pairs forming one sentence block."""
    meta: dict = {}
    tokens: list[Token] = []
    for lineno, raw in numbered_lines:
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.lstrip().startswith("#"):
            _parse_meta(line, meta)
            continue
        cells = _split_cells(line)
        if cells and cells[0].upper() == "ID":
            continue
        if _is_divider(cells):
            continue
        tokens.append(_parse_row(cells, lineno))
    if not tokens:
        raise TableParseError("no rows")
    return _sentence_from_meta(tokens, meta)


def parse_table(text: str) -> Sentence:
    """Parse one sentence table; raises TableParseError on malformed rows."""
    return parse_table_lines(enumerate(text.splitlines(), start=1))


def serialize(s: Sentence) -> str:
    """Canonical text form; parse_table(serialize(s)) == s field-for-field."""
    lines = []
    if s.sent_id:
        lines.append(f"# sent_id = {s.sent_id}")
    if s.utterance_id is not None:
        lines.append(f"# utterance_id = {s.utterance_id}")
    if s.speaker is not None:
        lines.append(f"# speaker = {s.speaker}")
    if s.source_file is not None:
        lines.append(f"# source = {s.source_file}")
    lines.append(f"# pair = {s.pair}")
    lines.append(f"# spec = {'true' if s.spec else 'false'}")
    for t in s.tokens:
        lines.append("\t".join((
            str(t.id),
            t.form,
            str(t.lang),
            t.lemma,
            t.upos,
            UNSET if t.head_id is None else str(t.head_id),
            UNSET if t.head_form is None else t.head_form,
            UNSET if t.deprel is None else t.deprel,
        )))
    return "\n".join(lines)


def corpus_to_text(corpus: Corpus) -> str:
    return "\n\n".join(serialize(s) for s in corpus.sentences) + "\n"


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(corpus_to_text(corpus), encoding="utf-8")


def parse_corpus(text: str, name: str = "") -> Corpus:
    """Parse a multi-sentence .bln document (blank-line separated blocks)."""
    sentences = []
    block: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            block.append((lineno, line))
        elif block:
            sentences.append(parse_table_lines(block))
            block = []
    if block:
        sentences.append(parse_table_lines(block))
    return Corpus(tuple(sentences), name=name)


def read_corpus(path: str | Path) -> Corpus:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise TableParseError(f"cannot read {path}: {exc}") from exc
    try:
        return parse_corpus(text, name=path.name)
    except TableParseError as exc:
        raise TableParseError(f"{path}: {exc}") from exc


def to_conllu(s: Sentence) -> str:
    """Standard 10-column CoNLL-U rendering; LANG moves to MISC as Lang=xx."""
    lines = []
    if s.sent_id:
        lines.append(f"# sent_id = {s.sent_id}")
    lines.append(f"# text = {s.text}")
    for t in s.tokens:
        lines.append("\t".join((
            str(t.id),
            t.form,
            t.lemma,
            t.upos,
            UNSET,
            UNSET,
            UNSET if t.head_id is None else str(t.head_id),
            UNSET if t.deprel is None else t.deprel,
            UNSET,
            f"Lang={t.lang}",
        )))
    return "\n".join(lines)


def corpus_to_conllu(corpus: Corpus) -> str:
    return "\n\n".join(to_conllu(s) for s in corpus.sentences) + "\n"
