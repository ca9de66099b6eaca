"""Tag inventories and language-tag handling.

Language tags come from the source corpora and are normalized into a small
closed set: the three content languages (en, es, gn), named-entity tags
(ne-<kind>), and a catch-all "other". Only content languages participate in
code-switch detection.
"""

from __future__ import annotations

from dataclasses import dataclass

# Universal POS inventory (UD v2), 17 tags. The corpora additionally use
# "other" for tokens outside the inventory, which is accepted alongside it.
UPOS_TAGS = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
})

# Universal dependency relations (UD v2), 37 base labels. Subtyped labels
# such as acl:relcl or obl:tmod are valid when the base label is.
UNIVERSAL_DEPRELS = frozenset({
    "acl", "advcl", "advmod", "amod", "appos", "aux", "case", "cc", "ccomp",
    "clf", "compound", "conj", "cop", "csubj", "dep", "det", "discourse",
    "dislocated", "expl", "fixed", "flat", "goeswith", "iobj", "list",
    "mark", "nmod", "nsubj", "nummod", "obj", "obl", "orphan", "parataxis",
    "punct", "reparandum", "root", "vocative", "xcomp",
})

CONTENT_LANG_CODES = frozenset({"en", "es", "gn"})


@dataclass(frozen=True)
class LangTag:
    """Normalized language tag: en / es / gn / other / ne (with entity kind)."""

    code: str
    kind: str | None = None

    @property
    def is_content(self) -> bool:
        return self.code in CONTENT_LANG_CODES

    def __str__(self) -> str:
        if self.code == "ne" and self.kind:
            return f"ne-{self.kind}"
        return self.code


EN = LangTag("en")
ES = LangTag("es")
GN = LangTag("gn")
OTHER = LangTag("other")


def ne(kind: str = "") -> LangTag:
    return LangTag("ne", kind)


def normalize_lang_tag(raw: str) -> LangTag:
    """Map a raw corpus tag onto a LangTag. Total: unknown tags become OTHER.

    Positional suffixes ("es-b-ul") and NE BIO markers ("ne-b-org") are
    stripped; only the language identity / entity kind is kept.
    """
    tag = raw.strip().lower()
    parts = tag.split("-")
    base = parts[0]
    if base == "en":
        return EN
    if base == "es":
        return ES
    if base == "gn":
        return GN
    if base == "ne":
        rest = parts[1:]
        if rest and rest[0] in ("b", "i"):
            rest = rest[1:]
        return LangTag("ne", "-".join(rest))
    return OTHER


def is_valid_upos(tag: str) -> bool:
    return tag in UPOS_TAGS or tag.upper() == "OTHER"


def is_valid_deprel(label: str) -> bool:
    """True for a base UD relation or a subtyped one (base:subtype)."""
    base, _, subtype = label.partition(":")
    if base not in UNIVERSAL_DEPRELS:
        return False
    return subtype != "" or ":" not in label
