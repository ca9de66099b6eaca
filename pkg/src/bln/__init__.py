"""UD annotation toolkit for code-switched bilingual text."""

from .table import (Corpus, Sentence, Token, SPA_ENG, SPA_GUA, parse_table,
                    parse_corpus, read_corpus, serialize, to_conllu,
                    write_corpus)
from .tags import EN, ES, GN, OTHER, LangTag, ne, normalize_lang_tag
from .validation import Violation, children_map, hard_violations, validate
from .ingest import (CorpusStats, filter_corpus, flag_spec, is_code_switched,
                     read_guaspa, read_miami)
from .evaluate import (EquivalenceGroups, EvalReport, cohen_kappa,
                       corpus_report, score, tags_equivalent)
from .switchpoints import (Distribution, SwitchRecord, aggregate,
                           detect_switch_points, split_by_emoji)
from .annotate import (LlmConfig, PromptBundle, ResponseCache, annotate,
                       build_prompt, parse_response)
from .review import ReviewStore

__version__ = "0.1.0"

__all__ = [
    "Corpus", "Sentence", "Token", "SPA_ENG", "SPA_GUA", "parse_table",
    "parse_corpus", "read_corpus", "serialize", "to_conllu", "write_corpus",
    "EN", "ES", "GN", "OTHER", "LangTag", "ne", "normalize_lang_tag",
    "Violation", "children_map", "hard_violations", "validate",
    "CorpusStats", "filter_corpus", "flag_spec", "is_code_switched",
    "read_guaspa", "read_miami",
    "EquivalenceGroups", "EvalReport", "cohen_kappa", "corpus_report",
    "score", "tags_equivalent",
    "Distribution", "SwitchRecord", "aggregate", "detect_switch_points",
    "split_by_emoji",
    "LlmConfig", "PromptBundle", "ResponseCache", "annotate", "build_prompt",
    "parse_response",
    "ReviewStore",
]
