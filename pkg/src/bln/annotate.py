"""LLM-backed annotation: prompts, response parsing, caching, retries.

Every request/response pair is recorded in an append-only JSON-lines cache
keyed by a hash of (pair, model, prompt text); a populated cache replays a
whole corpus annotation byte-identically with zero network traffic, which
is how CI and the offline pipeline run. On structurally broken responses
(multiple roots, cycles, duplicate ids, ...) the annotator re-prompts with
the violation messages appended, up to max_retries, then keeps the best
attempt; label-quality issues are left for expert review.

The only tokenization change a response may introduce is English
contraction splitting (didn't -> did + n't / was + not); the alignment of
output to input forms is recorded so the original token stream is always
recoverable. Guaraní words are never segmented.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Sequence

import httpx

from .switchpoints import contains_emoji
from .table import Sentence, Token, parse_table, TableParseError
from .validation import HARD_CODES, Violation, validate

DEFAULT_MODEL = "gpt-4.1-2025-04-14"
DEFAULT_ENDPOINT = "https://api.openai.com/v1/chat/completions"

# retried when a response parses but its structure is broken
RETRY_CODES = HARD_CODES


class FormatError(ValueError):
    """Response is not a parseable eight-column table."""

    def __init__(self, message: str, code: str | None = None):
        self.code = code
        super().__init__(message)


class AlignmentError(ValueError):
    """Response forms cannot be aligned with the input forms."""


class ServiceError(RuntimeError):
    """Transport, auth, or protocol failure talking to the LLM service."""


class AnnotationFailed(RuntimeError):
    """No attempt produced a parseable table; raw texts are attached."""

    def __init__(self, message: str, raw_texts: list[str]):
        self.raw_texts = raw_texts
        super().__init__(message)


@dataclass(frozen=True)
class LlmConfig:
    model: str = DEFAULT_MODEL
    temperature: float = 0.0
    top_p: float = 1.0
    max_tokens: int = 3000
    max_retries: int = 2
    endpoint: str = DEFAULT_ENDPOINT
    credentials_env: str = "OPENAI_API_KEY"

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature must be in [0, 2], got {self.temperature}")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")

    @classmethod
    def load(cls, path: str | Path) -> "LlmConfig":
        """Read a key = value config file (unknown keys rejected)."""
        values: dict = {}
        casts = {"temperature": float, "top_p": float,
                 "max_tokens": int, "max_retries": int}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or key not in cls.__dataclass_fields__:
                raise ValueError(f"{path}:{lineno}: bad config line {line!r}")
            values[key] = casts.get(key, str)(value)
        return cls(**values)


@dataclass(frozen=True)
class PromptBundle:
    system: str
    user: str
    pair: str


def load_prompt(pair: str, prompt_dir: str | Path | None = None) -> str:
    """System prompt for a language pair, from prompt_dir or the built-ins."""
    name = f"{pair}.txt"
    if prompt_dir is not None:
        return (Path(prompt_dir) / name).read_text(encoding="utf-8")
    return resources.files("bln").joinpath(f"prompts/{name}").read_text("utf-8")


def build_prompt(s: Sentence, pair: str | None = None,
                 prompt_dir: str | Path | None = None) -> PromptBundle:
    """Bundle the pair's system prompt with a per-sentence user message."""
    if not s.tokens:
        raise ValueError("no tokens to annotate")
    pair = pair or s.pair
    system = load_prompt(pair, prompt_dir)
    lines = ["Annotate this code-switched sentence.", "Tokens:"]
    for t in s.tokens:
        lines.append(f"{t.id}. {t.form} [{t.lang}]")
    lines.append("")
    lines.append("Return the eight-column table (ID | FORM | LANG | LEMMA | "
                 "UPOS | HEAD ID | HEAD | DEPREL), one row per token.")
    if pair == "spa_gua" and any(contains_emoji(t.form) for t in s.tokens):
        lines.append("This sentence contains emoji tokens: label each "
                     "emoji with the discourse (or other) relation.")
    return PromptBundle(system=system, user="\n".join(lines), pair=pair)


def retry_user_message(base_user: str, feedback: str) -> str:
    """User message for a re-prompt after a structurally broken response."""
    return (f"{base_user}\n\nYour previous table had structural problems:\n"
            f"{feedback}\nReturn a corrected table.")


def cache_key(pair: str, model: str, system: str, user: str) -> str:
    payload = json.dumps([pair, model, system, user], ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class ResponseCache:
    """Append-only JSON-lines response cache; safe for concurrent writers."""

    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        self._entries: dict[str, tuple[str, str]] = {}  # key -> (pair, text)
        if self.path is not None and self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                entry = json.loads(line)
                self._entries[entry["key"]] = (entry["pair"], entry["response_text"])

    def get(self, key: str, pair: str) -> str | None:
        entry = self._entries.get(key)
        if entry is None or entry[0] != pair:
            return None
        return entry[1]

    def put(self, key: str, pair: str, response_text: str) -> None:
        with self._lock:
            self._entries[key] = (pair, response_text)
            if self.path is not None:
                record = {"key": key, "pair": pair, "response_text": response_text,
                          "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}
                with self.path.open("a", encoding="utf-8") as f:
                    f.write(json.dumps(record, ensure_ascii=False) + "\n")

    def __len__(self) -> int:
        return len(self._entries)


class ChatClient:
    """Minimal chat-completions HTTP client."""

    def __init__(self, timeout: float = 60.0):
        self.timeout = timeout

    def complete(self, cfg: LlmConfig, system: str, user: str) -> str:
        api_key = os.environ.get(cfg.credentials_env)
        if not api_key:
            raise ServiceError(f"credentials env var {cfg.credentials_env} is not set")
        payload = {
            "model": cfg.model,
            "temperature": cfg.temperature,
            "top_p": cfg.top_p,
            "max_tokens": cfg.max_tokens,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
        }
        try:
            response = httpx.post(
                cfg.endpoint, json=payload, timeout=self.timeout,
                headers={"Authorization": f"Bearer {api_key}"})
        except httpx.HTTPError as exc:
            raise ServiceError(f"transport failure: {exc}") from exc
        if response.status_code != 200:
            raise ServiceError(
                f"service returned {response.status_code}: {response.text[:200]}")
        try:
            return response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise ServiceError(f"malformed service response: {exc}") from exc


def _norm(text: str) -> str:
    return text.lower().replace("’", "'")


def _expansion_matches(form: str, parts: Sequence[str]) -> bool:
    joined = _norm("".join(parts))
    target = _norm(form)
    return joined == target or joined == target.replace("n't", "not")


def _table_rows(text: str) -> str:
    """Keep only lines that can belong to a table (prose and fences dropped)."""
    rows = []
    for line in text.splitlines():
        stripped = line.strip().strip("`")
        if not stripped:
            continue
        if "\t" not in stripped and "|" not in stripped:
            continue
        first = stripped.split("\t")[0] if "\t" in stripped else stripped.lstrip("|").split("|")[0]
        first = first.strip()
        if first.upper() == "ID" or first.isdigit() or (first and set(first) <= set("-=: ")):
            rows.append(stripped)
    return "\n".join(rows)


def parse_response(text: str, source: Sentence) -> tuple[Sentence, dict[int, tuple[int, int]]]:
    """Parse a response table and align it against the input sentence.

    Returns the annotated sentence (input metadata, output UD fields) and
    the contraction expansions as {input position -> (first, last) output
    ids}. LANG is inherited from the aligned input token, never taken from
    the response.
    """
    rows = _table_rows(text)
    if not rows:
        raise FormatError("no table rows found in response")
    try:
        parsed = parse_table(rows)
    except TableParseError as exc:
        raise FormatError(f"unparseable table: {exc}") from exc

    ids = [t.id for t in parsed.tokens]
    for previous, current in zip(ids, ids[1:]):
        if current == previous:
            raise FormatError(f"row id {current} repeated", code="DUPLICATE_ID")
        if current != previous + 1:
            raise FormatError(f"row ids jump from {previous} to {current}")
    if ids and ids[0] != 1:
        raise FormatError(f"row ids must start at 1, got {ids[0]}")

    out_tokens = list(parsed.tokens)
    aligned: list[Token] = []
    expansions: dict[int, tuple[int, int]] = {}
    j = 0
    for i, src in enumerate(source.tokens, start=1):
        if j >= len(out_tokens):
            raise AlignmentError(
                f"response ended before input position {i} ({src.form!r})")
        if out_tokens[j].form == src.form:
            aligned.append(replace(out_tokens[j], lang=src.lang))
            j += 1
            continue
        match_len = 0
        for m in range(2, 5):
            parts = [t.form for t in out_tokens[j:j + m]]
            if len(parts) == m and _expansion_matches(src.form, parts):
                match_len = m
                break
        if not match_len:
            raise AlignmentError(
                f"position {i}: input form {src.form!r} vs response form "
                f"{out_tokens[j].form!r}")
        expansions[i] = (out_tokens[j].id, out_tokens[j + match_len - 1].id)
        for t in out_tokens[j:j + match_len]:
            aligned.append(replace(t, lang=src.lang))
        j += match_len
    if j != len(out_tokens):
        raise AlignmentError(
            f"response has {len(out_tokens) - j} extra trailing rows")

    sentence = replace(source, tokens=tuple(aligned))
    return sentence, expansions


def recover_input_forms(forms: Sequence[str], expansions: dict[int, tuple[int, int]],
                        n_input: int) -> list[str]:
    """Collapse recorded expansion ranges back into input-side forms.

    Exact for apostrophe-preserving splits (it's -> it + 's); splits that
    normalized "n't" to "not" come back with the "not" spelling, so callers
    compare with forms_match().
    """
    out = []
    j = 0
    for i in range(1, n_input + 1):
        if i in expansions:
            first, last = expansions[i]
            width = last - first + 1
            out.append("".join(forms[j:j + width]))
            j += width
        else:
            out.append(forms[j])
            j += 1
    return out


def forms_match(input_form: str, recovered: str) -> bool:
    """True when a recovered form reproduces the input form (modulo n't/not)."""
    return _norm(recovered) in (_norm(input_form), _norm(input_form).replace("n't", "not"))


def annotate(s: Sentence, cfg: LlmConfig, cache: ResponseCache,
             client: ChatClient | None = None,
             prompt_dir: str | Path | None = None,
             ) -> tuple[Sentence, list[Violation], int]:
    """Annotate one sentence, consulting the cache before the service.

    Returns (sentence, residual violations, retries performed). client=None
    runs fully offline: a cache miss is a ServiceError.
    """
    bundle = build_prompt(s, prompt_dir=prompt_dir)
    attempts: list[tuple[float, int, Sentence | None, list[Violation]]] = []
    raw_texts: list[str] = []
    feedback: str | None = None
    for attempt in range(cfg.max_retries + 1):
        user = bundle.user if feedback is None else retry_user_message(bundle.user, feedback)
        key = cache_key(bundle.pair, cfg.model, bundle.system, user)
        raw = cache.get(key, bundle.pair)
        if raw is None:
            if client is None:
                raise ServiceError(
                    f"offline run and no cached response for sentence "
                    f"{s.sent_id!r} (attempt {attempt})")
            raw = client.complete(cfg, bundle.system, user)
            cache.put(key, bundle.pair, raw)
        raw_texts.append(raw)
        unparseable = (float("inf"), attempt, None, [])
        try:
            parsed, _ = parse_response(raw, s)
        except FormatError as exc:
            attempts.append(unparseable)
            feedback = f"{exc.code}: {exc}" if exc.code else str(exc)
            continue
        except AlignmentError as exc:
            attempts.append(unparseable)
            feedback = f"token forms did not match the input: {exc}"
            continue
        violations = validate(parsed)
        hard = [v for v in violations if v.code in RETRY_CODES]
        if not hard:
            return parsed, violations, attempt
        attempts.append((len(hard), attempt, parsed, violations))
        feedback = "; ".join(f"{v.code}: {v.message}" for v in hard)

    _, _, best, violations = min(attempts, key=lambda a: (a[0], a[1]))
    if best is None:
        raise AnnotationFailed(
            f"all {len(attempts)} attempts for sentence {s.sent_id!r} were "
            f"unparseable", raw_texts)
    return best, violations, cfg.max_retries


def annotate_corpus(sentences: Sequence[Sentence], cfg: LlmConfig,
                    cache: ResponseCache, client: ChatClient | None = None,
                    prompt_dir: str | Path | None = None, jobs: int = 1,
                    ) -> list[tuple[Sentence, list[Violation], int]]:
    """Annotate sentences independently, preserving input order."""
    if jobs <= 1:
        return [annotate(s, cfg, cache, client, prompt_dir) for s in sentences]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(annotate, s, cfg, cache, client, prompt_dir)
                   for s in sentences]
        return [f.result() for f in futures]
