"""HTTP+JSON service over a ReviewStore, for the browser review UI.

Endpoints:
    GET  /corpora
    GET  /corpora/{corpus_id}/sentences?status=
    GET  /sentences/{sent_id}
    POST /sentences/{sent_id}/corrections
    POST /sentences/{sent_id}/accept
    GET  /agreement?a=&b=&field=&corpus_id=&sent_ids=
    GET  /reports/{corpus_id}?reference=gold|reviewed
    GET  /switchpoints/{corpus_id}

Annotator identity rides in the X-Annotator-Id header (no further auth).
The built review UI bundle, when configured, is served at /.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Header, HTTPException, Query
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import review
from .review import AcceptBlocked, Conflict, InvalidCorrection, NotFound, ReviewStore
from .switchpoints import aggregate, detect_corpus, DEPREL, UPOS
from .table import Corpus, Sentence
from .validation import (TreeError, Violation, advisories, children_map,
                         validate)


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8470
    store_path: str | None = None
    groups_path: str | None = None
    ui_dir: str | None = None

    @classmethod
    def load(cls, path: str | Path | None = None) -> "ServerConfig":
        """Key = value config file, overridable by BLN_* env vars."""
        cfg = cls()
        if path is not None:
            for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, value = line.partition("=")
                key, value = key.strip(), value.strip()
                if not sep or key not in ("listen", "store", "groups", "ui"):
                    raise ValueError(f"{path}:{lineno}: bad config line {line!r}")
                if key == "listen":
                    cfg.host, _, port = value.partition(":")
                    cfg.port = int(port or cfg.port)
                elif key == "store":
                    cfg.store_path = value
                elif key == "groups":
                    cfg.groups_path = value
                elif key == "ui":
                    cfg.ui_dir = value
        listen = os.environ.get("BLN_LISTEN")
        if listen:
            cfg.host, _, port = listen.partition(":")
            if port:
                cfg.port = int(port)
        cfg.store_path = os.environ.get("BLN_STORE", cfg.store_path)
        cfg.groups_path = os.environ.get("BLN_GROUPS", cfg.groups_path)
        cfg.ui_dir = os.environ.get("BLN_UI", cfg.ui_dir)
        return cfg


def _token_json(t) -> dict:
    return {
        "id": t.id, "form": t.form, "lang": str(t.lang), "lemma": t.lemma,
        "upos": t.upos, "head_id": t.head_id, "head_form": t.head_form,
        "deprel": t.deprel,
    }


def _violation_json(v: Violation) -> dict:
    return {"code": v.code, "sent_id": v.sent_id, "token_id": v.token_id,
            "message": v.message, "hard": v.is_hard()}


def _sentence_json(store: ReviewStore, s: Sentence) -> dict:
    state = store.state(s.sent_id)
    violations = validate(s)
    try:
        tree = {str(k): v for k, v in children_map(s).items()}
    except TreeError:
        tree = None
    return {
        "corpus_id": store.sent_corpus[s.sent_id],
        "sent_id": s.sent_id,
        "text": s.text,
        "pair": s.pair,
        "spec": s.spec,
        "speaker": s.speaker,
        "utterance_id": s.utterance_id,
        "status": state.status,
        "reviewed_by": sorted(state.reviewed_by),
        "tokens": [_token_json(t) for t in s.tokens],
        "violations": [_violation_json(v) for v in violations],
        "advisories": advisories(s),
        "children_map": tree,
        "history": [
            {"token_id": c.token_id, "field": c.field, "old_value": c.old_value,
             "new_value": c.new_value, "annotator_id": c.annotator_id,
             "timestamp": c.timestamp}
            for c in store.history[s.sent_id]
        ],
    }


class CorrectionBody(BaseModel):
    token_id: Optional[int] = None
    field: str
    old_value: object = None
    new_value: object = None


def create_app(store: ReviewStore, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="bln review service")

    @app.get("/corpora")
    def corpora():
        out = []
        for corpus_id in store.corpus_ids():
            sentences = store.sentences_of(corpus_id)
            counts: dict[str, int] = {}
            for s in sentences:
                status = store.state(s.sent_id).status
                counts[status] = counts.get(status, 0) + 1
            out.append({
                "id": corpus_id,
                "n_sentences": len(sentences),
                "status_counts": counts,
                "has_gold": corpus_id in store.gold,
            })
        return {"corpora": out}

    @app.get("/corpora/{corpus_id}/sentences")
    def corpus_sentences(corpus_id: str, status: Optional[str] = None):
        try:
            sentences = store.sentences_of(corpus_id, status)
        except NotFound as exc:
            raise HTTPException(404, str(exc)) from exc
        return {"sentences": [
            {"sent_id": s.sent_id, "text": s.text,
             "status": store.state(s.sent_id).status,
             "n_violations": len(validate(s)),
             "n_hard": sum(1 for v in validate(s) if v.is_hard())}
            for s in sentences
        ]}

    @app.get("/sentences/{sent_id}")
    def sentence(sent_id: str):
        try:
            s = store.sentence(sent_id)
        except NotFound as exc:
            raise HTTPException(404, str(exc)) from exc
        return _sentence_json(store, s)

    @app.post("/sentences/{sent_id}/corrections")
    def post_correction(sent_id: str, body: CorrectionBody,
                        x_annotator_id: str = Header(default="anonymous")):
        try:
            updated, violations = store.apply_correction(
                sent_id, body.token_id, body.field, body.old_value,
                body.new_value, x_annotator_id)
        except NotFound as exc:
            raise HTTPException(404, str(exc)) from exc
        except Conflict as exc:
            raise HTTPException(409, str(exc)) from exc
        except InvalidCorrection as exc:
            raise HTTPException(422, str(exc)) from exc
        return {"sentence": _sentence_json(store, updated),
                "violations": [_violation_json(v) for v in violations]}

    @app.post("/sentences/{sent_id}/accept")
    def post_accept(sent_id: str,
                    x_annotator_id: str = Header(default="anonymous")):
        try:
            state = store.accept(sent_id, x_annotator_id)
        except NotFound as exc:
            raise HTTPException(404, str(exc)) from exc
        except AcceptBlocked as exc:
            return JSONResponse(status_code=409, content={
                "error": str(exc),
                "violations": [_violation_json(v) for v in exc.violations],
            })
        return {"sent_id": sent_id, "status": state.status,
                "reviewed_by": sorted(state.reviewed_by)}

    @app.get("/agreement")
    def agreement(a: str, b: str, field: str = Query(default=review.FIELD_DEPREL),
                  corpus_id: Optional[str] = None,
                  sent_ids: Optional[str] = None):
        if sent_ids:
            ids = [x for x in sent_ids.split(",") if x]
        elif corpus_id:
            try:
                ids = [s.sent_id for s in store.sentences_of(corpus_id)]
            except NotFound as exc:
                raise HTTPException(404, str(exc)) from exc
        else:
            ids = [sid for cid in store.corpus_ids()
                   for sid in store.order[cid]]
        try:
            kappa = store.agreement(ids, a, b, field)
        except NotFound as exc:
            raise HTTPException(404, str(exc)) from exc
        except (ValueError, KeyError) as exc:
            raise HTTPException(422, str(exc)) from exc
        return {"a": a, "b": b, "field": field, "n_sentences": len(ids),
                "kappa": kappa}

    @app.get("/reports/{corpus_id}")
    def report(corpus_id: str, reference: str = "reviewed"):
        ref = reference.upper()
        try:
            result = store.recompute_report(corpus_id, ref)
        except NotFound as exc:
            raise HTTPException(404, str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from exc
        return result.to_json()

    @app.get("/switchpoints/{corpus_id}")
    def switchpoints(corpus_id: str):
        try:
            sentences = store.sentences_of(corpus_id)
        except NotFound as exc:
            raise HTTPException(404, str(exc)) from exc
        records = detect_corpus(Corpus(tuple(sentences), name=corpus_id))
        directions = sorted({r.direction for r in records})
        distributions = {}
        for field in (UPOS, DEPREL):
            for direction in [None, *directions]:
                dist = aggregate(records, field, direction)
                key = f"{field}|{'pooled' if direction is None else '-'.join(direction)}"
                distributions[key] = {"counts": dist.counts,
                                      "proportions": dist.proportions}
        return {
            "corpus_id": corpus_id,
            "records": [
                {"sent_id": r.sent_id, "token_id": r.token_id,
                 "from_lang": str(r.from_lang), "to_lang": str(r.to_lang),
                 "upos": r.upos, "deprel": r.deprel}
                for r in records
            ],
            "distributions": distributions,
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
