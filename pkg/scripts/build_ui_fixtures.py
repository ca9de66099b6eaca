#!/usr/bin/env python3
"""Capture real review-service responses as JSON fixtures for the UI tests.

The browser UI is tested against these payloads so its expectations can
never drift from what the service actually returns. Regenerate after any
API change: python scripts/build_ui_fixtures.py
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from bln.review import ReviewStore  # noqa: E402
from bln.server import create_app  # noqa: E402
from bln.table import Corpus, Sentence, Token, read_corpus  # noqa: E402
from bln.tags import ES  # noqa: E402

OUT = ROOT / "frontend" / "tests" / "fixtures"


def two_roots_sentence():
    return Sentence(sent_id="tworoots", tokens=(
        Token(1, "sí", ES, "sí", "INTJ", 0, "root", "root"),
        Token(2, "vale", ES, "vale", "INTJ", 0, "root", "root"),
    ))


def agreement_sentence(sent_id, deprels):
    n = len(deprels)
    root_pos = deprels.index("root") + 1
    tokens = []
    for i, deprel in enumerate(deprels, start=1):
        head = 0 if deprel == "root" else root_pos
        head_form = "root" if head == 0 else f"w{root_pos}"
        tokens.append(Token(i, f"w{i}", ES, f"w{i}", "VERB" if head == 0 else "PRON",
                            head, head_form, deprel))
    return Sentence(sent_id=sent_id, tokens=tuple(tokens))


def save(name, payload):
    (OUT / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                            encoding="utf-8")
    print(f"wrote {name}")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    store = ReviewStore()
    table3 = read_corpus(ROOT / "tests" / "fixtures" / "table3.bln").sentences[0]
    store.load_corpus("mini", Corpus((table3, two_roots_sentence())))
    store.load_corpus("agr", Corpus((
        agreement_sentence("s1", ["nsubj", "obj", "nsubj", "root"]),)))
    client = TestClient(create_app(store))

    save("corpora.json", client.get("/corpora").json())
    save("queue_mini.json", client.get("/corpora/mini/sentences").json())
    save("sentence_table3.json", client.get("/sentences/table3").json())
    save("sentence_tworoots.json", client.get("/sentences/tworoots").json())

    blocked = client.post("/sentences/tworoots/accept",
                          headers={"X-Annotator-Id": "ann_a"})
    assert blocked.status_code == 409
    save("accept_blocked.json", blocked.json())

    stale = client.post("/sentences/table3/corrections",
                        json={"token_id": 4, "field": "HEAD_ID",
                              "old_value": 99, "new_value": 5})
    assert stale.status_code == 409
    save("correction_conflict.json", {"detail": stale.json()["detail"]})

    fixed = client.post("/sentences/table3/corrections",
                        json={"token_id": 4, "field": "HEAD_ID",
                              "old_value": 6, "new_value": 5},
                        headers={"X-Annotator-Id": "ann_a"})
    assert fixed.status_code == 200
    assert fixed.json()["violations"] == []
    save("correction_table3_fix.json", fixed.json())

    accepted = client.post("/sentences/table3/accept",
                           headers={"X-Annotator-Id": "ann_a"})
    assert accepted.status_code == 200
    save("accept_table3.json", accepted.json())

    # two annotators complete the agreement fixture; b relabels token 3
    client.post("/sentences/s1/accept", headers={"X-Annotator-Id": "ann_a"})
    client.post("/sentences/s1/corrections",
                json={"token_id": 3, "field": "DEPREL",
                      "old_value": "nsubj", "new_value": "obj"},
                headers={"X-Annotator-Id": "ann_b"})
    client.post("/sentences/s1/accept", headers={"X-Annotator-Id": "ann_b"})
    agreement = client.get("/agreement", params={
        "a": "ann_a", "b": "ann_b", "field": "DEPREL", "corpus_id": "agr"})
    assert agreement.status_code == 200
    save("agreement.json", agreement.json())


if __name__ == "__main__":
    main()
