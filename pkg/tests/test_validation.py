import random

import pytest

from bln.table import Sentence, Token, parse_table
from bln.tags import EN, ES
from bln.validation import (BAD_LABEL, CYCLE, DUPLICATE_ID, HARD_CODES,
                            HEAD_FORM_MISMATCH, HEAD_OUT_OF_RANGE,
                            MULTIPLE_ROOTS, NO_ROOT, PUNCT_NOT_PUNCT_REL,
                            SELF_HEAD, TreeError, advisories, children_map,
                            hard_violations, validate)

from generators import random_sentence, random_tree_sentence
import oracles


def tok(i, form, head, deprel, upos="NOUN", head_form=None, lang=EN):
    if head == 0:
        head_form = head_form or "root"
    return Token(id=i, form=form, lang=lang, lemma=form, upos=upos,
                 head_id=head, head_form=head_form, deprel=deprel)


def sent(*tokens):
    return Sentence(tokens=tuple(tokens), sent_id="t")


def test_table3_has_exactly_one_mismatch(table_sentence):
    violations = validate(table_sentence(3))
    assert [(v.code, v.token_id) for v in violations] == [(HEAD_FORM_MISMATCH, 4)]
    assert not violations[0].is_hard()


def test_table7_clean(table_sentence):
    assert validate(table_sentence(7)) == []


def test_tables_5_and_6_clean(table_sentence):
    assert validate(table_sentence(5)) == []
    assert validate(table_sentence(6)) == []


def test_table4_bad_label_only(table_sentence):
    violations = validate(table_sentence(4))
    assert [(v.code, v.token_id) for v in violations] == [(BAD_LABEL, 4)]
    assert "attr" in violations[0].message


def test_multiple_roots():
    s = sent(tok(1, "a", 0, "root"), tok(2, "b", 0, "root"))
    assert [v.code for v in validate(s)] == [MULTIPLE_ROOTS]


def test_no_root():
    s = sent(tok(1, "a", 2, "nsubj", head_form="b"), tok(2, "b", 1, "obj", head_form="a"))
    codes = {v.code for v in validate(s)}
    assert NO_ROOT in codes
    assert CYCLE in codes


def test_unannotated_sentence_not_diagnosed_no_root():
    s = sent(Token(id=1, form="a", lang=EN, lemma="a", upos="_"),
             Token(id=2, form="b", lang=ES, lemma="b", upos="_"))
    codes = {v.code for v in validate(s)}
    assert NO_ROOT not in codes


def test_partial_annotation_skips_absent_heads(table_sentence):
    # table4 has two unannotated tokens; no root/cycle diagnosis for them
    codes = [v.code for v in validate(table_sentence(4))]
    assert NO_ROOT not in codes
    assert CYCLE not in codes


def test_self_head():
    s = sent(tok(1, "a", 0, "root"), tok(2, "b", 2, "obj", head_form="b"))
    assert [v.code for v in validate(s) if v.token_id == 2] == [SELF_HEAD]


def test_head_out_of_range():
    s = sent(tok(1, "a", 0, "root"), tok(2, "b", 9, "obj", head_form="x"))
    codes = [v.code for v in validate(s) if v.token_id == 2]
    assert HEAD_OUT_OF_RANGE in codes


def test_cycle_detected_once():
    s = sent(tok(1, "a", 2, "conj", head_form="b"),
             tok(2, "b", 3, "conj", head_form="c"),
             tok(3, "c", 1, "conj", head_form="a"),
             tok(4, "d", 0, "root"))
    assert [v.code for v in validate(s) if v.code == CYCLE] == [CYCLE]


def test_punct_rule():
    s = sent(tok(1, "a", 0, "root"), tok(2, ".", 1, "obj", upos="PUNCT", head_form="a"))
    assert PUNCT_NOT_PUNCT_REL in {v.code for v in validate(s)}


def test_duplicate_ids():
    s = sent(tok(1, "a", 0, "root"), tok(1, "a2", 0, "root"))
    codes = [v.code for v in validate(s)]
    assert DUPLICATE_ID in codes
    assert MULTIPLE_ROOTS in codes


def test_gapped_ids_flagged():
    s = sent(tok(1, "a", 0, "root"), tok(3, "b", 1, "obj", head_form="a"))
    assert DUPLICATE_ID in {v.code for v in validate(s)}


def test_root_deprel_consistency():
    s = sent(tok(1, "a", 0, "nsubj"))
    assert BAD_LABEL in {v.code for v in validate(s)}
    s = sent(tok(1, "a", 0, "root"), tok(2, "b", 1, "root", head_form="a"))
    assert BAD_LABEL in {v.code for v in validate(s)}


def test_validate_deterministic_and_sorted():
    rng = random.Random(99)
    for i in range(200):
        s = random_sentence(rng, index=i)
        first = validate(s)
        second = validate(s)
        assert first == second
        keys = [(v.token_id if v.token_id is not None else 0, v.code) for v in first]
        assert keys == sorted(keys)


def test_clean_tree_properties():
    rng = random.Random(4242)
    for i in range(200):
        s = random_tree_sentence(rng, index=i)
        assert validate(s) == [], s
        assert oracles.reaches_root(s)
        cm = children_map(s)
        assert cm == oracles.children_of(s)
        assert sum(len(v) for v in cm.values()) == len(s) - 1


def test_children_map_spec_examples(table_sentence):
    assert children_map(table_sentence(6)) == {4: [1, 2, 3, 5]}
    assert children_map(table_sentence(5)) == {2: [1, 3, 4, 6, 8], 6: [5, 7]}
    single = parse_table("1\tsí\tes\tsí\tINTJ\t0\troot\troot")
    assert children_map(single) == {}


def test_children_map_preconditions(table_sentence):
    with pytest.raises(TreeError, match="unannotated"):
        children_map(table_sentence(4))
    cyclic = sent(tok(1, "a", 2, "conj", head_form="b"),
                  tok(2, "b", 1, "conj", head_form="a"),
                  tok(3, "c", 0, "root"))
    with pytest.raises(TreeError, match=CYCLE):
        children_map(cyclic)


def test_hard_codes_cover_tree_breakers():
    assert {MULTIPLE_ROOTS, NO_ROOT, HEAD_OUT_OF_RANGE, CYCLE,
            DUPLICATE_ID, SELF_HEAD} == set(HARD_CODES)
    assert hard_violations(sent(tok(1, "a", 0, "root"))) == []


def test_advisories_report_non_root_punct(table_sentence):
    s = sent(tok(1, "a", 0, "root"),
             tok(2, "b", 1, "obj", head_form="a"),
             tok(3, ".", 2, "punct", upos="PUNCT", head_form="b"))
    notes = advisories(s)
    assert len(notes) == 1 and "non-root" in notes[0]
    assert advisories(table_sentence(7)) == []
