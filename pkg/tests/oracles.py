"""Independent brute-force reference implementations.

Everything here recomputes results from first principles with deliberately
naive logic (flat loops, no shared code paths with the library beyond the
plain data types), so golden files and property tests check the real
implementations against a second opinion rather than against themselves.
"""

CONTENT = {"en", "es", "gn"}


# ---------------------------------------------------------------------------
# raw fixture statistics (parses the raw text directly, not via bln readers)

def raw_stats(text, min_tokens=3):
    sentences = []
    current = []
    for line in text.splitlines():
        if not line.strip():
            if current:
                sentences.append(current)
                current = []
            continue
        if line.lstrip().startswith("# "):
            continue
        current.append(line.split()[-1])
    if current:
        sentences.append(current)

    def content_langs(tags):
        out = set()
        for tag in tags:
            base = tag.lower().split("-")[0]
            if base in CONTENT:
                out.add(base)
        return out

    n_tokens = sum(len(tags) for tags in sentences)
    csw = [tags for tags in sentences if len(content_langs(tags)) >= 2]
    analysis = [tags for tags in csw if len(tags) >= min_tokens]
    return {
        "sentences": len(sentences),
        "tokens": n_tokens,
        "csw": len(csw),
        "analysis": len(analysis),
    }


# ---------------------------------------------------------------------------
# evaluation metrics (per-token recount)

def labels_equivalent(a, b, group_lists):
    if a == b:
        return True
    for labels in group_lists:
        if a in labels and b in labels:
            return True
    return False


def score_tokens(pairs, group_lists):
    """pairs: list of (gold Token, pred Token). Returns the report fields."""
    n = 0
    upos = 0
    attach = 0
    dep_s = dep_r = las_s = las_r = 0
    for g, p in pairs:
        n += 1
        if g.upos == p.upos:
            upos += 1
        if g.head_id is None:
            continue
        attach += 1
        head_ok = p.head_id == g.head_id
        if p.deprel == g.deprel:
            dep_s += 1
            if head_ok:
                las_s += 1
        if g.deprel == p.deprel or (
                g.deprel is not None and p.deprel is not None
                and labels_equivalent(g.deprel, p.deprel, group_lists)):
            dep_r += 1
            if head_ok:
                las_r += 1
    div = lambda a, b: a / b if b else 1.0
    return {
        "n_tokens": n,
        "upos_acc": div(upos, n),
        "deprel_acc_strict": div(dep_s, attach),
        "deprel_acc_relaxed": div(dep_r, attach),
        "las_strict": div(las_s, attach),
        "las_relaxed": div(las_r, attach),
    }


def score_corpora(gold_sentences, pred_sentences, group_lists):
    gold_by_id = {s.sent_id: s for s in gold_sentences}
    pred_by_id = {s.sent_id: s for s in pred_sentences}
    assert sorted(gold_by_id) == sorted(pred_by_id)
    pairs = []
    for sent_id in gold_by_id:
        for g, p in zip(gold_by_id[sent_id].tokens, pred_by_id[sent_id].tokens):
            assert g.form == p.form
            pairs.append((g, p))
    return score_tokens(pairs, group_lists)


def confusion_counts(gold_sentences, pred_sentences):
    out = {}
    gold_by_id = {s.sent_id: s for s in gold_sentences}
    pred_by_id = {s.sent_id: s for s in pred_sentences}
    for sent_id in gold_by_id:
        for g, p in zip(gold_by_id[sent_id].tokens, pred_by_id[sent_id].tokens):
            if g.head_id is None:
                continue
            key = (g.deprel or "_", p.deprel or "_")
            out[key] = out.get(key, 0) + 1
    return out


# ---------------------------------------------------------------------------
# switch points

def switch_records(sentence):
    """(token_id, from_code, to_code, upos, deprel) per switch-in token."""
    out = []
    last = None
    for t in sentence.tokens:
        code = t.lang.code
        if code not in CONTENT:
            continue
        if last is not None and code != last:
            out.append((t.id, last, code, t.upos, t.deprel))
        last = code
    return out


def corpus_switch_records(sentences):
    out = []
    for s in sentences:
        for record in switch_records(s):
            out.append((s.sent_id,) + record)
    return out


def distribution(records, field_index, direction):
    """records from corpus_switch_records; field_index 4=upos, 5=deprel."""
    counts = {}
    for record in records:
        if direction is not None and (record[2], record[3]) != direction:
            continue
        value = record[field_index]
        if value is None:
            continue
        counts[value] = counts.get(value, 0) + 1
    return counts


def distribution_csv(counts):
    total = sum(counts.values())
    rows = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    lines = ["label,count,proportion"]
    for label, count in rows:
        lines.append(f"{label},{count},{count / total:.6f}")
    return "\n".join(lines) + "\n"


def has_emoji(text):
    if "️" in text:
        return True
    for ch in text:
        cp = ord(ch)
        if (0x1F300 <= cp <= 0x1F5FF or 0x1F600 <= cp <= 0x1F64F
                or 0x1F680 <= cp <= 0x1F6FF or 0x1F900 <= cp <= 0x1F9FF):
            return True
    return False


# ---------------------------------------------------------------------------
# tree checks

def reaches_root(sentence):
    """True when every annotated token walks up to head 0 without repeats."""
    heads = {t.id: t.head_id for t in sentence.tokens}
    for t in sentence.tokens:
        seen = set()
        node = t.id
        while True:
            if node in seen:
                return False
            seen.add(node)
            head = heads.get(node)
            if head is None:
                return False
            if head == 0:
                break
            if head not in heads:
                return False
            node = head
    return True


def children_of(sentence):
    out = {}
    for t in sentence.tokens:
        if t.head_id and t.head_id >= 1:
            out.setdefault(t.head_id, []).append(t.id)
    return out
