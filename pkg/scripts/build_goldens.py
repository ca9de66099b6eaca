#!/usr/bin/env python3
"""Regenerate the golden files under tests/fixtures/golden/.

Counts and scores are computed by the brute-force oracles in
tests/oracles.py; the script refuses to write a golden when the library
disagrees with the oracle, so a committed golden always reflects two
independent computations. pred_mini.bln is the frozen offline pipeline
output (the determinism reference for end-to-end runs).

Run from the repo root: python scripts/build_goldens.py
"""

import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

import oracles  # noqa: E402
from bln.cli import run  # noqa: E402
from bln.evaluate import EquivalenceGroups, corpus_report  # noqa: E402
from bln.ingest import filter_corpus  # noqa: E402
from bln.switchpoints import export_distributions  # noqa: E402
from bln.table import read_corpus  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"
GOLDEN = FIXTURES / "golden"


def group_lists():
    groups = EquivalenceGroups.default()
    return [set(labels) for _, labels in groups.groups]


def build_stats():
    for name in ("miami_mini.txt", "guaspa_mini.txt"):
        text = (FIXTURES / name).read_text(encoding="utf-8")
        stats = oracles.raw_stats(text)
        out = GOLDEN / f"{name.split('_')[0]}_stats.json"
        out.write_text(json.dumps(stats, indent=2, sort_keys=True) + "\n",
                       encoding="utf-8")
        print(f"{out.name}: {stats}")


def build_pipeline_outputs(workdir: Path):
    raw_bln = workdir / "miami_raw.bln"
    csw_bln = workdir / "miami_csw.bln"
    pred_bln = FIXTURES / "pred_mini.bln"
    assert run(["ingest", str(FIXTURES / "miami_mini.txt"), str(raw_bln),
                "--format", "miami"]) == 0
    assert run(["filter", str(raw_bln), "--csw", str(csw_bln)]) == 0
    assert run(["annotate", str(csw_bln), str(pred_bln),
                "--cache", str(FIXTURES / "cache.jsonl"), "--offline"]) == 0
    print(f"pred_mini.bln: {len(read_corpus(pred_bln))} sentences")
    return pred_bln


def build_eval_report(pred_bln: Path):
    gold = read_corpus(FIXTURES / "gold_mini.bln")
    pred = read_corpus(pred_bln)
    expected = oracles.score_corpora(gold.sentences, pred.sentences, group_lists())
    report = corpus_report(gold, pred).to_json()
    for key, value in expected.items():
        assert abs(report[key] - value) < 1e-12, (key, report[key], value)
    confusion = oracles.confusion_counts(gold.sentences, pred.sentences)
    flat = {f"{g}|{p}": n for (g, p), n in confusion.items()}
    lib_flat = {f"{g}|{p}": n
                for g, preds in report["per_label_confusion"].items()
                for p, n in preds.items()}
    assert flat == lib_flat
    out = GOLDEN / "eval_report.json"
    out.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                   encoding="utf-8")
    print(f"eval_report.json: las_strict={report['las_strict']:.4f} "
          f"las_relaxed={report['las_relaxed']:.4f}")


def oracle_export(sentences, out_dir: Path):
    """Independent re-computation of the distribution CSVs and summary."""
    emoji = [s for s in sentences if any(oracles.has_emoji(t.form) for t in s.tokens)]
    plain = [s for s in sentences if s not in emoji]
    subsets = {"all": sentences, "emoji": emoji, "noemoji": plain}
    directions = [("en", "es"), ("es", "en"), None]
    summary = {}
    for subset_name, subset in subsets.items():
        records = oracles.corpus_switch_records(subset)
        for field_name, field_index in (("upos", 4), ("deprel", 5)):
            for direction in directions:
                counts = oracles.distribution(records, field_index, direction)
                direction_name = "pooled" if direction is None else "-".join(direction)
                path = out_dir / f"{field_name}_{direction_name}_{subset_name}.csv"
                path.write_text(oracles.distribution_csv(counts), encoding="utf-8")
                total = sum(counts.values())
                summary[f"{field_name}|{direction_name}|{subset_name}"] = {
                    "total": total,
                    "labels": [
                        {"label": label, "count": count, "proportion": count / total}
                        for label, count in sorted(counts.items(),
                                                   key=lambda kv: (-kv[1], kv[0]))
                    ],
                }
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def build_distributions(pred_bln: Path, workdir: Path):
    pred = read_corpus(pred_bln)
    _, analysis, _ = filter_corpus(pred)

    dist_dir = GOLDEN / "dist"
    dist_dir.mkdir(parents=True, exist_ok=True)
    for old in dist_dir.iterdir():
        old.unlink()
    oracle_export(list(analysis.sentences), dist_dir)

    lib_dir = workdir / "dist"
    export_distributions(analysis, lib_dir)
    golden_files = sorted(p.name for p in dist_dir.iterdir())
    lib_files = sorted(p.name for p in lib_dir.iterdir())
    assert golden_files == lib_files, (golden_files, lib_files)
    for name in golden_files:
        golden_bytes = (dist_dir / name).read_bytes()
        lib_bytes = (lib_dir / name).read_bytes()
        assert golden_bytes == lib_bytes, f"library disagrees with oracle on {name}"
    print(f"dist/: {len(golden_files)} files (library matches oracle byte-for-byte)")


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        workdir = Path(tmp)
        build_stats()
        pred_bln = build_pipeline_outputs(workdir)
        build_eval_report(pred_bln)
        build_distributions(pred_bln, workdir)


if __name__ == "__main__":
    main()
