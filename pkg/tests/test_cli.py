import json

import pytest

from bln.cli import EXIT_ERROR, EXIT_OK, EXIT_USAGE, EXIT_VIOLATIONS, run


def test_usage_errors_exit_64(capsys):
    with pytest.raises(SystemExit) as exc_info:
        run(["filter"])  # missing input
    assert exc_info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc_info:
        run(["ingest", "in", "out", "--format", "bogus"])
    assert exc_info.value.code == EXIT_USAGE
    assert "--format" in capsys.readouterr().err


def test_missing_file_exits_2(tmp_path, capsys):
    assert run(["validate", str(tmp_path / "nope.bln")]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_ingest_writes_bln_and_stats(fixtures, golden, tmp_path):
    out = tmp_path / "miami.bln"
    stats = tmp_path / "stats.json"
    code = run(["ingest", str(fixtures / "miami_mini.txt"), str(out),
                "--format", "miami", "--stats", str(stats)])
    assert code == EXIT_OK
    assert json.loads(stats.read_text()) == json.loads(
        (golden / "miami_stats.json").read_text())
    assert out.read_text().count("# sent_id") == 20


def test_ingest_guaspa_stats(fixtures, golden, tmp_path):
    stats = tmp_path / "stats.json"
    run(["ingest", str(fixtures / "guaspa_mini.txt"), str(tmp_path / "g.bln"),
         "--format", "guaspa", "--stats", str(stats)])
    assert json.loads(stats.read_text()) == json.loads(
        (golden / "guaspa_stats.json").read_text())


def test_filter_outputs(fixtures, tmp_path, capsys):
    raw = tmp_path / "raw.bln"
    run(["ingest", str(fixtures / "miami_mini.txt"), str(raw), "--format", "miami"])
    capsys.readouterr()
    csw = tmp_path / "csw.bln"
    analysis = tmp_path / "analysis.bln"
    code = run(["filter", str(raw), "--csw", str(csw),
                "--analysis", str(analysis)])
    assert code == EXIT_OK
    printed = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert printed == {"sentences": 20, "tokens": 102, "csw": 10, "analysis": 9}
    assert csw.read_text().count("# sent_id") == 10
    assert analysis.read_text().count("# sent_id") == 9


def test_annotate_offline_byte_identical(fixtures, tmp_path):
    raw = tmp_path / "raw.bln"
    csw = tmp_path / "csw.bln"
    run(["ingest", str(fixtures / "miami_mini.txt"), str(raw), "--format", "miami"])
    run(["filter", str(raw), "--csw", str(csw)])
    out1 = tmp_path / "out1.bln"
    out2 = tmp_path / "out2.bln"
    for out in (out1, out2):
        code = run(["annotate", str(csw), str(out),
                    "--cache", str(fixtures / "cache.jsonl"), "--offline"])
        assert code == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()
    assert out1.read_bytes() == (fixtures / "pred_mini.bln").read_bytes()


def test_annotate_offline_cache_miss_fails(fixtures, tmp_path, capsys):
    raw = tmp_path / "raw.bln"
    run(["ingest", str(fixtures / "guaspa_mini.txt"), str(raw), "--format", "guaspa"])
    code = run(["annotate", str(raw), str(tmp_path / "out.bln"),
                "--cache", str(fixtures / "cache.jsonl"), "--offline"])
    assert code == EXIT_ERROR
    assert "offline" in capsys.readouterr().err


def test_validate_exit_codes(fixtures, tmp_path):
    assert run(["validate", str(fixtures / "table7.bln")]) == EXIT_OK
    assert run(["validate", str(fixtures / "table3.bln")]) == EXIT_VIOLATIONS


def test_validate_prints_violations(fixtures, capsys):
    run(["validate", str(fixtures / "table3.bln")])
    out = capsys.readouterr().out
    assert "table3 token 4: HEAD_FORM_MISMATCH" in out
    assert "1 violation(s)" in out


def test_evaluate_self_comparison_all_ones(fixtures, tmp_path, capsys):
    code = run(["evaluate", "--gold", str(fixtures / "gold_mini.bln"),
                "--pred", str(fixtures / "gold_mini.bln")])
    assert code == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["upos_acc"] == 1.0
    assert report["las_strict"] == 1.0
    assert report["las_relaxed"] == 1.0


def test_evaluate_matches_golden_report(fixtures, golden, tmp_path):
    out = tmp_path / "report.json"
    code = run(["evaluate", "--gold", str(fixtures / "gold_mini.bln"),
                "--pred", str(fixtures / "pred_mini.bln"), "--out", str(out)])
    assert code == EXIT_OK
    assert out.read_bytes() == (golden / "eval_report.json").read_bytes()


def test_analyze_golden(fixtures, golden, tmp_path):
    out_dir = tmp_path / "dist"
    code = run(["analyze", str(fixtures / "pred_mini.bln"),
                "--out-dir", str(out_dir), "--analysis-only"])
    assert code == EXIT_OK
    golden_dir = golden / "dist"
    assert sorted(p.name for p in out_dir.iterdir()) == sorted(
        p.name for p in golden_dir.iterdir())
    for path in out_dir.iterdir():
        assert path.read_bytes() == (golden_dir / path.name).read_bytes()


def test_analyze_subset_flags_mutually_exclusive(fixtures, tmp_path, capsys):
    code = run(["analyze", str(fixtures / "pred_mini.bln"),
                "--out-dir", str(tmp_path / "x"),
                "--csw-only", "--emoji-only"])
    assert code == EXIT_USAGE
    assert "mutually exclusive" in capsys.readouterr().err


def test_analyze_emoji_subsets(fixtures, tmp_path):
    raw = tmp_path / "g.bln"
    run(["ingest", str(fixtures / "guaspa_mini.txt"), str(raw), "--format", "guaspa"])
    assert run(["analyze", str(raw), "--out-dir", str(tmp_path / "e"),
                "--emoji-only"]) == EXIT_OK
    assert run(["analyze", str(raw), "--out-dir", str(tmp_path / "n"),
                "--no-emoji-only"]) == EXIT_OK


def test_export_conllu(fixtures, tmp_path):
    out = tmp_path / "mini.conllu"
    code = run(["export-conllu", str(fixtures / "pred_mini.bln"), str(out)])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    rows = [l for l in lines if l and not l.startswith("#")]
    assert all(len(r.split("\t")) == 10 for r in rows)
    assert any(r.split("\t")[9] == "Lang=es" for r in rows)
    blocks = out.read_text().strip().split("\n\n")
    assert len(blocks) == 10


def test_serve_wires_store_and_corpora(fixtures, tmp_path, monkeypatch):
    captured = {}

    def fake_run(app, host, port, log_level):
        captured.update(app=app, host=host, port=port)

    import uvicorn
    monkeypatch.setattr(uvicorn, "run", fake_run)
    store_path = tmp_path / "store.jsonl"
    code = run(["serve", "--store", str(store_path), "--listen", "127.0.0.1:9999",
                "--machine", f"mini={fixtures / 'pred_mini.bln'}",
                "--gold", f"mini={fixtures / 'gold_mini.bln'}"])
    assert code == EXIT_OK
    assert (captured["host"], captured["port"]) == ("127.0.0.1", 9999)
    assert store_path.exists()
    # a second boot replays the log instead of re-loading
    code = run(["serve", "--store", str(store_path), "--listen", "127.0.0.1:9999",
                "--machine", f"mini={fixtures / 'pred_mini.bln'}"])
    assert code == EXIT_OK


def test_serve_bad_corpus_spec_is_usage_error(tmp_path, capsys):
    code = run(["serve", "--store", str(tmp_path / "s.jsonl"),
                "--machine", "no-equals-sign"])
    assert code == EXIT_USAGE
    assert "ID=PATH" in capsys.readouterr().err
