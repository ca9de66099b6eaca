"""bln command line: ingest, filter, annotate, validate, evaluate, analyze,
serve, export-conllu.

Exit codes: 0 success; 1 the validate subcommand found violations; 2 hard
errors (bad input files, alignment failures, service errors); 64 usage
errors. All file outputs are deterministic functions of their inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import ingest as ingest_mod
from .annotate import (AnnotationFailed, ChatClient, LlmConfig, ResponseCache,
                       ServiceError, annotate_corpus)
from .evaluate import AlignmentError, EquivalenceGroups, corpus_report
from .ingest import filter_corpus, flag_spec, read_raw_file, write_stats
from .review import ReviewStore
from .switchpoints import MODE_CONTENT, MODE_PREVIOUS, export_distributions, split_by_emoji
from .table import (Corpus, TableParseError, corpus_to_conllu, read_corpus,
                    write_corpus)
from .validation import validate

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_ERROR = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="bln", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="raw tagged corpus -> .bln tables")
    p.add_argument("input", help="raw corpus file")
    p.add_argument("output", help=".bln output path")
    p.add_argument("--format", required=True, choices=["miami", "guaspa"])
    p.add_argument("--stats", help="write a JSON stats sidecar here")

    p = sub.add_parser("filter", help="keep code-switched sentences")
    p.add_argument("input", help=".bln corpus")
    p.add_argument("--csw", help="output path for the CSW subset")
    p.add_argument("--analysis", help="output path for the >=3-token CSW subset")
    p.add_argument("--stats", help="write a JSON stats sidecar here")

    p = sub.add_parser("annotate", help="LLM-annotate a corpus (cache-first)")
    p.add_argument("input", help=".bln corpus (UD fields may be unset)")
    p.add_argument("output", help=".bln output path")
    p.add_argument("--cache", required=True, help="JSON-lines response cache")
    p.add_argument("--offline", action="store_true",
                   help="never open a connection; cache misses are errors")
    p.add_argument("--config", help="LLM config file (key = value)")
    p.add_argument("--prompts", help="directory overriding the built-in prompts")
    p.add_argument("--jobs", type=int, default=1, help="worker pool size")

    p = sub.add_parser("validate", help="report structural violations")
    p.add_argument("input", help=".bln corpus")

    p = sub.add_parser("evaluate", help="score predictions against a reference")
    p.add_argument("--gold", required=True, help="reference .bln corpus")
    p.add_argument("--pred", required=True, help="predicted .bln corpus")
    p.add_argument("--groups", help="equivalence groups JSON (default: built-in)")
    p.add_argument("--out", help="write the report JSON here (default: stdout)")

    p = sub.add_parser("analyze", help="switch-point distributions -> CSV")
    p.add_argument("input", help=".bln corpus (annotated)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--mode", choices=[MODE_CONTENT, MODE_PREVIOUS],
                   default=MODE_CONTENT)
    p.add_argument("--csw-only", action="store_true",
                   help="restrict to code-switched sentences")
    p.add_argument("--analysis-only", action="store_true",
                   help="restrict to code-switched sentences with >=3 tokens")
    p.add_argument("--emoji-only", action="store_true")
    p.add_argument("--no-emoji-only", action="store_true")

    p = sub.add_parser("serve", help="run the review service")
    p.add_argument("--config", help="server config file (key = value)")
    p.add_argument("--store", help="event-log path (overrides config)")
    p.add_argument("--listen", help="host:port (overrides config)")
    p.add_argument("--groups", help="equivalence groups JSON")
    p.add_argument("--ui", help="directory with the built review UI")
    p.add_argument("--machine", action="append", default=[], metavar="ID=PATH",
                   help="load a machine-annotated corpus (repeatable)")
    p.add_argument("--gold", action="append", default=[], metavar="ID=PATH",
                   help="load a gold reference corpus (repeatable)")

    p = sub.add_parser("export-conllu", help="write standard 10-column CoNLL-U")
    p.add_argument("input", help=".bln corpus")
    p.add_argument("output", help=".conllu output path")

    return parser


def _subset(corpus: Corpus, args) -> Corpus:
    chosen = [name for name, on in [
        ("--csw-only", args.csw_only), ("--analysis-only", args.analysis_only),
        ("--emoji-only", args.emoji_only), ("--no-emoji-only", args.no_emoji_only),
    ] if on]
    if len(chosen) > 1:
        raise UsageError(f"subset flags are mutually exclusive, got {' '.join(chosen)}")
    if args.csw_only:
        return filter_corpus(corpus)[0]
    if args.analysis_only:
        return filter_corpus(corpus)[1]
    if args.emoji_only:
        return split_by_emoji(corpus)[0]
    if args.no_emoji_only:
        return split_by_emoji(corpus)[1]
    return corpus


class UsageError(Exception):
    pass


def _cmd_ingest(args) -> int:
    corpus = read_raw_file(args.input, args.format)
    write_corpus(corpus, args.output)
    _, _, stats = filter_corpus(corpus)
    if args.stats:
        write_stats(stats, args.stats)
    print(f"ingested {stats.n_sentences} sentences "
          f"({stats.n_tokens} tokens) -> {args.output}")
    return EXIT_OK


def _cmd_filter(args) -> int:
    corpus = read_corpus(args.input)
    csw, analysis, stats = filter_corpus(corpus)
    if args.csw:
        write_corpus(csw, args.csw)
    if args.analysis:
        write_corpus(analysis, args.analysis)
    if args.stats:
        write_stats(stats, args.stats)
    print(json.dumps(stats.to_json(), sort_keys=True))
    return EXIT_OK


def _cmd_annotate(args) -> int:
    corpus = read_corpus(args.input)
    cfg = LlmConfig.load(args.config) if args.config else LlmConfig()
    cache = ResponseCache(args.cache)
    client = None if args.offline else ChatClient()
    results = annotate_corpus(corpus.sentences, cfg, cache, client,
                              prompt_dir=args.prompts, jobs=args.jobs)
    annotated = []
    n_violations = 0
    for sentence, violations, attempts in results:
        n_violations += len(violations)
        annotated.append(replace(sentence, spec=flag_spec(sentence)))
    write_corpus(Corpus(tuple(annotated), name=corpus.name, subset=corpus.subset),
                 args.output)
    print(f"annotated {len(annotated)} sentences -> {args.output} "
          f"({n_violations} residual violations)")
    return EXIT_OK


def _cmd_validate(args) -> int:
    corpus = read_corpus(args.input)
    total = 0
    for sentence in corpus.sentences:
        for v in validate(sentence):
            total += 1
            where = f"{sentence.sent_id or '<sentence>'}"
            token = f" token {v.token_id}" if v.token_id is not None else ""
            print(f"{where}{token}: {v.code}: {v.message}")
    print(f"{total} violation(s) in {len(corpus)} sentence(s)")
    return EXIT_VIOLATIONS if total else EXIT_OK


def _cmd_evaluate(args) -> int:
    gold = read_corpus(args.gold)
    pred = read_corpus(args.pred)
    groups = EquivalenceGroups.load(args.groups) if args.groups else None
    report = corpus_report(gold, pred, groups)
    text = json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    corpus = _subset(read_corpus(args.input), args)
    written = export_distributions(corpus, args.out_dir, mode=args.mode)
    print(f"wrote {len(written)} files to {args.out_dir}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    from .server import ServerConfig, create_app
    import uvicorn

    cfg = ServerConfig.load(args.config)
    if args.listen:
        cfg.host, _, port = args.listen.partition(":")
        if port:
            cfg.port = int(port)
    if args.store:
        cfg.store_path = args.store
    if args.groups:
        cfg.groups_path = args.groups
    if args.ui:
        cfg.ui_dir = args.ui
    groups = EquivalenceGroups.load(cfg.groups_path) if cfg.groups_path else None
    store = ReviewStore(cfg.store_path, groups=groups)
    for role, specs in (("machine", args.machine), ("gold", args.gold)):
        for spec in specs:
            corpus_id, sep, path = spec.partition("=")
            if not sep:
                raise UsageError(f"--{role} takes ID=PATH, got {spec!r}")
            if role == "machine" and corpus_id in store.machine:
                continue  # already in the event log
            store.load_corpus(corpus_id, read_corpus(path), role=role)
    app = create_app(store, ui_dir=cfg.ui_dir)
    print(f"serving on http://{cfg.host}:{cfg.port}")
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")
    return EXIT_OK


def _cmd_export_conllu(args) -> int:
    corpus = read_corpus(args.input)
    Path(args.output).write_text(corpus_to_conllu(corpus), encoding="utf-8")
    print(f"wrote {len(corpus)} sentences -> {args.output}")
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "filter": _cmd_filter,
    "annotate": _cmd_annotate,
    "validate": _cmd_validate,
    "evaluate": _cmd_evaluate,
    "analyze": _cmd_analyze,
    "serve": _cmd_serve,
    "export-conllu": _cmd_export_conllu,
}


def run(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"bln {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TableParseError, ingest_mod.IngestError, AlignmentError,
            ServiceError, AnnotationFailed, OSError, ValueError, KeyError) as exc:
        print(f"bln {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main(argv=None) -> None:
    raise SystemExit(run(argv))


if __name__ == "__main__":
    main()
