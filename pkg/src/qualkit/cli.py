"""Command-line driver: preprocess, freq, fit, metrics, graph, compare, serve.

Exit codes: 0 success, 1 usage error, 2 runtime error. The comparison
subcommand prints the fixed-width metric table with one column per method.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .artifacts import dump_json, metrics_payload, write_bytes_atomic, write_run_artifacts
from .corpus import (Corpus, ParserConfig, apply_stopwords, build_corpus,
                     corpus_to_dict, default_stopwords, filter_interviewer,
                     frequency_table, load_stopword_lemmas, tokenize_lemmatize)
from .embeddings import ProviderConfig, ProviderKind
from .errors import QualkitError
from .graph import export_graph_json
from .pipeline import METHODS, PipelineConfig, compare, run


def _collect_input_files(inputs: list[str]) -> list[Path]:
    files: list[Path] = []
    for item in inputs:
        path = Path(item)
        if path.is_dir():
            files.extend(sorted(p for p in path.iterdir()
                                if p.is_file() and p.suffix in (".txt", ".md", "")))
        elif path.is_file():
            files.append(path)
        else:
            raise FileNotFoundError(f"input not found: {item}")
    if not files:
        raise FileNotFoundError("no input files found")
    return files


def _load_corpus(args) -> Corpus:
    files = _collect_input_files(args.input)
    pairs = []
    seen: set[str] = set()
    for path in files:
        base = path.stem or "doc"
        doc_id = base
        suffix = 2
        while doc_id in seen:
            doc_id = f"{base}-{suffix}"
            suffix += 1
        seen.add(doc_id)
        pairs.append((doc_id, path.read_text("utf-8")))
    corpus = build_corpus(pairs, ParserConfig())
    corpus = filter_interviewer(corpus, keep=args.keep_interviewer)
    corpus = tokenize_lemmatize(corpus)
    extra = ()
    if args.stopwords:
        extra = load_stopword_lemmas(args.stopwords)
    corpus = apply_stopwords(corpus, default_stopwords(extra=extra))
    return corpus


def _provider_config(args) -> ProviderConfig:
    kind = ProviderKind(args.provider)
    return ProviderConfig(kind=kind, seed=args.seed,
                          endpoint=args.endpoint, path=args.vectors)


def _pipeline_config(args, method: str | None = None) -> PipelineConfig:
    return PipelineConfig(method=method or args.method, num_topics=args.topics,
                          seed=args.seed, provider=_provider_config(args))


def _add_common(parser: argparse.ArgumentParser, with_model_flags: bool = True) -> None:
    parser.add_argument("--input", nargs="+", required=True,
                        help="transcript files or a directory of them")
    parser.add_argument("--keep-interviewer", action="store_true",
                        help="keep interviewer turns instead of dropping them")
    parser.add_argument("--stopwords", metavar="FILE", default=None,
                        help="file of additional stop-word lemmas, one per line")
    parser.add_argument("--seed", type=int, default=0)
    if with_model_flags:
        parser.add_argument("--method", choices=METHODS, default="embed_hdbscan")
        parser.add_argument("--topics", type=int, default=10,
                            help="topic count target (K for lda/kmeans)")
        parser.add_argument("--provider", choices=["baseline", "file", "remote"],
                            default="baseline")
        parser.add_argument("--endpoint", default=None, help="remote embedding URL")
        parser.add_argument("--vectors", default=None,
                            help="embedding vectors file for --provider file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qualkit",
                                     description="topic modeling for interview transcripts")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="parse, lemmatize, and dump the corpus")
    _add_common(p, with_model_flags=False)
    p.add_argument("--out", metavar="DIR", default=None)
    p.add_argument("--limit", type=int, default=25, help="frequency rows to print")

    p = sub.add_parser("freq", help="print the lemma frequency table")
    _add_common(p, with_model_flags=False)
    p.add_argument("--limit", type=int, default=None)

    p = sub.add_parser("fit", help="run one method; write topics/metrics/graph JSON")
    _add_common(p)
    p.add_argument("--out", metavar="DIR", required=True)

    p = sub.add_parser("metrics", help="run one method; print the metric report")
    _add_common(p)

    p = sub.add_parser("graph", help="run one method; print or write the graph JSON")
    _add_common(p)
    p.add_argument("--out", metavar="DIR", default=None)

    p = sub.add_parser("compare", help="run all five methods; print the metric table")
    _add_common(p, with_model_flags=True)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--out", metavar="DIR", default="qualkit-data",
                   help="data directory for corpora, jobs, and model artifacts")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--workers", type=int, default=2, help="concurrent model jobs")
    return parser


def _cmd_preprocess(args) -> int:
    corpus = _load_corpus(args)
    table = frequency_table(corpus, limit=args.limit)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_bytes_atomic(out / "corpus.json", dump_json(corpus_to_dict(corpus)))
        write_bytes_atomic(out / "frequencies.json", dump_json(
            [{"lemma": l, "count": c} for l, c in frequency_table(corpus)]))
    print(f"documents: {len(corpus.documents)}  "
          f"modeled sentences: {len(corpus.modeled_sentences)}")
    for lemma, count in table:
        print(f"{count:6d}  {lemma}")
    return 0


def _cmd_freq(args) -> int:
    corpus = _load_corpus(args)
    for lemma, count in frequency_table(corpus, limit=args.limit):
        print(f"{count:6d}  {lemma}")
    return 0


def _cmd_fit(args) -> int:
    corpus = _load_corpus(args)
    outcome = run(_pipeline_config(args), corpus)
    paths = write_run_artifacts(outcome, args.out)
    for name, path in sorted(paths.items()):
        print(f"{name}: {path}")
    for warning in outcome.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def _cmd_metrics(args) -> int:
    corpus = _load_corpus(args)
    outcome = run(_pipeline_config(args), corpus)
    print(json.dumps(metrics_payload(outcome.metrics), indent=2))
    return 0


def _cmd_graph(args) -> int:
    corpus = _load_corpus(args)
    outcome = run(_pipeline_config(args), corpus)
    payload = export_graph_json(outcome.graph)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_bytes_atomic(out / "graph.json", payload)
        print(str(out / "graph.json"))
    else:
        sys.stdout.write(payload.decode("utf-8") + "\n")
    return 0


def _cmd_compare(args) -> int:
    corpus = _load_corpus(args)
    configs = [_pipeline_config(args, method=m) for m in METHODS]
    outcome = compare(configs, corpus)
    print(outcome.table)
    return 0


def _cmd_serve(args) -> int:
    from .service import serve
    serve(args.out, host=args.host, port=args.port, max_workers=args.workers)
    return 0


_COMMANDS = {
    "preprocess": _cmd_preprocess,
    "freq": _cmd_freq,
    "fit": _cmd_fit,
    "metrics": _cmd_metrics,
    "graph": _cmd_graph,
    "compare": _cmd_compare,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems and 0 on --help
        return 0 if exc.code in (0, None) else 1
    try:
        return _COMMANDS[args.command](args)
    except (QualkitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
