"""Command-line entry points: ingest, serve, export, report, match.

`ingest` parses the classification, builds the processors from the config
directory, scans the corpus, and persists the repository (including the
parsed taxonomy, so later commands only need --repo). `serve` exposes the
HTTP API over a repository. `export` writes the chart data products as JSON
files. `report` prints the ingest counters. `match` is a debug helper that
prints keyword matches with token spans for a given text.

RISKATLAS_REPO and RISKATLAS_PORT provide defaults for --repo and --port.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import lexicon as lexicon_mod
from .corpus import TAXONOMY_FILE, Repository
from .indicators import Role
from .keywords import iter_match_lines
from .service import (
    DEFAULT_MAX_LEVELS,
    Generation,
    gap_payload,
    occurrences_payload,
    shares_payload,
)
from .taxonomy import load_taxonomy


def _env_default(name: str, fallback=None):
    return os.environ.get(name, fallback)


def _add_repo_arg(parser: argparse.ArgumentParser, required: bool = True) -> None:
    default = _env_default("RISKATLAS_REPO")
    parser.add_argument("--repo", default=default, required=required and default is None,
                        help="repository directory (env: RISKATLAS_REPO)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskatlas",
        description="Mine diseases and diseases-at-risk from a document corpus "
                    "and explore them along a disease classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="scan a corpus file into a repository")
    p_ingest.add_argument("--corpus", required=True, help="line-delimited corpus file")
    p_ingest.add_argument("--taxonomy", required=True, help="classification export file")
    p_ingest.add_argument("--config", required=True, help="config directory")
    _add_repo_arg(p_ingest)

    p_serve = sub.add_parser("serve", help="serve the HTTP API over a repository")
    _add_repo_arg(p_serve)
    p_serve.add_argument("--port", type=int,
                         default=int(_env_default("RISKATLAS_PORT", "8000")),
                         help="port to bind (env: RISKATLAS_PORT)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui", default=None,
                         help="directory of built dashboard assets to mount at /ui")

    p_export = sub.add_parser("export", help="write chart data products as JSON files")
    _add_repo_arg(p_export)
    p_export.add_argument("--out", required=True, help="output directory")
    p_export.add_argument("--branch", default=None, help="branch code or node id")
    p_export.add_argument("--sources", nargs="*", default=None)
    p_export.add_argument("--filter", dest="filter_name", default=None)
    p_export.add_argument("--max-levels", type=int, default=DEFAULT_MAX_LEVELS)
    p_export.add_argument("--k", type=int, default=20)

    p_report = sub.add_parser("report", help="print ingest counters")
    _add_repo_arg(p_report)

    p_match = sub.add_parser("match", help="print keyword matches for a text")
    p_match.add_argument("--taxonomy", required=True)
    p_match.add_argument("--config", required=True)
    p_match.add_argument("--text", required=True)
    p_match.add_argument("--processor", default="disease",
                         help="disease, risk, or filter:<name>")
    return parser


def cmd_ingest(args: argparse.Namespace) -> int:
    config = lexicon_mod.load_config(args.config)
    taxonomy = load_taxonomy(args.taxonomy, stop_title=config.stop_title,
                             discard_codes=config.discard_codes())
    processors = lexicon_mod.build_processors(taxonomy, config.lexicon)
    repo_dir = Path(args.repo)
    repo = Repository.load(repo_dir) if (repo_dir / corpus_mod.SNAPSHOT_FILE).exists() \
        else Repository()
    report = corpus_mod.ingest_corpus_file(
        repo, args.corpus, processors.disease, processors.risk, processors.filters)
    repo.save(repo_dir)
    taxonomy.save(repo_dir / TAXONOMY_FILE)
    print(f"processed {report.documents_processed} documents "
          f"({report.documents_with_code} with a disease, "
          f"{report.documents_with_risk_code} with a disease at risk)")
    for error in report.errors:
        print(f"skipped: {error}", file=sys.stderr)
    print(f"repository now holds {len(repo)} documents")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app_for_repo

    app = create_app_for_repo(args.repo)
    if args.ui:
        from fastapi.staticfiles import StaticFiles
        app.mount("/ui", StaticFiles(directory=args.ui, html=True), name="ui")
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    gen = Generation.load(args.repo)
    branch = None
    if args.branch is not None:
        if args.branch.lstrip("-").isdigit() and gen.taxonomy.has_node(int(args.branch)):
            branch = int(args.branch)
        else:
            branch = gen.taxonomy.resolve_code(args.branch)
    table = gen.indicator_table(args.sources, args.filter_name)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    products = {
        "shares.json": shares_payload(gen, table, branch, args.sources, args.filter_name),
        "occurrences_found.json": occurrences_payload(
            gen, table, branch, Role.FOUND, args.max_levels, args.sources, args.filter_name),
        "occurrences_at_risk.json": occurrences_payload(
            gen, table, branch, Role.AT_RISK, args.max_levels, args.sources, args.filter_name),
        "gap.json": gap_payload(gen, table, args.k, args.sources, args.filter_name),
    }
    for name, payload in products.items():
        path = out / name
        path.write_text(json.dumps(payload, ensure_ascii=False, sort_keys=True,
                                   indent=2) + "\n", encoding="utf-8")
        print(f"wrote {path}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    repo = Repository.load(args.repo)
    if not repo.ingest_log:
        print("no ingest batches recorded")
    for entry in repo.ingest_log:
        print(f"{entry.timestamp}  batch={entry.batch_size} "
              f"processed={entry.documents_processed} "
              f"with_code={entry.documents_with_code} "
              f"with_risk_code={entry.documents_with_risk_code} "
              f"errors={entry.error_count}")
    with_code = sum(1 for r in repo.records.values() if r.codes)
    with_risk = sum(1 for r in repo.records.values() if r.risk_codes)
    print(f"total documents={len(repo)} with_code={with_code} with_risk_code={with_risk}")
    return 0


def cmd_match(args: argparse.Namespace) -> int:
    config = lexicon_mod.load_config(args.config)
    taxonomy = load_taxonomy(args.taxonomy, stop_title=config.stop_title,
                             discard_codes=config.discard_codes())
    which = args.processor
    if which == "disease":
        kp = lexicon_mod.build_disease_processor(taxonomy, config.lexicon)
    elif which == "risk":
        kp = lexicon_mod.build_risk_processor(config.lexicon)
    elif which.startswith("filter:"):
        kp = lexicon_mod.build_filter_processor(config.lexicon, which.split(":", 1)[1])
    else:
        print(f"unknown processor {which!r}; use disease, risk, or filter:<name>",
              file=sys.stderr)
        return 2
    lines = list(iter_match_lines(kp, args.text))
    for line in lines:
        print(line)
    if not lines:
        print("(no matches)", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "ingest": cmd_ingest,
        "serve": cmd_serve,
        "export": cmd_export,
        "report": cmd_report,
        "match": cmd_match,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
