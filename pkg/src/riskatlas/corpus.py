"""Corpus ingestion: per-document extraction records and their persistence.

Each document is scanned paragraph by paragraph (the title counts as one
paragraph) with the frozen processors. The record kept per document is
deliberately small: the disease codes mentioned anywhere in the document,
the subset of those codes that co-occur with a risk expression inside at
least one paragraph, and one boolean per topical filter. Records are keyed
by (source, doc_id); re-ingesting a document replaces its record, which is
what makes incremental updates equivalent to a full rebuild.

Persistence is a line-delimited snapshot with deterministic ordering and
serialization, so equal repository states produce byte-identical files,
plus an append-only ingest log for operational counters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .keywords import KeywordProcessor

SNAPSHOT_FILE = "snapshot.jsonl"
TITLES_FILE = "titles.jsonl"
LOG_FILE = "ingest_log.jsonl"
TAXONOMY_FILE = "taxonomy.json"

DOCUMENT_FIELDS = ("source", "doc_id", "title", "abstract", "body")


class DocumentParseError(ValueError):
    """A corpus record is malformed; collected per document, never fatal."""


class UnknownFilterError(KeyError):
    """The requested filter name was not configured at ingest time."""


@dataclass(frozen=True)
class Document:
    """One corpus document, already split into paragraphs."""

    source: str
    doc_id: str
    title: str
    abstract: tuple[str, ...] = ()
    body: tuple[str, ...] = ()

    @classmethod
    def from_record(cls, record: Mapping, where: str = "record") -> "Document":
        """Validate a JSON-shaped record; raises :class:`DocumentParseError`."""
        if not isinstance(record, Mapping):
            raise DocumentParseError(f"{where}: not an object")
        missing = [f for f in DOCUMENT_FIELDS if f not in record]
        if missing:
            raise DocumentParseError(f"{where}: missing fields {missing}")
        extra = [f for f in record if f not in DOCUMENT_FIELDS]
        if extra:
            raise DocumentParseError(f"{where}: unexpected fields {extra}")
        source, doc_id, title = record["source"], record["doc_id"], record["title"]
        if not isinstance(source, str) or not source:
            raise DocumentParseError(f"{where}: source must be a non-empty string")
        if not isinstance(doc_id, str) or not doc_id:
            raise DocumentParseError(f"{where}: doc_id must be a non-empty string")
        if not isinstance(title, str):
            raise DocumentParseError(f"{where}: title must be a string")
        paragraphs = {}
        for fieldname in ("abstract", "body"):
            value = record[fieldname]
            if not isinstance(value, list) or any(not isinstance(p, str) for p in value):
                raise DocumentParseError(f"{where}: {fieldname} must be a list of strings")
            paragraphs[fieldname] = tuple(value)
        return cls(source=source, doc_id=doc_id, title=title,
                   abstract=paragraphs["abstract"], body=paragraphs["body"])

    def paragraphs(self) -> list[str]:
        return [self.title, *self.abstract, *self.body]


@dataclass(frozen=True)
class DocExtraction:
    """What the processors found in one document."""

    source: str
    doc_id: str
    codes: frozenset[str]
    risk_codes: frozenset[str]
    filter_flags: Mapping[str, bool]

    def key(self) -> tuple[str, str]:
        return (self.source, self.doc_id)


@dataclass(frozen=True)
class IngestReport:
    """Counters for one ingest batch."""

    documents_processed: int
    documents_with_code: int
    documents_with_risk_code: int
    errors: tuple[str, ...] = ()


@dataclass(frozen=True)
class IngestLogEntry:
    timestamp: str
    batch_size: int
    documents_processed: int
    documents_with_code: int
    documents_with_risk_code: int
    error_count: int


def extract_document(
    doc: Document,
    disease_kp: KeywordProcessor,
    risk_kp: KeywordProcessor,
    filter_kps: Mapping[str, KeywordProcessor],
) -> DocExtraction:
    """Scan one document at paragraph granularity.

    A disease enters ``risk_codes`` only when some single paragraph contains
    both the disease mention and a risk expression; ``codes`` is the union
    over all paragraphs, so ``risk_codes`` is always a subset of ``codes``.
    """
    codes: set[str] = set()
    risk_codes: set[str] = set()
    flags = {name: False for name in filter_kps}
    for paragraph in doc.paragraphs():
        found = {key for key, _, _ in disease_kp.extract_keys(paragraph)}
        if found:
            codes |= found
            if risk_kp.contains_any(paragraph):
                risk_codes |= found
        for name, kp in filter_kps.items():
            if not flags[name] and kp.contains_any(paragraph):
                flags[name] = True
    return DocExtraction(
        source=doc.source,
        doc_id=doc.doc_id,
        codes=frozenset(codes),
        risk_codes=frozenset(risk_codes),
        filter_flags=flags,
    )


class Repository:
    """Persisted collection of extraction records with incremental merge.

    Mutation (ingest) must be serialized through a single writer; reads of a
    saved snapshot are safe from any number of processes.
    """

    def __init__(self) -> None:
        self.records: dict[tuple[str, str], DocExtraction] = {}
        self.titles: dict[tuple[str, str], str] = {}
        self.ingest_log: list[IngestLogEntry] = []

    def __len__(self) -> int:
        return len(self.records)

    def known_filters(self) -> frozenset[str]:
        names: set[str] = set()
        for record in self.records.values():
            names.update(record.filter_flags)
        return frozenset(names)

    def ingest_batch(
        self,
        docs: Iterable[Document | Mapping],
        disease_kp: KeywordProcessor,
        risk_kp: KeywordProcessor,
        filter_kps: Mapping[str, KeywordProcessor],
        _now: datetime | None = None,
    ) -> IngestReport:
        """Extract and merge a batch; per-document failures are collected.

        Raw mapping records are validated here, so a malformed document is
        reported in the ingest errors instead of aborting the batch.
        """
        processed = with_code = with_risk = 0
        batch_size = 0
        errors: list[str] = []
        for position, item in enumerate(docs):
            batch_size += 1
            try:
                doc = item if isinstance(item, Document) \
                    else Document.from_record(item, where=f"document {position}")
                extraction = extract_document(doc, disease_kp, risk_kp, filter_kps)
            except DocumentParseError as exc:
                errors.append(str(exc))
                continue
            self.records[extraction.key()] = extraction
            self.titles[extraction.key()] = doc.title
            processed += 1
            if extraction.codes:
                with_code += 1
            if extraction.risk_codes:
                with_risk += 1
        report = IngestReport(
            documents_processed=processed,
            documents_with_code=with_code,
            documents_with_risk_code=with_risk,
            errors=tuple(errors),
        )
        stamp = (_now or datetime.now(timezone.utc)).isoformat()
        self.ingest_log.append(IngestLogEntry(
            timestamp=stamp,
            batch_size=batch_size,
            documents_processed=processed,
            documents_with_code=with_code,
            documents_with_risk_code=with_risk,
            error_count=len(errors),
        ))
        return report

    def select_subset(
        self,
        sources: Iterable[str] | None = None,
        filter_name: str | None = None,
    ) -> frozenset[tuple[str, str]]:
        """Document keys matching all given constraints (all records if none)."""
        if filter_name is not None and filter_name not in self.known_filters():
            raise UnknownFilterError(filter_name)
        wanted = frozenset(sources) if sources is not None else None
        selected = []
        for key, record in self.records.items():
            if wanted is not None and record.source not in wanted:
                continue
            if filter_name is not None and not record.filter_flags.get(filter_name):
                continue
            selected.append(key)
        return frozenset(selected)

    # -- persistence ----------------------------------------------------

    def save(self, repo_dir: str | Path) -> None:
        """Write the snapshot, title index, and ingest log.

        Snapshot and titles are fully rewritten with deterministic ordering
        and serialization; the log is append-only in spirit but rewritten
        from memory here, one line per recorded batch.
        """
        repo_dir = Path(repo_dir)
        repo_dir.mkdir(parents=True, exist_ok=True)
        with open(repo_dir / SNAPSHOT_FILE, "w", encoding="utf-8") as fh:
            for key in sorted(self.records):
                record = self.records[key]
                fh.write(_dump_record(record) + "\n")
        with open(repo_dir / TITLES_FILE, "w", encoding="utf-8") as fh:
            for key in sorted(self.titles):
                source, doc_id = key
                fh.write(_dump_json({"source": source, "doc_id": doc_id,
                                     "title": self.titles[key]}) + "\n")
        with open(repo_dir / LOG_FILE, "w", encoding="utf-8") as fh:
            for entry in self.ingest_log:
                fh.write(_dump_json(vars(entry)) + "\n")

    @classmethod
    def load(cls, repo_dir: str | Path) -> "Repository":
        repo_dir = Path(repo_dir)
        repo = cls()
        snapshot = repo_dir / SNAPSHOT_FILE
        if snapshot.exists():
            with open(snapshot, encoding="utf-8") as fh:
                for line in fh:
                    record = _load_record(line)
                    repo.records[record.key()] = record
        titles = repo_dir / TITLES_FILE
        if titles.exists():
            with open(titles, encoding="utf-8") as fh:
                for line in fh:
                    entry = json.loads(line)
                    repo.titles[(entry["source"], entry["doc_id"])] = entry["title"]
        log = repo_dir / LOG_FILE
        if log.exists():
            with open(log, encoding="utf-8") as fh:
                for line in fh:
                    repo.ingest_log.append(IngestLogEntry(**json.loads(line)))
        return repo


def _dump_json(payload: Mapping) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True,
                      separators=(",", ":"))


def _dump_record(record: DocExtraction) -> str:
    return _dump_json({
        "source": record.source,
        "doc_id": record.doc_id,
        "codes": sorted(record.codes),
        "risk_codes": sorted(record.risk_codes),
        "filter_flags": dict(sorted(record.filter_flags.items())),
    })


def _load_record(line: str) -> DocExtraction:
    entry = json.loads(line)
    return DocExtraction(
        source=entry["source"],
        doc_id=entry["doc_id"],
        codes=frozenset(entry["codes"]),
        risk_codes=frozenset(entry["risk_codes"]),
        filter_flags=entry["filter_flags"],
    )


def iter_corpus_file(path: str | Path) -> Iterable[Mapping | DocumentParseError]:
    """Yield raw records from a line-delimited corpus file.

    Malformed JSON lines yield a :class:`DocumentParseError` instead of a
    record, so callers can collect failures without aborting the stream.
    """
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                yield DocumentParseError(f"{path}:{lineno}: invalid JSON ({exc.msg})")


def ingest_corpus_file(
    repo: Repository,
    path: str | Path,
    disease_kp: KeywordProcessor,
    risk_kp: KeywordProcessor,
    filter_kps: Mapping[str, KeywordProcessor],
) -> IngestReport:
    """Ingest every record of a corpus file as one batch."""
    parse_errors: list[str] = []
    records: list[Mapping] = []
    for item in iter_corpus_file(path):
        if isinstance(item, DocumentParseError):
            parse_errors.append(str(item))
        else:
            records.append(item)
    report = repo.ingest_batch(records, disease_kp, risk_kp, filter_kps)
    if parse_errors:
        report = IngestReport(
            documents_processed=report.documents_processed,
            documents_with_code=report.documents_with_code,
            documents_with_risk_code=report.documents_with_risk_code,
            errors=tuple(parse_errors) + report.errors,
        )
    return report


def write_corpus_file(path: str | Path, docs: Sequence[Document]) -> None:
    """Write documents in the canonical line-delimited corpus format."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(_dump_json({
                "source": doc.source,
                "doc_id": doc.doc_id,
                "title": doc.title,
                "abstract": list(doc.abstract),
                "body": list(doc.body),
            }) + "\n")
