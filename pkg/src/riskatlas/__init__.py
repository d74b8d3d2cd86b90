"""riskatlas: mine diseases and diseases-at-risk from a document corpus.

The pipeline has four stages, each usable on its own:

- :mod:`riskatlas.taxonomy` parses a two-column classification export into
  an immutable tree with full ancestor paths and breadth-first ordering.
- :mod:`riskatlas.keywords` and :mod:`riskatlas.lexicon` build single-pass
  phrasal matchers from disease titles, synonyms, risk expressions, and
  topical filter expressions.
- :mod:`riskatlas.corpus` scans documents paragraph by paragraph and keeps
  an incrementally updatable repository of per-document extraction records.
- :mod:`riskatlas.indicators` computes branch shares, occurrence rollups,
  document frequencies, and the risk-vs-corpus gap ranking, which
  :mod:`riskatlas.service` exposes over HTTP for the dashboard.
"""

from .corpus import (
    DocExtraction,
    Document,
    DocumentParseError,
    IngestReport,
    Repository,
    UnknownFilterError,
    extract_document,
)
from .indicators import (
    EmptySubsetError,
    GapNormalization,
    IndicatorTable,
    Role,
    branch_occurrences,
    branch_share,
    build_indicator_table,
    doc_frequency,
    gap_ranking,
    occurrence_rollup,
)
from .keywords import EmptySurfaceError, KeywordProcessor, tokenize
from .lexicon import (
    ConfigParseError,
    EmptyLexiconError,
    LexiconConfig,
    ProcessorSet,
    ResultEmptyError,
    RewriteRule,
    build_disease_processor,
    build_filter_processors,
    build_processors,
    build_risk_processor,
    expand_synonyms,
    load_config,
    truncate_title,
)
from .taxonomy import (
    DuplicateCodeError,
    EmptyInputError,
    MalformedDepthError,
    RawRow,
    Taxonomy,
    TaxonomyNode,
    TreeSlice,
    UnknownNodeError,
    load_taxonomy,
    parse_taxonomy,
    read_classification_rows,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigParseError",
    "DocExtraction",
    "Document",
    "DocumentParseError",
    "DuplicateCodeError",
    "EmptyInputError",
    "EmptyLexiconError",
    "EmptySubsetError",
    "EmptySurfaceError",
    "GapNormalization",
    "IndicatorTable",
    "IngestReport",
    "KeywordProcessor",
    "LexiconConfig",
    "MalformedDepthError",
    "ProcessorSet",
    "RawRow",
    "Repository",
    "ResultEmptyError",
    "RewriteRule",
    "Role",
    "Taxonomy",
    "TaxonomyNode",
    "TreeSlice",
    "UnknownFilterError",
    "UnknownNodeError",
    "branch_occurrences",
    "branch_share",
    "build_disease_processor",
    "build_filter_processors",
    "build_indicator_table",
    "build_processors",
    "build_risk_processor",
    "doc_frequency",
    "expand_synonyms",
    "extract_document",
    "gap_ranking",
    "load_config",
    "load_taxonomy",
    "occurrence_rollup",
    "parse_taxonomy",
    "read_classification_rows",
    "tokenize",
    "truncate_title",
]
