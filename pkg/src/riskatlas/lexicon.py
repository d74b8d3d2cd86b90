"""Build the three keyword processors from the taxonomy and config files.

The disease processor is fed from catalog disease titles after two
preprocessing steps that adapt official nomenclature to how literature
actually writes: comma truncation ("Coronavirus infection, unspecified site"
keeps only "Coronavirus infection") and rule-driven synonym expansion
("carcinoma of breast" also enters as "breast cancer"). File-provided
synonyms are added on top, keyed by the disease code. The risk and filter
processors are flat expression lists with a single payload key each.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .keywords import KeywordProcessor, normalize_surface, tokenize
from .taxonomy import Taxonomy

logger = logging.getLogger(__name__)

RISK_KEY = "RISK"

# Placeholder token in rule files; internally swapped for a marker that can
# never collide with a real lowercase token.
PLACEHOLDER = "X"
_SLOT = "\x00"


class ConfigParseError(ValueError):
    """A config or lexicon file is malformed."""


class EmptyLexiconError(ValueError):
    """A processor would be built with no surface expressions at all."""


class ResultEmptyError(ValueError):
    """Comma truncation would leave an empty title."""


@dataclass(frozen=True)
class RewriteRule:
    """One title rewrite: a token pattern and its replacement.

    Both sides are lowercase token tuples; the slot marker (at most one per
    side) binds a non-empty run of title tokens.
    """

    pattern: tuple[str, ...]
    replacement: tuple[str, ...]


@dataclass
class LexiconConfig:
    """Paths to the lexicon inputs; None falls back to packaged defaults."""

    synonym_file: Path | None = None
    risk_expressions_file: Path | None = None
    filter_files: dict[str, Path] = field(default_factory=dict)
    rewrite_rules_file: Path | None = None
    discard_file: Path | None = None


@dataclass
class EngineConfig:
    """Full engine configuration: taxonomy boundaries plus lexicon inputs."""

    stop_title: str | None = None
    discard_codes_file: Path | None = None
    lexicon: LexiconConfig = field(default_factory=LexiconConfig)

    def discard_codes(self) -> frozenset[str]:
        if self.discard_codes_file is None:
            return frozenset()
        return frozenset(read_expression_file(self.discard_codes_file))


def truncate_title(title: str) -> str:
    """Keep the part of a title before its first comma.

    Titles without a comma are returned unchanged. A comma whose left side
    is empty raises :class:`ResultEmptyError`.
    """
    if not title:
        raise ValueError("title must be non-empty")
    head, sep, _ = title.partition(",")
    if not sep:
        return title
    head = head.strip()
    if not head:
        raise ResultEmptyError(f"truncating {title!r} leaves an empty title")
    return head


def _parse_rule_side(text: str, where: str) -> tuple[str, ...]:
    tokens = []
    slots = 0
    for raw in text.split():
        if raw == PLACEHOLDER:
            tokens.append(_SLOT)
            slots += 1
        else:
            tokens.extend(tokenize(raw))
    if slots > 1:
        raise ConfigParseError(f"{where}: more than one {PLACEHOLDER} placeholder")
    if not tokens:
        raise ConfigParseError(f"{where}: empty rule side")
    return tuple(tokens)


def read_rules_file(path: str | Path) -> list[RewriteRule]:
    """Parse a rules file: "pattern<TAB>replacement" lines, '#' comments."""
    rules = []
    for lineno, line in enumerate(_iter_content_lines(path), start=1):
        if "\t" not in line:
            raise ConfigParseError(f"{path}:{lineno}: expected a tab separator")
        pattern_text, replacement_text = line.split("\t", 1)
        where = f"{path}:{lineno}"
        rules.append(RewriteRule(
            pattern=_parse_rule_side(pattern_text, where),
            replacement=_parse_rule_side(replacement_text, where),
        ))
    return rules


def apply_rule(rule: RewriteRule, tokens: Sequence[str]) -> tuple[str, ...] | None:
    """Apply one rule to a full token sequence, or None when it does not match."""
    tokens = tuple(tokens)
    if _SLOT not in rule.pattern:
        if tokens != rule.pattern:
            return None
        bound: tuple[str, ...] = ()
    else:
        slot_at = rule.pattern.index(_SLOT)
        prefix = rule.pattern[:slot_at]
        suffix = rule.pattern[slot_at + 1:]
        if len(tokens) < len(prefix) + len(suffix) + 1:
            return None
        if tokens[:len(prefix)] != prefix:
            return None
        if suffix and tokens[len(tokens) - len(suffix):] != suffix:
            return None
        bound = tokens[len(prefix):len(tokens) - len(suffix)] if suffix \
            else tokens[len(prefix):]
    out: list[str] = []
    for token in rule.replacement:
        if token == _SLOT:
            out.extend(bound)
        else:
            out.append(token)
    return tuple(out)


def expand_synonyms(title: str, rules: Sequence[RewriteRule]) -> set[str]:
    """The title plus every variant generated by the rules that apply to it."""
    surfaces = {title}
    tokens = tuple(tokenize(title))
    for rule in rules:
        rewritten = apply_rule(rule, tokens)
        if rewritten is not None and rewritten != tokens:
            surfaces.add(" ".join(rewritten))
    return surfaces


def _iter_content_lines(path: str | Path) -> Iterable[str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigParseError(f"cannot read {path}: {exc}") from exc
    for line in text.splitlines():
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            yield line.rstrip("\n")


def read_expression_file(path: str | Path) -> list[str]:
    """One expression per line, UTF-8, '#' comments and blank lines skipped."""
    return [line.strip() for line in _iter_content_lines(path)]


def read_synonym_file(path: str | Path) -> list[tuple[str, str]]:
    """Tab-separated "code<TAB>surface" pairs, '#' comments skipped."""
    pairs = []
    for lineno, line in enumerate(_iter_content_lines(path), start=1):
        if "\t" not in line:
            raise ConfigParseError(f"{path}:{lineno}: expected 'code<TAB>surface'")
        code, surface = line.split("\t", 1)
        code, surface = code.strip(), surface.strip()
        if not code or not surface:
            raise ConfigParseError(f"{path}:{lineno}: empty code or surface")
        pairs.append((code, surface))
    return pairs


def _default_text(name: str) -> str:
    return resources.files("riskatlas.data").joinpath(name).read_text(encoding="utf-8")


def default_rewrite_rules() -> list[RewriteRule]:
    rules = []
    for lineno, line in enumerate(_default_text("rewrite_rules.tsv").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        pattern_text, replacement_text = line.split("\t", 1)
        where = f"rewrite_rules.tsv:{lineno}"
        rules.append(RewriteRule(
            pattern=_parse_rule_side(pattern_text, where),
            replacement=_parse_rule_side(replacement_text, where),
        ))
    return rules


def default_risk_expressions() -> list[str]:
    return [line.strip() for line in _default_text("risk_expressions.txt").splitlines()
            if line.strip() and not line.strip().startswith("#")]


def load_config(path: str | Path) -> EngineConfig:
    """Read the key-value config file (or a directory holding ``config.cfg``).

    Recognized keys: stop_title, discard_codes, synonyms, risk_expressions,
    rewrite_rules, discard_surfaces, and one ``filter.<name>`` entry per
    topical filter. File values resolve relative to the config file.
    """
    path = Path(path)
    if path.is_dir():
        path = path / "config.cfg"
    if not path.is_file():
        raise ConfigParseError(f"config file not found: {path}")
    base = path.parent
    config = EngineConfig()
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigParseError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if not value:
            raise ConfigParseError(f"{path}:{lineno}: empty value for {key!r}")
        if key == "stop_title":
            config.stop_title = value
        elif key == "discard_codes":
            config.discard_codes_file = base / value
        elif key == "synonyms":
            config.lexicon.synonym_file = base / value
        elif key == "risk_expressions":
            config.lexicon.risk_expressions_file = base / value
        elif key == "rewrite_rules":
            config.lexicon.rewrite_rules_file = base / value
        elif key == "discard_surfaces":
            config.lexicon.discard_file = base / value
        elif key.startswith("filter."):
            name = key[len("filter."):]
            if not name:
                raise ConfigParseError(f"{path}:{lineno}: filter key without a name")
            config.lexicon.filter_files[name] = base / value
        else:
            raise ConfigParseError(f"{path}:{lineno}: unknown key {key!r}")
    return config


def _load_rules(cfg: LexiconConfig) -> list[RewriteRule]:
    if cfg.rewrite_rules_file is not None:
        return read_rules_file(cfg.rewrite_rules_file)
    return default_rewrite_rules()


def _load_discard_surfaces(cfg: LexiconConfig) -> frozenset[str]:
    if cfg.discard_file is None:
        return frozenset()
    return frozenset(normalize_surface(s) for s in read_expression_file(cfg.discard_file))


def _synonym_too_short(surface: str) -> bool:
    # Single-word synonyms this short are ambiguity magnets in prose.
    normalized = normalize_surface(surface)
    return len(tokenize(surface)) < 2 and len(normalized) < 5


def build_disease_processor(taxonomy: Taxonomy, cfg: LexiconConfig) -> KeywordProcessor:
    """Disease-name processor: one payload key per catalog disease code.

    Every coded, non-discarded disease contributes its truncated title, the
    rule-generated variants, and any file-provided synonyms for its code.
    """
    rules = _load_rules(cfg)
    discard = _load_discard_surfaces(cfg)
    synonyms: dict[str, list[str]] = {}
    if cfg.synonym_file is not None:
        for code, surface in read_synonym_file(cfg.synonym_file):
            synonyms.setdefault(code, []).append(surface)

    kp = KeywordProcessor()
    for node in taxonomy.nodes:
        code = node.code
        if code is None or code in taxonomy.discarded_codes:
            continue
        surfaces = expand_synonyms(truncate_title(node.title), rules)
        for synonym in synonyms.get(code, ()):
            if _synonym_too_short(synonym):
                logger.warning("skipping synonym %r for %s: single word shorter "
                               "than 5 characters", synonym, code)
                continue
            surfaces.add(synonym)
        for surface in surfaces:
            if normalize_surface(surface) in discard:
                continue
            kp.add_keyword(surface, code)
    if kp.size == 0:
        raise EmptyLexiconError("no disease surface forms were produced")
    return kp.freeze()


def _expression_processor(expressions: Sequence[str], key: str, what: str) -> KeywordProcessor:
    if not expressions:
        raise EmptyLexiconError(f"{what} expression list is empty")
    kp = KeywordProcessor()
    for expression in expressions:
        kp.add_keyword(expression, key)
    return kp.freeze()


def build_risk_processor(cfg: LexiconConfig) -> KeywordProcessor:
    """Risk-context processor; every expression maps to the single RISK key."""
    if cfg.risk_expressions_file is not None:
        expressions = read_expression_file(cfg.risk_expressions_file)
    else:
        expressions = default_risk_expressions()
    return _expression_processor(expressions, RISK_KEY, "risk")


def build_filter_processor(cfg: LexiconConfig, name: str) -> KeywordProcessor:
    """Topical filter processor for one configured filter name."""
    try:
        path = cfg.filter_files[name]
    except KeyError:
        raise ConfigParseError(f"no filter named {name!r} is configured") from None
    return _expression_processor(read_expression_file(path), name, f"filter {name!r}")


def build_filter_processors(cfg: LexiconConfig) -> dict[str, KeywordProcessor]:
    """All configured topical filters, keyed by filter name."""
    return {name: build_filter_processor(cfg, name) for name in sorted(cfg.filter_files)}


@dataclass(frozen=True)
class ProcessorSet:
    """The frozen processors one ingest run needs."""

    disease: KeywordProcessor
    risk: KeywordProcessor
    filters: Mapping[str, KeywordProcessor]


def build_processors(taxonomy: Taxonomy, cfg: LexiconConfig) -> ProcessorSet:
    return ProcessorSet(
        disease=build_disease_processor(taxonomy, cfg),
        risk=build_risk_processor(cfg),
        filters=build_filter_processors(cfg),
    )
