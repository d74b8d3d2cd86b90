"""Single-pass, word-boundary-aware multi-pattern phrasal matching.

Expressions and texts are normalized to lowercase token sequences, where a
token is a maximal run of word characters (letters, digits, hyphen,
apostrophe). That keeps compounds like "SARS-CoV-2" or "2019-nCoV" as single
tokens and makes word boundaries exact: "pneumonia" never matches inside
"bronchopneumonia". Matching is a left-to-right scan over a token trie,
taking the longest match at each starting token and resuming after the
matched span, so scan cost is driven by text length rather than by how many
expressions are loaded.

Build a processor single-threaded, then :meth:`KeywordProcessor.freeze` it;
a frozen processor is immutable and safe to share across extraction workers.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator

# Word characters: letters, digits, hyphen, apostrophe. ``[^\W_]`` is \w
# minus underscore, so underscores act as separators like any punctuation.
_TOKEN_RE = re.compile(r"(?:[^\W_]|['-])+")


class EmptySurfaceError(ValueError):
    """The surface expression tokenizes to zero tokens."""


class FrozenProcessorError(RuntimeError):
    """Mutation was attempted after the processor was frozen."""


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens of ``text``, in order."""
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]


def tokenize_with_spans(text: str) -> list[tuple[str, int, int]]:
    """Lowercased tokens with their character spans, for debug output."""
    return [(m.group(0).lower(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def normalize_surface(surface: str) -> str:
    """Canonical single-spaced lowercase form of a surface expression."""
    return " ".join(tokenize(surface))


class _Node:
    __slots__ = ("children", "keys")

    def __init__(self) -> None:
        self.children: dict[str, _Node] = {}
        self.keys: set[str] | None = None


class KeywordProcessor:
    """Trie-backed phrasal matcher mapping surface expressions to payload keys.

    Two distinct surfaces may share a key (synonyms), and one surface may
    carry several keys when it was inserted once per key; matches then
    report every key at that span.
    """

    def __init__(self) -> None:
        self._root = _Node()
        self._size = 0
        self._frozen = False
        self._surface_keys: dict[str, set[str]] = {}

    @property
    def size(self) -> int:
        """Number of distinct surface expressions inserted."""
        return self._size

    @property
    def frozen(self) -> bool:
        return self._frozen

    def add_keyword(self, surface: str, key: str) -> None:
        """Register ``surface`` so that matches of it yield ``key``.

        Idempotent for identical (surface, key) pairs. Raises
        :class:`EmptySurfaceError` when the surface has no word tokens.
        """
        if self._frozen:
            raise FrozenProcessorError("processor is frozen; build a new one to add keywords")
        tokens = tokenize(surface)
        if not tokens:
            raise EmptySurfaceError(f"surface {surface!r} contains no word tokens")
        node = self._root
        for token in tokens:
            child = node.children.get(token)
            if child is None:
                child = _Node()
                node.children[token] = child
            node = child
        if node.keys is None:
            node.keys = set()
            self._size += 1
        node.keys.add(key)
        self._surface_keys.setdefault(" ".join(tokens), set()).add(key)

    def add_keywords(self, pairs: Iterable[tuple[str, str]]) -> None:
        for surface, key in pairs:
            self.add_keyword(surface, key)

    def freeze(self) -> "KeywordProcessor":
        """Seal the processor; further ``add_keyword`` calls raise."""
        self._frozen = True
        return self

    def surface_key_map(self) -> dict[str, frozenset[str]]:
        """Normalized surface form -> keys, mostly for audits and tests."""
        return {s: frozenset(k) for s, k in self._surface_keys.items()}

    def extract_keys(self, text: str) -> list[tuple[str, int, int]]:
        """All matches in ``text`` as (key, start_token, end_token) triples.

        Spans are token indices with an exclusive end. The scan is
        left-to-right, keeps the longest match at each starting token, and
        resumes after the matched span, so reported spans never overlap.
        Surfaces carrying several keys yield one triple per key, sorted by
        key for determinism.
        """
        matches, _ = self._scan(tokenize(text))
        return matches

    def contains_any(self, text: str) -> bool:
        """True iff at least one expression occurs in ``text``.

        Short-circuits on the first accepting trie node.
        """
        tokens = tokenize(text)
        n = len(tokens)
        for start in range(n):
            node = self._root
            j = start
            while j < n:
                node = node.children.get(tokens[j])  # type: ignore[assignment]
                if node is None:
                    break
                if node.keys:
                    return True
                j += 1
        return False

    def _scan(self, tokens: list[str]) -> tuple[list[tuple[str, int, int]], int]:
        """Core scan; returns (matches, token-visit count).

        The visit count increments once per trie lookup, so it measures how
        much of the text the scan actually touches.
        """
        matches: list[tuple[str, int, int]] = []
        visits = 0
        n = len(tokens)
        i = 0
        while i < n:
            node = self._root
            j = i
            best_end = -1
            best_keys: set[str] | None = None
            while j < n:
                visits += 1
                node = node.children.get(tokens[j])  # type: ignore[assignment]
                if node is None:
                    break
                j += 1
                if node.keys:
                    best_end = j
                    best_keys = node.keys
            if best_keys is not None:
                matches.extend((key, i, best_end) for key in sorted(best_keys))
                i = best_end
            else:
                i += 1
        return matches, visits


def count_token_visits(kp: KeywordProcessor, text: str) -> int:
    """Token visits performed while scanning ``text`` (instrumentation)."""
    _, visits = kp._scan(tokenize(text))
    return visits


def iter_match_lines(kp: KeywordProcessor, text: str) -> Iterator[str]:
    """Plain-text debug lines, one per match: key, token span, matched text."""
    spans = tokenize_with_spans(text)
    for key, start, end in kp.extract_keys(text):
        if start < len(spans) and end - 1 < len(spans):
            surface = text[spans[start][1]:spans[end - 1][2]]
        else:
            surface = ""
        yield f"{key}\t[{start},{end})\t{surface}"
