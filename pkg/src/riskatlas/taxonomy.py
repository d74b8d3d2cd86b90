"""Hierarchical disease classification: parsing, traversal, and depth slicing.

The raw classification export is a two-column table (Code, Title) in document
order, where hierarchy depth is encoded as a prefix of dash markers on the
title: a chapter heading carries no marker, its sub-branch one "- ", the next
level "- - ", and so on. Upper-level branch rows usually carry no code; coded
rows are the catalog diseases. Parsing decodes the markers into an immutable
tree whose nodes know their full root-to-node path, and exposes the traversal
primitives the indicator layer needs: subtree enumeration, coded-disease sets,
breadth-first ordering, and depth-limited slices for treemap display.
"""

from __future__ import annotations

import csv
import io
import json
import re
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence


class TaxonomyError(ValueError):
    """Base class for classification parsing and lookup failures."""


class EmptyInputError(TaxonomyError):
    """No rows were supplied (or all rows fell after the stop boundary)."""


class MalformedDepthError(TaxonomyError):
    """A row jumps more than one level deeper than its predecessor."""


class DuplicateCodeError(TaxonomyError):
    """The same code appears on two different rows."""


class UnknownNodeError(TaxonomyError):
    """A node id or code does not exist in this taxonomy."""


class InputFormatError(TaxonomyError):
    """The classification export file is not in the expected shape."""


# One depth marker is a dash followed by an optional whitespace character;
# the export materializes one marker per hierarchy level.
_MARKER_RE = re.compile(r"^(?:-\s?)+")


@dataclass(frozen=True)
class RawRow:
    """One row of the raw classification export, before depth decoding."""

    row_index: int
    code: str | None
    title: str


@dataclass(frozen=True)
class TaxonomyNode:
    """A classification node with its decoded depth and full ancestor path."""

    node_id: int
    code: str | None
    title: str
    depth: int
    path: tuple[str, ...]
    parent: int | None
    children: tuple[int, ...]


@dataclass(frozen=True)
class TreeSlice:
    """A depth-limited view of a branch.

    ``nodes`` lists the retained node ids in document order. ``parents``
    remaps parent links within the slice (slice roots map to None).
    ``attributed`` assigns every coded disease of the full branch to its
    deepest retained ancestor-or-self, so totals are conserved when levels
    below the cut are folded away.
    """

    root: int | None
    max_levels: int
    nodes: tuple[int, ...]
    parents: Mapping[int, int | None]
    attributed: Mapping[int, frozenset[str]]


def split_depth_markers(title: str) -> tuple[int, str]:
    """Split a raw title into (depth, clean title).

    Depth is the number of dashes in the maximal leading run of
    dash-plus-optional-space groups; the clean title is what remains,
    stripped of surrounding whitespace.
    """
    match = _MARKER_RE.match(title)
    if match is None:
        return 0, title.strip()
    return match.group(0).count("-"), title[match.end():].strip()


class Taxonomy:
    """Immutable classification tree with code lookup and BFS ordering.

    Instances are built by :func:`parse_taxonomy` and never mutated
    afterwards, so they are safe to share across concurrent readers.
    """

    def __init__(self, nodes: Sequence[TaxonomyNode], discarded_codes: Iterable[str] = ()):
        self._nodes = tuple(nodes)
        self._by_id = {node.node_id: node for node in self._nodes}
        self._discarded = frozenset(discarded_codes)
        code_index: dict[str, int] = {}
        for node in self._nodes:
            if node.code is not None:
                code_index[node.code] = node.node_id
        self._code_index = code_index
        self._roots = tuple(n.node_id for n in self._nodes if n.parent is None)
        # Document order is a preorder traversal, so a stable sort by depth
        # yields breadth-first order with siblings kept in document order.
        order = sorted(self._nodes, key=lambda n: n.depth)
        self._bfs = tuple(n.node_id for n in order)
        self._bfs_ordinal = {nid: i for i, nid in enumerate(self._bfs)}

    def __len__(self) -> int:
        return len(self._nodes)

    def __iter__(self) -> Iterator[TaxonomyNode]:
        return iter(self._nodes)

    @property
    def nodes(self) -> tuple[TaxonomyNode, ...]:
        return self._nodes

    @property
    def roots(self) -> tuple[int, ...]:
        return self._roots

    @property
    def code_index(self) -> Mapping[str, int]:
        return self._code_index

    @property
    def bfs_order(self) -> tuple[int, ...]:
        return self._bfs

    @property
    def discarded_codes(self) -> frozenset[str]:
        return self._discarded

    def node(self, node_id: int) -> TaxonomyNode:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise UnknownNodeError(f"no node with id {node_id!r}") from None

    def has_node(self, node_id: int) -> bool:
        return node_id in self._by_id

    def resolve_code(self, code: str) -> int:
        try:
            return self._code_index[code]
        except KeyError:
            raise UnknownNodeError(f"no node with code {code!r}") from None

    def bfs_ordinal(self, node_id: int) -> int:
        self.node(node_id)
        return self._bfs_ordinal[node_id]

    def children(self, node_id: int) -> tuple[int, ...]:
        return self.node(node_id).children

    def subtree(self, branch: int | None = None) -> list[int]:
        """Return a branch and all its descendants in document order.

        With ``branch=None`` the whole forest is returned.
        """
        if branch is None:
            return [n.node_id for n in self._nodes]
        self.node(branch)
        out: list[int] = []
        stack = [branch]
        while stack:
            nid = stack.pop()
            out.append(nid)
            # Reversed push keeps children in document order on the stack.
            stack.extend(reversed(self._by_id[nid].children))
        return out

    def coded_diseases(self, branch: int | None = None) -> frozenset[str]:
        """All catalog codes within a branch (whole tree when branch is None).

        Codes on the configured discard list stay in the tree but are
        excluded here.
        """
        codes = []
        for nid in self.subtree(branch):
            code = self._by_id[nid].code
            if code is not None and code not in self._discarded:
                codes.append(code)
        return frozenset(codes)

    def truncate_to_depth(self, branch: int | None, max_levels: int) -> TreeSlice:
        """Cut a branch to at most ``max_levels`` levels.

        Every coded disease below the cut is attributed to its deepest
        retained ancestor, so per-node attributions always sum to the full
        branch's coded-disease set.
        """
        if max_levels < 1:
            raise ValueError(f"max_levels must be >= 1, got {max_levels}")
        if branch is not None:
            base_depth = self.node(branch).depth
        else:
            base_depth = 0
        members = self.subtree(branch)
        retained = [nid for nid in members
                    if self._by_id[nid].depth - base_depth < max_levels]
        retained_set = set(retained)

        parents: dict[int, int | None] = {}
        for nid in retained:
            parent = self._by_id[nid].parent
            if nid == branch or parent is None or parent not in retained_set:
                parents[nid] = None
            else:
                parents[nid] = parent

        attributed: dict[int, set[str]] = {nid: set() for nid in retained}
        for nid in members:
            code = self._by_id[nid].code
            if code is None or code in self._discarded:
                continue
            anchor = nid
            while anchor not in retained_set:
                anchor = self._by_id[anchor].parent  # type: ignore[assignment]
            attributed[anchor].add(code)

        return TreeSlice(
            root=branch,
            max_levels=max_levels,
            nodes=tuple(retained),
            parents=parents,
            attributed={nid: frozenset(codes) for nid, codes in attributed.items()},
        )

    def to_dict(self) -> dict:
        """Serialize to a JSON-shaped dict (inverse of :meth:`from_dict`)."""
        return {
            "nodes": [
                {
                    "node_id": n.node_id,
                    "code": n.code,
                    "title": n.title,
                    "depth": n.depth,
                    "parent": n.parent,
                }
                for n in self._nodes
            ],
            "discarded_codes": sorted(self._discarded),
        }

    @classmethod
    def from_dict(cls, payload: Mapping) -> "Taxonomy":
        children: dict[int, list[int]] = defaultdict(list)
        raw_nodes = payload["nodes"]
        for entry in raw_nodes:
            if entry["parent"] is not None:
                children[entry["parent"]].append(entry["node_id"])
        paths: dict[int, tuple[str, ...]] = {}
        nodes = []
        for entry in raw_nodes:
            parent = entry["parent"]
            path = (paths[parent] if parent is not None else ()) + (entry["title"],)
            paths[entry["node_id"]] = path
            nodes.append(TaxonomyNode(
                node_id=entry["node_id"],
                code=entry["code"],
                title=entry["title"],
                depth=entry["depth"],
                path=path,
                parent=parent,
                children=tuple(children[entry["node_id"]]),
            ))
        return cls(nodes, payload.get("discarded_codes", ()))

    def save(self, path: str | Path) -> None:
        data = json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True,
                          separators=(",", ":"))
        Path(path).write_text(data + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Taxonomy":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def parse_taxonomy(
    rows: Sequence[RawRow],
    stop_title: str | None = None,
    discard_codes: Iterable[str] = (),
) -> Taxonomy:
    """Decode depth markers and build the classification tree.

    Rows at or after the first row whose stripped title equals ``stop_title``
    are excluded. Codes listed in ``discard_codes`` stay in the tree but are
    excluded from the catalog disease set.
    """
    decoded: list[tuple[RawRow, int, str]] = []
    for row in rows:
        depth, title = split_depth_markers(row.title)
        if not title:
            raise InputFormatError(f"row {row.row_index}: empty title")
        if stop_title is not None and title == stop_title:
            break
        decoded.append((row, depth, title))
    if not decoded:
        raise EmptyInputError("no classification rows to parse")

    seen_codes: set[str] = set()
    # Mutable scaffolding; frozen nodes are materialized once children are known.
    building: list[dict] = []
    children: dict[int, list[int]] = defaultdict(list)
    last_at_depth: list[int] = []  # node id of the most recent row per depth

    for row, depth, title in decoded:
        if depth > len(last_at_depth):
            prev = len(last_at_depth) - 1
            raise MalformedDepthError(
                f"row {row.row_index}: depth {depth} follows depth {prev}"
            )
        code = row.code.strip() if row.code is not None else None
        if not code:
            code = None
        if code is not None:
            if code in seen_codes:
                raise DuplicateCodeError(f"row {row.row_index}: duplicate code {code!r}")
            seen_codes.add(code)

        parent = last_at_depth[depth - 1] if depth > 0 else None
        building.append({
            "node_id": row.row_index,
            "code": code,
            "title": title,
            "depth": depth,
            "parent": parent,
        })
        if parent is not None:
            children[parent].append(row.row_index)
        del last_at_depth[depth:]
        last_at_depth.append(row.row_index)

    paths: dict[int, tuple[str, ...]] = {}
    nodes = []
    for entry in building:
        parent = entry["parent"]
        path = (paths[parent] if parent is not None else ()) + (entry["title"],)
        paths[entry["node_id"]] = path
        nodes.append(TaxonomyNode(
            node_id=entry["node_id"],
            code=entry["code"],
            title=entry["title"],
            depth=entry["depth"],
            path=path,
            parent=parent,
            children=tuple(children[entry["node_id"]]),
        ))
    return Taxonomy(nodes, discard_codes)


def read_classification_rows(path: str | Path) -> list[RawRow]:
    """Read a delimiter-separated classification export into raw rows.

    The delimiter (tab or comma) is auto-detected from the header line.
    The file must carry at least "Code" and "Title" columns; empty code
    cells mean "no code". Row indices are the 0-based data row ordinals.
    """
    text = Path(path).read_text(encoding="utf-8")
    header_line = text.splitlines()[0] if text else ""
    delimiter = "\t" if "\t" in header_line else ","
    reader = csv.DictReader(io.StringIO(text), delimiter=delimiter)
    fields = reader.fieldnames or []
    if "Code" not in fields or "Title" not in fields:
        raise InputFormatError(
            f"{path}: expected 'Code' and 'Title' columns, found {fields}"
        )
    rows = []
    for index, record in enumerate(reader):
        code = (record.get("Code") or "").strip() or None
        title = record.get("Title") or ""
        rows.append(RawRow(row_index=index, code=code, title=title))
    return rows


def load_taxonomy(
    path: str | Path,
    stop_title: str | None = None,
    discard_codes: Iterable[str] = (),
) -> Taxonomy:
    """Read and parse a classification export in one step."""
    return parse_taxonomy(read_classification_rows(path), stop_title, discard_codes)
