"""HTTP API over a repository snapshot: taxonomy views, indicators, traceback.

Every endpoint is a thin serialization of the corresponding in-process call
on an immutable :class:`Generation` (taxonomy + repository + derived
caches). A new ingest produces a new generation; swapping it in is atomic,
so in-flight requests finish on the snapshot they started with and all
responses within one generation are mutually consistent.

Color assignment is deliberately presentation-free: each node gets a stable
(top-branch ordinal, within-branch ordinal) key derived from breadth-first
order, and clients map those keys to an actual palette. The same node keeps
the same key on every endpoint and across restarts.
"""

from __future__ import annotations

import base64
import functools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from fastapi import FastAPI, HTTPException, Query

from .corpus import TAXONOMY_FILE, Repository, UnknownFilterError
from .indicators import (
    EmptySubsetError,
    GapNormalization,
    IndicatorTable,
    Role,
    RollupNode,
    branch_share,
    build_indicator_table,
    rollup_from_slice,
)
from .taxonomy import Taxonomy, TreeSlice, UnknownNodeError

DEFAULT_MAX_LEVELS = 3
DEFAULT_PAGE_SIZE = 50
DEFAULT_GAP_K = 20


def color_keys(taxonomy: Taxonomy) -> dict[int, tuple[int, int]]:
    """Stable (top_branch_ordinal, within_ordinal) per node, from BFS order.

    The first component is the ordinal of the node's chapter (depth-0
    ancestor) in document order; the second is the node's BFS rank within
    that chapter's subtree. Both are pure functions of the tree structure.
    """
    root_ordinal = {root: i for i, root in enumerate(taxonomy.roots)}
    top_of: dict[int, int] = {}
    for node in taxonomy.nodes:  # document order: parents precede children
        top_of[node.node_id] = top_of[node.parent] if node.parent is not None \
            else node.node_id
    within_counter: dict[int, int] = {}
    keys: dict[int, tuple[int, int]] = {}
    for nid in taxonomy.bfs_order:
        top = top_of[nid]
        within = within_counter.get(top, 0)
        within_counter[top] = within + 1
        keys[nid] = (root_ordinal[top], within)
    return keys


class Generation:
    """One immutable snapshot generation the API serves from."""

    def __init__(self, taxonomy: Taxonomy, repo: Repository):
        self.taxonomy = taxonomy
        self.repo = repo
        self.color_keys = color_keys(taxonomy)

    @classmethod
    def load(cls, repo_dir: str | Path) -> "Generation":
        repo_dir = Path(repo_dir)
        taxonomy_path = repo_dir / TAXONOMY_FILE
        if not taxonomy_path.exists():
            raise FileNotFoundError(
                f"{taxonomy_path} not found; run an ingest into this repository first")
        return cls(Taxonomy.load(taxonomy_path), Repository.load(repo_dir))

    @functools.lru_cache(maxsize=64)
    def _table(self, sources: tuple[str, ...] | None, filter_name: str | None) -> IndicatorTable:
        subset = self.repo.select_subset(
            sources=set(sources) if sources is not None else None,
            filter_name=filter_name,
        )
        return build_indicator_table(self.repo, self.taxonomy, subset)

    def indicator_table(
        self,
        sources: Iterable[str] | None = None,
        filter_name: str | None = None,
    ) -> IndicatorTable:
        key = tuple(sorted(set(sources))) if sources is not None else None
        return self._table(key, filter_name)


@dataclass
class SnapshotBox:
    """Holder whose ``generation`` reference is swapped atomically."""

    generation: Generation

    def swap(self, generation: Generation) -> None:
        self.generation = generation


# -- response serialization ----------------------------------------------


def _node_payload(gen: Generation, node_id: int, parent: int | None) -> dict:
    node = gen.taxonomy.node(node_id)
    ordinal = gen.taxonomy.bfs_ordinal(node_id)
    return {
        "node_id": node.node_id,
        "code": node.code,
        "title": node.title,
        "depth": node.depth,
        "parent": parent,
        "bfs_ordinal": ordinal,
        "color_key": list(gen.color_keys[node_id]),
    }


def serialize_slice(gen: Generation, tree_slice: TreeSlice) -> dict:
    nodes = sorted(tree_slice.nodes, key=gen.taxonomy.bfs_ordinal)
    return {
        "branch": tree_slice.root,
        "max_levels": tree_slice.max_levels,
        "nodes": [_node_payload(gen, nid, tree_slice.parents[nid]) for nid in nodes],
    }


def serialize_rollup(gen: Generation, node: RollupNode) -> dict:
    payload = _node_payload(gen, node.node_id, None)
    payload.pop("parent")
    payload.update({
        "own": node.own,
        "total": node.total,
        "children": [serialize_rollup(gen, child) for child in node.children],
    })
    return payload


def _subset_payload(sources: Sequence[str] | None, filter_name: str | None,
                    table: IndicatorTable) -> dict:
    return {
        "sources": sorted(sources) if sources is not None else None,
        "filter": filter_name,
        "size": table.subset_size,
        "docs_with_code": table.docs_with_code,
        "docs_with_risk_code": table.docs_with_risk,
    }


def shares_payload(gen: Generation, table: IndicatorTable, parent: int | None,
                   sources: Sequence[str] | None, filter_name: str | None) -> dict:
    """Side-by-side shares for the three roles under one parent."""
    per_role = {role: branch_share(table, gen.taxonomy, parent, role) for role in Role}
    children = gen.taxonomy.children(parent) if parent is not None else gen.taxonomy.roots
    ordered = sorted(children, key=gen.taxonomy.bfs_ordinal)
    rows = []
    for child in ordered:
        row = _node_payload(gen, child, parent)
        row["shares"] = {}
        row["counts"] = {}
        for role, result in per_role.items():
            share_row = next(r for r in result.rows if r.node_id == child)
            row["shares"][role.value] = share_row.share
            row["counts"][role.value] = share_row.count
        rows.append(row)
    return {
        "branch": parent,
        "subset": _subset_payload(sources, filter_name, table),
        "empty_roles": {role.value: result.empty for role, result in per_role.items()},
        "totals": {role.value: result.total for role, result in per_role.items()},
        "own": {role.value: {"count": result.own_count, "share": result.own_share}
                for role, result in per_role.items()},
        "rows": rows,
    }


def occurrences_payload(gen: Generation, table: IndicatorTable, parent: int | None,
                        role: Role, max_levels: int,
                        sources: Sequence[str] | None, filter_name: str | None) -> dict:
    tree_slice = gen.taxonomy.truncate_to_depth(parent, max_levels)
    trees = rollup_from_slice(table, tree_slice, role)
    return {
        "branch": parent,
        "role": role.value,
        "max_levels": max_levels,
        "subset": _subset_payload(sources, filter_name, table),
        "trees": [serialize_rollup(gen, tree) for tree in trees],
    }


def gap_payload(gen: Generation, table: IndicatorTable, k: int,
                sources: Sequence[str] | None, filter_name: str | None,
                normalization: GapNormalization = GapNormalization.SEPARATE) -> dict:
    from .indicators import gap_ranking

    rows = []
    for entry in gap_ranking(table, k, normalization):
        node_id = gen.taxonomy.code_index.get(entry.code)
        row = {
            "code": entry.code,
            "title": gen.taxonomy.node(node_id).title if node_id is not None else None,
            "node_id": node_id,
            "freq_found": entry.freq_found,
            "freq_risk": entry.freq_risk,
            "gap": entry.gap,
            "color_key": list(gen.color_keys[node_id]) if node_id is not None else None,
        }
        rows.append(row)
    return {
        "k": k,
        "normalization": normalization.value,
        "subset": _subset_payload(sources, filter_name, table),
        "rows": rows,
    }


def documents_payload(gen: Generation, table: IndicatorTable, code: str,
                      sources: Sequence[str] | None, filter_name: str | None,
                      cursor: str | None, limit: int) -> dict:
    """Paginated traceback to the documents mentioning a code."""
    matching = sorted(key for key in table.subset
                      if code in gen.repo.records[key].codes)
    start = 0
    if cursor is not None:
        last = _decode_cursor(cursor)
        # First key strictly after the cursor position.
        start = next((i for i, key in enumerate(matching) if key > last), len(matching))
    page = matching[start:start + limit]
    rows = [{
        "source": source,
        "doc_id": doc_id,
        "title": gen.repo.titles.get((source, doc_id), ""),
        "at_risk": code in gen.repo.records[(source, doc_id)].risk_codes,
    } for source, doc_id in page]
    next_cursor = _encode_cursor(page[-1]) if start + limit < len(matching) else None
    return {
        "code": code,
        "subset": _subset_payload(sources, filter_name, table),
        "total": len(matching),
        "rows": rows,
        "next_cursor": next_cursor,
    }


def _encode_cursor(key: tuple[str, str]) -> str:
    raw = json.dumps(list(key), ensure_ascii=False).encode("utf-8")
    return base64.urlsafe_b64encode(raw).decode("ascii")


def _decode_cursor(cursor: str) -> tuple[str, str]:
    try:
        source, doc_id = json.loads(base64.urlsafe_b64decode(cursor.encode("ascii")))
        return (str(source), str(doc_id))
    except Exception:
        raise HTTPException(status_code=400, detail="malformed cursor") from None


# -- FastAPI wiring --------------------------------------------------------


def _resolve_branch(gen: Generation, branch: str | None) -> int | None:
    if branch is None or branch == "":
        return None
    taxonomy = gen.taxonomy
    if branch.lstrip("-").isdigit() and taxonomy.has_node(int(branch)):
        return int(branch)
    try:
        return taxonomy.resolve_code(branch)
    except UnknownNodeError:
        raise HTTPException(status_code=404, detail=f"unknown branch {branch!r}") from None


def _resolve_role(role: str) -> Role:
    try:
        return Role.parse(role)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from None


def _resolve_table(gen: Generation, sources: list[str] | None,
                   filter_name: str | None) -> IndicatorTable:
    try:
        return gen.indicator_table(sources, filter_name)
    except UnknownFilterError as exc:
        raise HTTPException(status_code=404, detail=f"unknown filter {exc.args[0]!r}") from None


def _check_positive(name: str, value: int) -> int:
    if value < 1:
        raise HTTPException(status_code=400, detail=f"{name} must be >= 1")
    return value


def create_app(box: SnapshotBox) -> FastAPI:
    """Build the API application over a swappable snapshot holder."""
    app = FastAPI(title="riskatlas", version="0.1.0")
    app.state.box = box

    def current() -> Generation:
        return box.generation

    @app.get("/taxonomy")
    def get_taxonomy(
        branch: str | None = None,
        max_levels: int = DEFAULT_MAX_LEVELS,
    ) -> dict:
        gen = current()
        _check_positive("max_levels", max_levels)
        parent = _resolve_branch(gen, branch)
        return serialize_slice(gen, gen.taxonomy.truncate_to_depth(parent, max_levels))

    @app.get("/indicators/shares")
    def get_shares(
        branch: str | None = None,
        sources: list[str] | None = Query(default=None),
        filter: str | None = None,
    ) -> dict:
        gen = current()
        parent = _resolve_branch(gen, branch)
        table = _resolve_table(gen, sources, filter)
        return shares_payload(gen, table, parent, sources, filter)

    @app.get("/indicators/occurrences")
    def get_occurrences(
        role: str = Role.FOUND.value,
        branch: str | None = None,
        max_levels: int = DEFAULT_MAX_LEVELS,
        sources: list[str] | None = Query(default=None),
        filter: str | None = None,
    ) -> dict:
        gen = current()
        _check_positive("max_levels", max_levels)
        parsed_role = _resolve_role(role)
        if parsed_role is Role.CATALOG:
            raise HTTPException(status_code=400,
                                detail="occurrences are defined for found/at_risk roles")
        parent = _resolve_branch(gen, branch)
        table = _resolve_table(gen, sources, filter)
        return occurrences_payload(gen, table, parent, parsed_role, max_levels,
                                   sources, filter)

    @app.get("/indicators/gap")
    def get_gap(
        k: int = DEFAULT_GAP_K,
        sources: list[str] | None = Query(default=None),
        filter: str | None = None,
        normalization: str = GapNormalization.SEPARATE.value,
    ) -> dict:
        gen = current()
        _check_positive("k", k)
        try:
            norm = GapNormalization(normalization)
        except ValueError:
            raise HTTPException(status_code=400,
                                detail=f"unknown normalization {normalization!r}") from None
        table = _resolve_table(gen, sources, filter)
        try:
            return gap_payload(gen, table, k, sources, filter, norm)
        except EmptySubsetError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

    @app.get("/documents")
    def get_documents(
        code: str,
        sources: list[str] | None = Query(default=None),
        filter: str | None = None,
        cursor: str | None = None,
        limit: int = DEFAULT_PAGE_SIZE,
    ) -> dict:
        gen = current()
        _check_positive("limit", limit)
        if code not in gen.taxonomy.coded_diseases():
            raise HTTPException(status_code=404, detail=f"unknown code {code!r}")
        table = _resolve_table(gen, sources, filter)
        return documents_payload(gen, table, code, sources, filter, cursor, limit)

    return app


def create_app_for_repo(repo_dir: str | Path) -> FastAPI:
    return create_app(SnapshotBox(Generation.load(repo_dir)))
