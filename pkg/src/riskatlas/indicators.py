"""Branch-level indicators over the catalog / found / at-risk disease sets.

Three disease sets drive every chart: the catalog (all coded diseases), the
diseases found in the selected document subset, and the diseases found
co-occurring with risk expressions. For a branch the share indicator is set
membership (what fraction of the relevant diseases under a parent live in
each child branch), occurrences are document-count rollups (the treemap
input), and document frequency normalizes a disease's document count by the
subset size. The gap ranking orders diseases by how much more frequent they
are among risk-bearing documents than among code-bearing documents.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .corpus import Repository
from .taxonomy import Taxonomy, TreeSlice


class EmptySubsetError(ValueError):
    """A frequency was requested over an empty normalizing subset."""


class Role(str, enum.Enum):
    """Which disease set an indicator is computed over."""

    CATALOG = "catalog"
    FOUND = "found"
    AT_RISK = "at_risk"

    @classmethod
    def parse(cls, value: "Role | str") -> "Role":
        if isinstance(value, Role):
            return value
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"unknown role {value!r}; expected one of "
                             f"{[r.value for r in cls]}") from None


class GapNormalization(str, enum.Enum):
    """Denominator choice for the gap ranking's two frequencies.

    SEPARATE divides found counts by the code-bearing document count and risk
    counts by the risk-bearing document count; SHARED divides both by the
    full subset size (which makes every gap non-positive, since a risk
    mention implies a mention).
    """

    SEPARATE = "separate"
    SHARED = "shared"


@dataclass(frozen=True)
class IndicatorTable:
    """Per-code document counts for one document subset.

    ``n_found[d]`` is the number of subset documents mentioning disease d;
    ``n_risk[d]`` counts those mentioning it in a risk context. Codes absent
    from a mapping have count zero.
    """

    subset: frozenset[tuple[str, str]]
    subset_size: int
    n_found: Mapping[str, int]
    n_risk: Mapping[str, int]
    docs_with_code: int
    docs_with_risk: int

    @property
    def found_set(self) -> frozenset[str]:
        return frozenset(self.n_found)

    @property
    def at_risk_set(self) -> frozenset[str]:
        return frozenset(self.n_risk)

    def count(self, code: str, role: Role) -> int:
        counts = self.n_risk if role is Role.AT_RISK else self.n_found
        return counts.get(code, 0)


def build_indicator_table(
    repo: Repository,
    taxonomy: Taxonomy,
    subset: frozenset[tuple[str, str]],
) -> IndicatorTable:
    """Count documents per disease over the given subset."""
    n_found: dict[str, int] = {}
    n_risk: dict[str, int] = {}
    docs_with_code = docs_with_risk = 0
    for key in subset:
        record = repo.records[key]
        if record.codes:
            docs_with_code += 1
        if record.risk_codes:
            docs_with_risk += 1
        for code in record.codes:
            n_found[code] = n_found.get(code, 0) + 1
        for code in record.risk_codes:
            n_risk[code] = n_risk.get(code, 0) + 1
    return IndicatorTable(
        subset=subset,
        subset_size=len(subset),
        n_found=n_found,
        n_risk=n_risk,
        docs_with_code=docs_with_code,
        docs_with_risk=docs_with_risk,
    )


def role_set(table: IndicatorTable, taxonomy: Taxonomy, role: Role | str) -> frozenset[str]:
    """The disease set behind a role: catalog, found, or at-risk."""
    role = Role.parse(role)
    if role is Role.CATALOG:
        return taxonomy.coded_diseases()
    if role is Role.FOUND:
        return table.found_set
    return table.at_risk_set


@dataclass(frozen=True)
class ShareRow:
    node_id: int
    count: int
    share: float


@dataclass(frozen=True)
class ShareResult:
    """Per-child shares under one parent for one role.

    ``own_count`` covers codes sitting on the parent node itself. When the
    role's disease set is empty under the parent, ``empty`` is set and every
    share is zero instead of raising, so callers can gray the branch out.
    """

    parent: int | None
    role: Role
    total: int
    rows: tuple[ShareRow, ...]
    own_count: int
    own_share: float
    empty: bool


def branch_share(
    table: IndicatorTable,
    taxonomy: Taxonomy,
    parent: int | None,
    role: Role | str,
) -> ShareResult:
    """Fraction of the parent's relevant diseases held by each child branch."""
    role = Role.parse(role)
    diseases = role_set(table, taxonomy, role)
    children = taxonomy.children(parent) if parent is not None else taxonomy.roots
    total = len(taxonomy.coded_diseases(parent) & diseases)
    empty = total == 0
    rows = []
    for child in children:
        count = len(taxonomy.coded_diseases(child) & diseases)
        rows.append(ShareRow(node_id=child, count=count,
                             share=0.0 if empty else count / total))
    if parent is not None:
        node = taxonomy.node(parent)
        own = node.code is not None and node.code in diseases \
            and node.code not in taxonomy.discarded_codes
        own_count = 1 if own else 0
    else:
        own_count = 0
    return ShareResult(
        parent=parent,
        role=role,
        total=total,
        rows=tuple(rows),
        own_count=own_count,
        own_share=0.0 if empty else own_count / total,
        empty=empty,
    )


@dataclass(frozen=True)
class RollupNode:
    """One treemap cell: a node with its own and subtree-total counts.

    ``own`` sums document counts over codes attributed directly to this node
    (its own code plus anything folded up from below a depth cut); ``total``
    adds the children's totals, so the root total equals the whole branch's
    occurrence count.
    """

    node_id: int
    own: int
    total: int
    children: tuple["RollupNode", ...]


def occurrence_rollup(
    table: IndicatorTable,
    taxonomy: Taxonomy,
    parent: int | None,
    role: Role | str,
    max_levels: int | None = None,
) -> tuple[RollupNode, ...]:
    """Occurrence rollup trees for a branch, optionally depth-truncated.

    Returns one tree per slice root (one for a real branch, one per chapter
    for the whole classification). Values are document counts summed over
    each node's attributed diseases.
    """
    role = Role.parse(role)
    if role is Role.CATALOG:
        raise ValueError("occurrence rollups are defined for found/at_risk roles")
    if max_levels is None:
        max_levels = 10 ** 9  # effectively no cut
    tree_slice = taxonomy.truncate_to_depth(parent, max_levels)
    return rollup_from_slice(table, tree_slice, role)


def rollup_from_slice(
    table: IndicatorTable,
    tree_slice: TreeSlice,
    role: Role | str,
) -> tuple[RollupNode, ...]:
    role = Role.parse(role)
    children_of: dict[int | None, list[int]] = {}
    for nid in tree_slice.nodes:
        children_of.setdefault(tree_slice.parents[nid], []).append(nid)

    def build(nid: int) -> RollupNode:
        own = sum(table.count(code, role) for code in tree_slice.attributed[nid])
        children = tuple(build(child) for child in children_of.get(nid, ()))
        return RollupNode(node_id=nid, own=own,
                          total=own + sum(c.total for c in children),
                          children=children)

    return tuple(build(nid) for nid in children_of.get(None, ()))


def branch_occurrences(
    table: IndicatorTable,
    taxonomy: Taxonomy,
    parent: int | None,
    role: Role | str,
) -> tuple[RollupNode, ...]:
    """Full-depth occurrence rollup (no truncation)."""
    return occurrence_rollup(table, taxonomy, parent, role, max_levels=None)


def doc_frequency(table: IndicatorTable, code: str, role: Role | str) -> float:
    """Share of subset documents mentioning the disease (in the given role)."""
    role = Role.parse(role)
    if role is Role.CATALOG:
        raise ValueError("document frequency is defined for found/at_risk roles")
    if table.subset_size == 0:
        raise EmptySubsetError("document frequency over an empty subset")
    return table.count(code, role) / table.subset_size


@dataclass(frozen=True)
class GapRow:
    code: str
    freq_found: float
    freq_risk: float
    gap: float


def gap_ranking(
    table: IndicatorTable,
    k: int,
    normalization: GapNormalization | str = GapNormalization.SEPARATE,
) -> list[GapRow]:
    """Top-k diseases by (risk frequency - corpus frequency).

    Frequencies are normalized per ``normalization``; ordering is descending
    by gap with ties broken by code, so rankings are deterministic.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    normalization = GapNormalization(normalization)
    if normalization is GapNormalization.SEPARATE:
        denom_found, denom_risk = table.docs_with_code, table.docs_with_risk
    else:
        denom_found = denom_risk = table.subset_size
    if denom_found == 0 or denom_risk == 0:
        raise EmptySubsetError("gap ranking over an empty normalizing subset")
    rows = []
    for code in table.found_set:
        freq_found = table.n_found.get(code, 0) / denom_found
        freq_risk = table.n_risk.get(code, 0) / denom_risk
        rows.append(GapRow(code=code, freq_found=freq_found,
                           freq_risk=freq_risk, gap=freq_risk - freq_found))
    rows.sort(key=lambda row: (-row.gap, row.code))
    return rows[:k]
