/** Pure payload-to-chart-model transforms.
 *
 * Renderers paint these models verbatim; keeping the math here makes the
 * color and conservation guarantees unit-testable without a DOM. No model
 * recomputes an indicator: values are copied from the API payloads.
 */

import type {
  GapPayload,
  RoleName,
  RollupNodePayload,
  SharesPayload,
} from "./api.js";
import { colorFor, colorOrEmpty, EMPTY_COLOR } from "./palette.js";
import { insetRect, layoutTreemap, Rect } from "./treemap.js";

export interface ShareSegment {
  nodeId: number;
  title: string;
  share: number;
  count: number;
  color: string;
  /** Cumulative start of the segment, in [0, 1]. */
  offset: number;
}

export interface ShareBarModel {
  role: RoleName;
  label: string;
  empty: boolean;
  segments: ShareSegment[];
  ownShare: number;
}

const ROLE_LABELS: Record<RoleName, string> = {
  catalog: "catalog",
  found: "found in corpus",
  at_risk: "at risk",
};

export function buildSharesModel(payload: SharesPayload): ShareBarModel[] {
  const roles: RoleName[] = ["catalog", "found", "at_risk"];
  return roles.map((role) => {
    const empty = payload.empty_roles[role];
    let offset = 0;
    const segments = payload.rows.map((row) => {
      const segment: ShareSegment = {
        nodeId: row.node_id,
        title: row.title,
        share: row.shares[role],
        count: row.counts[role],
        color: colorOrEmpty(row.color_key, empty),
        offset,
      };
      offset += row.shares[role];
      return segment;
    });
    return {
      role,
      label: ROLE_LABELS[role],
      empty,
      segments,
      ownShare: payload.own[role].share,
    };
  });
}

export interface TreemapCellModel {
  nodeId: number;
  title: string;
  value: number;
  color: string;
  depth: number;
  rect: Rect;
  /** True for group headers (nodes with children); false for value cells. */
  header: boolean;
}

const HEADER_HEIGHT = 16;
const PADDING = 2;

/** Recursively lay a rollup forest into a rectangle.
 *
 * Each node with children becomes a header block whose interior is
 * subdivided among the children plus (when the node carries its own folded
 * count) a synthetic cell for the node itself, so cell areas always sum to
 * the root totals.
 */
export function buildTreemapModel(trees: RollupNodePayload[], rect: Rect): TreemapCellModel[] {
  const cells: TreemapCellModel[] = [];

  const place = (nodes: RollupNodePayload[], area: Rect, depth: number) => {
    const items = nodes
      .filter((node) => node.total > 0)
      .map((node) => ({ id: String(node.node_id), value: node.total }));
    const layout = layoutTreemap(items, area);
    for (const node of nodes) {
      const cellRect = layout.get(String(node.node_id));
      if (!cellRect) continue;
      const hasChildren = node.children.some((child) => child.total > 0);
      if (!hasChildren) {
        cells.push({
          nodeId: node.node_id,
          title: node.title,
          value: node.total,
          color: colorFor(node.color_key),
          depth,
          rect: cellRect,
          header: false,
        });
        continue;
      }
      cells.push({
        nodeId: node.node_id,
        title: node.title,
        value: node.total,
        color: colorFor(node.color_key),
        depth,
        rect: cellRect,
        header: true,
      });
      const interior = insetRect(cellRect, HEADER_HEIGHT, PADDING);
      const children: RollupNodePayload[] = [...node.children];
      if (node.own > 0) {
        // The node's own folded count becomes a leaf cell among its children.
        children.push({ ...node, children: [], total: node.own });
      }
      place(children, interior, depth + 1);
    }
  };

  place(trees, rect, 0);
  return cells;
}

/** Sum of the value cells (non-headers); equals the sum of root totals. */
export function cellValueSum(cells: TreemapCellModel[]): number {
  return cells.filter((cell) => !cell.header)
    .reduce((acc, cell) => acc + cell.value, 0);
}

export function rootTotal(trees: RollupNodePayload[]): number {
  return trees.reduce((acc, tree) => acc + tree.total, 0);
}

export interface GapRowModel {
  code: string;
  label: string;
  freqFound: number;
  freqRisk: number;
  gap: number;
  color: string;
}

export function buildGapModel(payload: GapPayload): GapRowModel[] {
  return payload.rows.map((row) => ({
    code: row.code,
    label: row.title ?? row.code,
    freqFound: row.freq_found,
    freqRisk: row.freq_risk,
    gap: row.gap,
    color: row.color_key ? colorFor(row.color_key) : EMPTY_COLOR,
  }));
}
