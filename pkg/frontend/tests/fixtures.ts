import type {
  GapPayload,
  RollupNodePayload,
  SharesPayload,
  SubsetInfo,
} from "../src/api.js";

export const SUBSET: SubsetInfo = {
  sources: null,
  filter: null,
  size: 10,
  docs_with_code: 9,
  docs_with_risk_code: 5,
};

function node(nodeId: number, title: string, colorKey: [number, number],
              own: number, children: RollupNodePayload[]): RollupNodePayload {
  return {
    node_id: nodeId,
    code: null,
    title,
    depth: 0,
    bfs_ordinal: nodeId,
    color_key: colorKey,
    own,
    total: own + children.reduce((acc, child) => acc + child.total, 0),
    children,
  };
}

/** Three-level rollup: root -> two branches -> leaves. */
export function deepRollup(): RollupNodePayload[] {
  return [node(0, "Root", [0, 0], 0, [
    node(1, "Branch one", [0, 1], 1, [
      node(2, "Disease one", [0, 3], 4, []),
      node(3, "Disease two", [0, 4], 2, []),
    ]),
    node(4, "Branch two", [0, 2], 0, [
      node(5, "Disease three", [0, 5], 3, []),
    ]),
  ])];
}

/** The same data cut one level shallower: leaf counts folded into branches. */
export function shallowRollup(): RollupNodePayload[] {
  return [node(0, "Root", [0, 0], 0, [
    node(1, "Branch one", [0, 1], 7, []),   // 1 own + 4 + 2 folded up
    node(4, "Branch two", [0, 2], 3, []),   // 3 folded up
  ])];
}

export function sharesPayload(): SharesPayload {
  return {
    branch: null,
    subset: SUBSET,
    empty_roles: { catalog: false, found: false, at_risk: false },
    totals: { catalog: 6, found: 5, at_risk: 4 },
    own: {
      catalog: { count: 0, share: 0 },
      found: { count: 0, share: 0 },
      at_risk: { count: 0, share: 0 },
    },
    rows: [
      {
        node_id: 1, code: null, title: "Branch one", depth: 0, parent: 0,
        bfs_ordinal: 1, color_key: [0, 1],
        shares: { catalog: 0.5, found: 0.6, at_risk: 0.75 },
        counts: { catalog: 3, found: 3, at_risk: 3 },
      },
      {
        node_id: 4, code: null, title: "Branch two", depth: 0, parent: 0,
        bfs_ordinal: 2, color_key: [0, 2],
        shares: { catalog: 0.5, found: 0.4, at_risk: 0.25 },
        counts: { catalog: 3, found: 2, at_risk: 1 },
      },
    ],
  };
}

export function gapPayload(): GapPayload {
  return {
    k: 3,
    normalization: "separate",
    subset: SUBSET,
    rows: [
      { code: "D1", title: "Disease one", node_id: 2, freq_found: 0.2,
        freq_risk: 0.4, gap: 0.2, color_key: [0, 3] },
      { code: "B1", title: "Branch one", node_id: 1, freq_found: 0.3,
        freq_risk: 0.35, gap: 0.05, color_key: [0, 1] },
      { code: "ZZ", title: null, node_id: null, freq_found: 0.1,
        freq_risk: 0.0, gap: -0.1, color_key: null },
    ],
  };
}
