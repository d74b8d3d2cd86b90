/** View state and its URL-hash serialization.
 *
 * Every interaction (branch drilldown, source selection, filter toggle,
 * depth change, traceback selection) updates the location hash, and the
 * hash alone fully determines the rendered view, so any view is
 * deep-linkable and a reload reproduces it exactly.
 */

export interface ViewState {
  /** Branch to scope to: a disease code or node id as string; null = whole classification. */
  branch: string | null;
  /** Selected data sources; empty means all sources. */
  sources: string[];
  /** Whether the configured topical filter is active. */
  filterOn: boolean;
  /** Lowest hierarchy level shown in the treemaps. */
  maxLevels: number;
  /** Disease code whose documents are open in the traceback panel. */
  selectedCode: string | null;
}

export const DEFAULT_STATE: ViewState = {
  branch: null,
  sources: [],
  filterOn: false,
  maxLevels: 3,
  selectedCode: null,
};

export function serializeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.branch !== null) params.set("branch", state.branch);
  if (state.sources.length) params.set("sources", state.sources.join(","));
  if (state.filterOn) params.set("filter", "1");
  if (state.maxLevels !== DEFAULT_STATE.maxLevels) {
    params.set("levels", String(state.maxLevels));
  }
  if (state.selectedCode !== null) params.set("doc", state.selectedCode);
  const text = params.toString();
  return text ? `#${text}` : "";
}

export function parseState(hash: string): ViewState {
  const text = hash.startsWith("#") ? hash.slice(1) : hash;
  const params = new URLSearchParams(text);
  const levels = Number(params.get("levels") ?? DEFAULT_STATE.maxLevels);
  return {
    branch: params.get("branch"),
    sources: (params.get("sources") ?? "").split(",").filter((s) => s.length > 0),
    filterOn: params.get("filter") === "1",
    maxLevels: Number.isFinite(levels) && levels >= 1 ? Math.floor(levels) : DEFAULT_STATE.maxLevels,
    selectedCode: params.get("doc"),
  };
}

export function statesEqual(a: ViewState, b: ViewState): boolean {
  return serializeState(a) === serializeState(b);
}
