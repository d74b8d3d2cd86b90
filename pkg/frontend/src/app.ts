/** Dashboard wiring: hash-driven state, joined fetches, stale discard.
 *
 * The location hash is the single source of truth. Interactions write a new
 * hash; the hashchange handler re-reads it, refetches the three chart
 * payloads concurrently, and repaints. A monotonically increasing fetch
 * token drops responses that arrive after the state has moved on.
 */

import { ApiClient, RoleName, SubsetQuery } from "./api.js";
import { clear, el } from "./dom.js";
import { paintGap, paintShares, paintTreemap } from "./render.js";
import { DEFAULT_STATE, parseState, serializeState, ViewState } from "./state.js";
import { TracebackPanel } from "./traceback.js";
import {
  buildGapModel,
  buildSharesModel,
  buildTreemapModel,
} from "./transforms.js";

interface UiConfig {
  apiBase?: string;
  filter?: string;
  sources?: string[];
  gapK?: number;
}

declare global {
  interface Window {
    ATLAS_UI_CONFIG?: UiConfig;
  }
}

const TREEMAP_W = 520;
const TREEMAP_H = 360;

function subsetOf(state: ViewState, config: UiConfig): SubsetQuery {
  return {
    sources: state.sources,
    filter: state.filterOn && config.filter ? config.filter : null,
  };
}

export function start(): void {
  const config = window.ATLAS_UI_CONFIG ?? {};
  const api = new ApiClient(config.apiBase ?? "");
  let fetchToken = 0;

  const sharesBox = document.getElementById("shares")!;
  const foundBox = document.getElementById("treemap-found")!;
  const riskBox = document.getElementById("treemap-risk")!;
  const gapBox = document.getElementById("gap")!;
  const crumbBox = document.getElementById("breadcrumb")!;
  const controlsBox = document.getElementById("controls")!;
  const errorBox = document.getElementById("error")!;
  const panel = new TracebackPanel(
    document.getElementById("traceback")! as HTMLElement, api,
    () => update({ selectedCode: null }),
  );

  const currentState = (): ViewState => parseState(location.hash);

  const update = (patch: Partial<ViewState>): void => {
    const next = { ...currentState(), ...patch };
    const hash = serializeState(next);
    if (hash === location.hash || (hash === "" && location.hash === "")) {
      void refresh();
    } else {
      location.hash = hash;
    }
  };

  const callbacks = {
    onBranch: (nodeId: number) => update({ branch: String(nodeId), selectedCode: null }),
    onDisease: (code: string) => update({ selectedCode: code }),
  };

  const renderControls = (state: ViewState): void => {
    clear(controlsBox);
    const children: (HTMLElement | string)[] = [];
    if (state.branch !== null) {
      children.push(el("button", {
        class: "control reset",
        click: () => update({ branch: null }),
      }, ["whole classification"]));
    }
    for (const source of config.sources ?? []) {
      const checked = state.sources.includes(source);
      children.push(el("label", { class: "control source" }, [
        el("input", {
          type: "checkbox",
          ...(checked ? { checked: "checked" } : {}),
          change: () => {
            const sources = checked
              ? state.sources.filter((s) => s !== source)
              : [...state.sources, source];
            update({ sources });
          },
        }),
        ` ${source}`,
      ]));
    }
    if (config.filter) {
      children.push(el("label", { class: "control filter" }, [
        el("input", {
          type: "checkbox",
          ...(state.filterOn ? { checked: "checked" } : {}),
          change: () => update({ filterOn: !state.filterOn }),
        }),
        ` ${config.filter} filter`,
      ]));
    }
    const depth = el("select", {
      class: "control depth",
      change: (event: Event) =>
        update({ maxLevels: Number((event.target as HTMLSelectElement).value) }),
    });
    for (const level of [1, 2, 3, 4, 5]) {
      const option = el("option", { value: String(level) }, [`${level} level(s)`]);
      if (level === state.maxLevels) option.setAttribute("selected", "selected");
      depth.append(option);
    }
    children.push(el("label", { class: "control" }, ["depth: ", depth]));
    controlsBox.append(...children);
  };

  const renderBreadcrumb = async (state: ViewState): Promise<void> => {
    clear(crumbBox);
    if (state.branch === null) {
      crumbBox.append("Whole classification");
      return;
    }
    const slice = await api.taxonomy(state.branch, 1);
    const root = slice.nodes[0];
    crumbBox.append(`Branch: ${root ? root.title : state.branch}`);
  };

  const refresh = async (): Promise<void> => {
    const state = currentState();
    const token = ++fetchToken;
    const subset = subsetOf(state, config);
    renderControls(state);
    errorBox.textContent = "";
    try {
      const [shares, found, risk, gap] = await Promise.all([
        api.shares(state.branch, subset),
        api.occurrences("found" as RoleName, state.branch, state.maxLevels, subset),
        api.occurrences("at_risk" as RoleName, state.branch, state.maxLevels, subset),
        api.gap(config.gapK ?? 15, subset),
      ]);
      await renderBreadcrumb(state);
      if (token !== fetchToken) return; // a newer view state owns the screen
      paintShares(sharesBox, buildSharesModel(shares), callbacks);
      paintTreemap(foundBox, buildTreemapModel(found.trees, {
        x: 0, y: 0, w: TREEMAP_W, h: TREEMAP_H,
      }), TREEMAP_W, TREEMAP_H, callbacks);
      paintTreemap(riskBox, buildTreemapModel(risk.trees, {
        x: 0, y: 0, w: TREEMAP_W, h: TREEMAP_H,
      }), TREEMAP_W, TREEMAP_H, callbacks);
      paintGap(gapBox, buildGapModel(gap), callbacks);
      if (state.selectedCode) {
        await panel.show(state.selectedCode, subset);
      } else {
        panel.hide();
      }
    } catch (error) {
      if (token === fetchToken) errorBox.textContent = String(error);
    }
  };

  window.addEventListener("hashchange", () => {
    void refresh();
  });
  if (location.hash === "" && serializeState(DEFAULT_STATE) !== "") {
    location.hash = serializeState(DEFAULT_STATE);
  }
  void refresh();
}

start();
