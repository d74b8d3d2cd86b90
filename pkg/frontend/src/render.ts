/** SVG painters for the three chart types.
 *
 * Painters take the pure models from transforms.ts and emit DOM; they hold
 * no logic beyond geometry-to-pixels and click forwarding.
 */

import { clear, el, formatPercent, svgEl } from "./dom.js";
import type { GapRowModel, ShareBarModel, TreemapCellModel } from "./transforms.js";

export interface ChartCallbacks {
  onBranch(nodeId: number): void;
  onDisease(code: string): void;
}

const SHARES_WIDTH = 860;
const BAR_HEIGHT = 34;
const BAR_GAP = 14;
const LABEL_WIDTH = 130;

export function paintShares(container: Element, bars: ShareBarModel[],
                            callbacks: ChartCallbacks): void {
  clear(container);
  const height = bars.length * (BAR_HEIGHT + BAR_GAP);
  const svg = svgEl("svg", {
    viewBox: `0 0 ${SHARES_WIDTH} ${height}`,
    class: "shares-chart",
    role: "img",
  });
  const plotWidth = SHARES_WIDTH - LABEL_WIDTH;
  bars.forEach((bar, index) => {
    const y = index * (BAR_HEIGHT + BAR_GAP);
    svg.append(svgEl("text", {
      x: 0, y: y + BAR_HEIGHT / 2 + 4, class: "bar-label",
    }, [bar.empty ? `${bar.label} (empty)` : bar.label]));
    svg.append(svgEl("rect", {
      x: LABEL_WIDTH, y, width: plotWidth, height: BAR_HEIGHT, class: "bar-track",
    }));
    for (const segment of bar.segments) {
      if (segment.share <= 0) continue;
      const rect = svgEl("rect", {
        x: LABEL_WIDTH + segment.offset * plotWidth,
        y,
        width: segment.share * plotWidth,
        height: BAR_HEIGHT,
        fill: segment.color,
        class: "share-segment",
        click: () => callbacks.onBranch(segment.nodeId),
      });
      rect.append(svgEl("title", {}, [
        `${segment.title}: ${formatPercent(segment.share)} (${segment.count})`,
      ]));
      svg.append(rect);
    }
  });
  container.append(svg);
}

export function paintTreemap(container: Element, cells: TreemapCellModel[],
                             width: number, height: number,
                             callbacks: ChartCallbacks): void {
  clear(container);
  if (!cells.length) {
    container.append(el("p", { class: "empty-state" },
                        ["No occurrences in this selection."]));
    return;
  }
  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`, class: "treemap", role: "img",
  });
  for (const cell of cells) {
    const group = svgEl("g", {
      class: cell.header ? "cell header" : "cell",
      click: () => callbacks.onBranch(cell.nodeId),
    });
    group.append(svgEl("rect", {
      x: cell.rect.x, y: cell.rect.y,
      width: cell.rect.w, height: cell.rect.h,
      fill: cell.color,
      "fill-opacity": cell.header ? 0.25 : 0.9,
      stroke: "#fff",
      "stroke-width": 1,
    }));
    const label = `${cell.title} (${cell.value})`;
    if (cell.rect.w > 60 && cell.rect.h > 14) {
      group.append(svgEl("text", {
        x: cell.rect.x + 4,
        y: cell.rect.y + 12,
        class: cell.header ? "cell-label header-label" : "cell-label",
      }, [truncate(label, cell.rect.w / 6)]));
    }
    group.append(svgEl("title", {}, [label]));
    svg.append(group);
  }
  container.append(svg);
}

const GAP_WIDTH = 860;
const GAP_ROW = 38;
const GAP_LABEL = 240;

export function paintGap(container: Element, rows: GapRowModel[],
                         callbacks: ChartCallbacks): void {
  clear(container);
  if (!rows.length) {
    container.append(el("p", { class: "empty-state" },
                        ["No diseases in this selection."]));
    return;
  }
  const plotWidth = GAP_WIDTH - GAP_LABEL;
  const maxFreq = Math.max(...rows.map((r) => Math.max(r.freqFound, r.freqRisk)), 1e-9);
  const svg = svgEl("svg", {
    viewBox: `0 0 ${GAP_WIDTH} ${rows.length * GAP_ROW}`,
    class: "gap-chart", role: "img",
  });
  rows.forEach((row, index) => {
    const y = index * GAP_ROW;
    const group = svgEl("g", {
      class: "gap-row",
      click: () => callbacks.onDisease(row.code),
    });
    group.append(svgEl("text", {
      x: 0, y: y + GAP_ROW / 2 + 4, class: "bar-label",
    }, [truncate(row.label, 36)]));
    group.append(svgEl("rect", {
      x: GAP_LABEL, y: y + 4,
      width: (row.freqRisk / maxFreq) * plotWidth, height: 12,
      fill: row.color, class: "gap-risk",
    }, [svgEl("title", {}, [`at risk: ${formatPercent(row.freqRisk)}`])]));
    group.append(svgEl("rect", {
      x: GAP_LABEL, y: y + 19,
      width: (row.freqFound / maxFreq) * plotWidth, height: 12,
      fill: row.color, "fill-opacity": 0.45, class: "gap-found",
    }, [svgEl("title", {}, [`in corpus: ${formatPercent(row.freqFound)}`])]));
    group.append(svgEl("text", {
      x: GAP_WIDTH - 2, y: y + GAP_ROW / 2 + 4,
      class: "gap-value", "text-anchor": "end",
    }, [`${row.gap >= 0 ? "+" : ""}${(row.gap * 100).toFixed(1)} pp`]));
    svg.append(group);
  });
  container.append(svg);
}

function truncate(text: string, maxChars: number): string {
  const limit = Math.max(3, Math.floor(maxChars));
  return text.length > limit ? `${text.slice(0, limit - 1)}…` : text;
}
