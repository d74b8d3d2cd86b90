/** Squarified treemap layout.
 *
 * Pure geometry: given positive item values and a target rectangle,
 * produce one sub-rectangle per item with area exactly proportional to its
 * value, preferring near-square aspect ratios (rows are flushed whenever
 * adding the next item would worsen the worst aspect ratio in the row).
 */

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface TreemapItem {
  id: string;
  value: number;
}

/** Worst aspect ratio a row would have when laid along a side of length `side`. */
function worstAspect(areas: number[], side: number): number {
  const sum = areas.reduce((a, b) => a + b, 0);
  if (sum <= 0 || side <= 0) return Infinity;
  const max = Math.max(...areas);
  const min = Math.min(...areas);
  const s2 = sum * sum;
  const w2 = side * side;
  return Math.max((w2 * max) / s2, s2 / (w2 * min));
}

export function layoutTreemap(items: TreemapItem[], rect: Rect): Map<string, Rect> {
  const out = new Map<string, Rect>();
  const positive = items.filter((item) => item.value > 0);
  if (!positive.length || rect.w <= 0 || rect.h <= 0) return out;

  const totalValue = positive.reduce((acc, item) => acc + item.value, 0);
  const scale = (rect.w * rect.h) / totalValue;
  const scaled = positive
    .map((item) => ({ id: item.id, area: item.value * scale }))
    .sort((a, b) => b.area - a.area);

  let free: Rect = { ...rect };
  let row: { id: string; area: number }[] = [];

  const flushRow = () => {
    if (!row.length) return;
    const rowArea = row.reduce((acc, item) => acc + item.area, 0);
    if (free.w >= free.h) {
      // Vertical strip on the left edge.
      const stripWidth = rowArea / free.h;
      let y = free.y;
      for (const item of row) {
        const itemHeight = item.area / stripWidth;
        out.set(item.id, { x: free.x, y, w: stripWidth, h: itemHeight });
        y += itemHeight;
      }
      free = { x: free.x + stripWidth, y: free.y, w: free.w - stripWidth, h: free.h };
    } else {
      // Horizontal strip along the top edge.
      const stripHeight = rowArea / free.w;
      let x = free.x;
      for (const item of row) {
        const itemWidth = item.area / stripHeight;
        out.set(item.id, { x, y: free.y, w: itemWidth, h: stripHeight });
        x += itemWidth;
      }
      free = { x: free.x, y: free.y + stripHeight, w: free.w, h: free.h - stripHeight };
    }
    row = [];
  };

  for (const item of scaled) {
    const side = Math.min(free.w, free.h);
    const current = row.map((r) => r.area);
    if (row.length && worstAspect([...current, item.area], side) > worstAspect(current, side)) {
      flushRow();
    }
    row.push(item);
  }
  flushRow();
  return out;
}

/** Shrink a rectangle on all sides (used to inset children under a header). */
export function insetRect(rect: Rect, top: number, pad: number): Rect {
  return {
    x: rect.x + pad,
    y: rect.y + top,
    w: Math.max(0, rect.w - 2 * pad),
    h: Math.max(0, rect.h - top - pad),
  };
}
