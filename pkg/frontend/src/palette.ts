/** Map the server's stable color keys to actual colors.
 *
 * The server assigns every node a (top_branch_ordinal, within_ordinal)
 * pair; this module is the single place that turns those pairs into CSS
 * colors. All charts go through `colorFor`, which is what guarantees the
 * same branch is painted identically in the shares chart and both
 * treemaps.
 */

import type { ColorKey } from "./api.js";

/** One hue per top-level branch, cycled when the classification has more chapters. */
const BASE_HUES = [210, 120, 0, 35, 275, 175, 320, 55, 95, 240, 15, 145];

const SATURATION = 62;
const LIGHTNESS_STEPS = [42, 52, 62, 70, 77, 83];

export function colorFor(key: ColorKey): string {
  const [top, within] = key;
  const hue = BASE_HUES[((top % BASE_HUES.length) + BASE_HUES.length) % BASE_HUES.length];
  const lightness = LIGHTNESS_STEPS[within % LIGHTNESS_STEPS.length];
  return `hsl(${hue}, ${SATURATION}%, ${lightness}%)`;
}

export const EMPTY_COLOR = "hsl(0, 0%, 85%)";

export function colorOrEmpty(key: ColorKey | null, empty: boolean): string {
  if (empty || key === null) return EMPTY_COLOR;
  return colorFor(key);
}
