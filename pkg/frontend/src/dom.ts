/** Minimal DOM and SVG element builders. */

const SVG_NS = "http://www.w3.org/2000/svg";

type Attrs = Record<string, string | number | ((event: Event) => void)>;

function assign(node: Element, attrs: Attrs): void {
  for (const [key, value] of Object.entries(attrs)) {
    if (typeof value === "function") {
      node.addEventListener(key, value);
    } else {
      node.setAttribute(key, String(value));
    }
  }
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, attrs: Attrs = {}, children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  assign(node, attrs);
  node.append(...children);
  return node;
}

export function svgEl(tag: string, attrs: Attrs = {},
                      children: (Node | string)[] = []): SVGElement {
  const node = document.createElementNS(SVG_NS, tag) as SVGElement;
  assign(node, attrs);
  node.append(...children);
  return node;
}

export function clear(node: Element): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function formatPercent(value: number): string {
  return `${(value * 100).toFixed(1)}%`;
}
