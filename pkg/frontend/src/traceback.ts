/** Document traceback panel: the documents behind a selected disease. */

import type { ApiClient, DocumentsPayload, SubsetQuery } from "./api.js";
import { clear, el } from "./dom.js";

export class TracebackPanel {
  private cursor: string | null = null;

  constructor(private readonly container: HTMLElement,
              private readonly api: ApiClient,
              private readonly onClose: () => void) {}

  hide(): void {
    clear(this.container);
    this.container.classList.add("hidden");
  }

  async show(code: string, subset: SubsetQuery): Promise<void> {
    this.container.classList.remove("hidden");
    clear(this.container);
    this.cursor = null;
    const list = el("ul", { class: "doc-list" });
    const status = el("p", { class: "doc-status" }, ["Loading…"]);
    const more = el("button", { class: "load-more hidden" }, ["Load more"]);
    this.container.append(
      el("div", { class: "panel-head" }, [
        el("h2", {}, [`Documents mentioning ${code}`]),
        el("button", { class: "close", click: () => this.onClose() }, ["×"]),
      ]),
      status, list, more,
    );

    const loadPage = async () => {
      const payload: DocumentsPayload = await this.api.documents(
        code, subset, this.cursor);
      for (const row of payload.rows) {
        list.append(el("li", { class: row.at_risk ? "doc at-risk" : "doc" }, [
          el("span", { class: "doc-source" }, [`${row.source} / ${row.doc_id}`]),
          el("span", { class: "doc-title" }, [row.title || "(untitled)"]),
          row.at_risk ? el("span", { class: "risk-badge" }, ["at risk"]) : "",
        ]));
      }
      this.cursor = payload.next_cursor;
      status.textContent = `${payload.total} document(s) in the current selection`;
      more.classList.toggle("hidden", this.cursor === null);
    };

    more.addEventListener("click", () => {
      void loadPage();
    });
    try {
      await loadPage();
    } catch (error) {
      status.textContent = String(error);
    }
  }
}
