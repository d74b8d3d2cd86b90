// Deployment configuration for the dashboard. Edit per installation:
// - apiBase: prefix for API requests ("" when the dashboard is served by
//   the API process itself, e.g. via `riskatlas serve --ui`).
// - filter: name of the topical filter configured at ingest time, or null.
// - sources: data-source names offered in the source selector.
// - gapK: number of diseases shown in the gap chart.
window.ATLAS_UI_CONFIG = {
  apiBase: "",
  filter: "covid",
  sources: ["medrxiv", "pubmed"],
  gapK: 15,
};
