/** Typed client for the riskatlas HTTP API.
 *
 * Response shapes mirror docs/api.md in the repository root. The client does
 * no aggregation of its own: every number displayed comes verbatim from a
 * response body.
 */

export type ColorKey = [number, number];

export interface NodePayload {
  node_id: number;
  code: string | null;
  title: string;
  depth: number;
  parent: number | null;
  bfs_ordinal: number;
  color_key: ColorKey;
}

export interface TaxonomySlice {
  branch: number | null;
  max_levels: number;
  nodes: NodePayload[];
}

export interface SubsetInfo {
  sources: string[] | null;
  filter: string | null;
  size: number;
  docs_with_code: number;
  docs_with_risk_code: number;
}

export type RoleName = "catalog" | "found" | "at_risk";

export interface ShareRowPayload extends NodePayload {
  shares: Record<RoleName, number>;
  counts: Record<RoleName, number>;
}

export interface SharesPayload {
  branch: number | null;
  subset: SubsetInfo;
  empty_roles: Record<RoleName, boolean>;
  totals: Record<RoleName, number>;
  own: Record<RoleName, { count: number; share: number }>;
  rows: ShareRowPayload[];
}

export interface RollupNodePayload {
  node_id: number;
  code: string | null;
  title: string;
  depth: number;
  bfs_ordinal: number;
  color_key: ColorKey;
  own: number;
  total: number;
  children: RollupNodePayload[];
}

export interface OccurrencesPayload {
  branch: number | null;
  role: RoleName;
  max_levels: number;
  subset: SubsetInfo;
  trees: RollupNodePayload[];
}

export interface GapRowPayload {
  code: string;
  title: string | null;
  node_id: number | null;
  freq_found: number;
  freq_risk: number;
  gap: number;
  color_key: ColorKey | null;
}

export interface GapPayload {
  k: number;
  normalization: string;
  subset: SubsetInfo;
  rows: GapRowPayload[];
}

export interface DocumentRowPayload {
  source: string;
  doc_id: string;
  title: string;
  at_risk: boolean;
}

export interface DocumentsPayload {
  code: string;
  subset: SubsetInfo;
  total: number;
  rows: DocumentRowPayload[];
  next_cursor: string | null;
}

export interface SubsetQuery {
  sources: string[];
  filter: string | null;
}

function query(params: Record<string, string | number | string[] | null | undefined>): string {
  const parts: string[] = [];
  for (const [key, value] of Object.entries(params)) {
    if (value === null || value === undefined || value === "") continue;
    if (Array.isArray(value)) {
      for (const item of value) parts.push(`${key}=${encodeURIComponent(item)}`);
    } else {
      parts.push(`${key}=${encodeURIComponent(String(value))}`);
    }
  }
  return parts.length ? `?${parts.join("&")}` : "";
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        detail = ((await response.json()) as { detail?: string }).detail ?? detail;
      } catch {
        /* non-JSON error body */
      }
      throw new Error(`${path}: ${detail}`);
    }
    return (await response.json()) as T;
  }

  taxonomy(branch: string | null, maxLevels: number): Promise<TaxonomySlice> {
    return this.get(`/taxonomy${query({ branch, max_levels: maxLevels })}`);
  }

  shares(branch: string | null, subset: SubsetQuery): Promise<SharesPayload> {
    return this.get(`/indicators/shares${query({
      branch, sources: subset.sources, filter: subset.filter,
    })}`);
  }

  occurrences(role: RoleName, branch: string | null, maxLevels: number,
              subset: SubsetQuery): Promise<OccurrencesPayload> {
    return this.get(`/indicators/occurrences${query({
      role, branch, max_levels: maxLevels,
      sources: subset.sources, filter: subset.filter,
    })}`);
  }

  gap(k: number, subset: SubsetQuery): Promise<GapPayload> {
    return this.get(`/indicators/gap${query({
      k, sources: subset.sources, filter: subset.filter,
    })}`);
  }

  documents(code: string, subset: SubsetQuery, cursor: string | null,
            limit = 20): Promise<DocumentsPayload> {
    return this.get(`/documents${query({
      code, cursor, limit, sources: subset.sources, filter: subset.filter,
    })}`);
  }
}
