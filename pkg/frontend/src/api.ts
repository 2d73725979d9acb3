/**
 * Typed client for the session API. The UI never derives numbers itself:
 * everything it shows comes from these payloads.
 */

export interface DatasetInfo {
  n_publications: number;
  n_references_distinct: number;
  n_cr_total: number;
  n_clusters: number;
  min_rpy: number | null;
  max_rpy: number | null;
}

export interface Row {
  id: number;
  raw: string;
  year: number | null;
  n_cr: number;
  pct_in_year: number;
  pct_all_years: number;
  author: string;
  last_name: string;
  first_initial: string;
  source: string;
  source_title: string;
  title_short: string;
  volume: string | null;
  page: string | null;
  doi: string | null;
  cluster_main: number;
  cluster_sub: number;
  cluster_size: number;
}

export interface SpectrumPoint {
  year: number;
  n_cr: number;
  deviation: number;
}

export interface SpectrumResponse {
  revision: number;
  half_window: number;
  points: SpectrumPoint[];
}

export interface ReferencesResponse {
  revision: number;
  total: number;
  offset: number;
  rows: Row[];
  undo_depth: number;
}

export interface InfoResponse {
  revision: number;
  info: DatasetInfo;
}

export interface MutationResponse {
  revision: number;
  info: DatasetInfo;
  affected_rows: Row[];
  undo_depth: number;
  undone?: boolean;
  warning?: string;
}

export type ManualAction = "same" | "different" | "extract";

export interface ImportSettings {
  max_crs?: number;
  min_cry?: number;
  max_cry?: number;
}

/** The server rejected a stale mutation; the UI must reload, never overwrite. */
export class ConflictError extends Error {
  constructor(public serverRevision: number | null, detail: string) {
    super(detail);
  }
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

type Fetch = typeof fetch;

export class ApiClient {
  constructor(private base = "", private fetchImpl: Fetch = fetch) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    if (response.status === 409) {
      const body = await response.json().catch(() => ({}));
      throw new ConflictError(body.revision ?? null, body.detail ?? "revision conflict");
    }
    if (!response.ok) {
      const body = await response.json().catch(() => ({}));
      throw new ApiError(response.status, JSON.stringify(body.detail ?? body));
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  createSession(): Promise<{ id: string; revision: number }> {
    return this.request("/sessions", { method: "POST" });
  }

  importFiles(sid: string, files: File[], settings: ImportSettings = {}): Promise<InfoResponse> {
    const form = new FormData();
    for (const file of files) form.append("files", file);
    for (const [key, value] of Object.entries(settings)) {
      if (value !== undefined) form.append(key, String(value));
    }
    return this.request(`/sessions/${sid}/import`, { method: "POST", body: form });
  }

  info(sid: string): Promise<InfoResponse> {
    return this.request(`/sessions/${sid}/info`);
  }

  spectrum(sid: string, opts: { from?: number; to?: number; halfWindow?: number } = {}): Promise<SpectrumResponse> {
    const params = new URLSearchParams();
    if (opts.from !== undefined) params.set("from", String(opts.from));
    if (opts.to !== undefined) params.set("to", String(opts.to));
    if (opts.halfWindow !== undefined) params.set("half_window", String(opts.halfWindow));
    const query = params.toString();
    return this.request(`/sessions/${sid}/spectrum${query ? "?" + query : ""}`);
  }

  references(sid: string, opts: { sort?: string; offset?: number; limit?: number } = {}): Promise<ReferencesResponse> {
    const params = new URLSearchParams();
    if (opts.sort) params.set("sort", opts.sort);
    if (opts.offset !== undefined) params.set("offset", String(opts.offset));
    if (opts.limit !== undefined) params.set("limit", String(opts.limit));
    const query = params.toString();
    return this.request(`/sessions/${sid}/references${query ? "?" + query : ""}`);
  }

  cluster(sid: string, threshold: number, revision?: number): Promise<MutationResponse> {
    return this.post(`/sessions/${sid}/cluster`, { threshold, revision });
  }

  refine(
    sid: string,
    attributes: { volume: boolean; page: boolean; doi: boolean },
    revision?: number,
  ): Promise<MutationResponse> {
    return this.post(`/sessions/${sid}/refine`, { ...attributes, revision });
  }

  manual(sid: string, action: ManualAction, ids: number[], revision?: number): Promise<MutationResponse> {
    return this.post(`/sessions/${sid}/manual`, { action, ids, revision });
  }

  undo(sid: string, revision?: number): Promise<MutationResponse> {
    return this.post(`/sessions/${sid}/undo`, { revision });
  }

  merge(sid: string, revision?: number): Promise<MutationResponse> {
    return this.post(`/sessions/${sid}/merge`, { revision });
  }

  filter(sid: string, body: Record<string, unknown>, revision?: number): Promise<InfoResponse> {
    return this.post(`/sessions/${sid}/filter`, { ...body, revision });
  }

  exportUrls(sid: string): { table: string; chart: string; svg: string } {
    const prefix = `${this.base}/sessions/${sid}/export`;
    return {
      table: `${prefix}/table.csv`,
      chart: `${prefix}/chart.csv`,
      svg: `${prefix}/chart.svg`,
    };
  }
}
