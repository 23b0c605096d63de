/** Typed client for the dpcidx HTTP API. */

export interface SummaryPayload {
  n: number;
  d: number;
  bbox: { lo: number[]; hi: number[] };
  indexes: string[];
}

export interface ProfilePayload {
  dc: number;
  index: string;
  tau: number | null;
  n: number;
  rho: number[];
  delta: number[];
  mu: number[];
  resolved: boolean[];
  gamma: number[];
  degraded: boolean;
  timings: { rho_seconds: number; delta_seconds: number };
}

export interface ClusterRequest {
  dc: number;
  index?: string;
  tau?: number | null;
  centers?: number[];
  topk?: number;
  rho_min?: number;
  delta_min?: number;
}

export interface ClusterPayload {
  dc: number;
  centers: number[];
  labels: number[];
  outliers: number[];
  unassigned: number[];
  sizes: number[];
  index: string;
}

export interface PointsPayload {
  total: number;
  ids: number[];
  points: number[][];
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(`API ${status}: ${detail}`);
  }
}

async function parse<T>(res: Response): Promise<T> {
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = (await res.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(res.status, detail);
  }
  return (await res.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  summary(): Promise<SummaryPayload> {
    return fetch(`${this.baseUrl}/api/summary`).then((r) => parse(r));
  }

  profile(dc: number, index: string, tau?: number | null): Promise<ProfilePayload> {
    return fetch(`${this.baseUrl}/api/profile`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ dc, index, tau: tau ?? null }),
    }).then((r) => parse(r));
  }

  cluster(req: ClusterRequest): Promise<ClusterPayload> {
    return fetch(`${this.baseUrl}/api/cluster`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    }).then((r) => parse(r));
  }

  points(sample?: number): Promise<PointsPayload> {
    const qs = sample === undefined ? "" : `?sample=${sample}`;
    return fetch(`${this.baseUrl}/api/points${qs}`).then((r) => parse(r));
  }
}
