/**
 * REST client for the evaluation service. The UI computes no figures of
 * merit itself: every displayed number originates from a response.
 *
 * At most one heatmap request is in flight; a newer request aborts the
 * older one.
 */

import { LayoutDocument } from "./schema.js";

export interface ParamsSpec {
  preset?: string;
  f_c_hz?: number;
  p_t_dbw_m2?: number;
  p_th_dbw_m2?: number;
  sigma2_dbw?: number;
}

export interface FomPayload {
  g_i: number;
  g_p: number;
  gamma_o: number;
  gamma_b: number;
  g_i_db: number;
  g_p_db: number;
  gamma_b_db: number;
}

export interface BreakdownPayload {
  p_o: number;
  i_o: number;
  p_l: number;
  i_l: number;
  p_n: number;
  i_n: number;
  p_b: number;
  i_b: number;
}

export interface PointResult {
  x_m: number;
  y_m: number;
  fom: FomPayload;
  breakdown: BreakdownPayload;
}

export interface HeatmapResult {
  origin: [number, number];
  cell_size: number;
  nx: number;
  ny: number;
  gamma_o: number;
  g_i: (number | null)[][];
  g_p: (number | null)[][];
  gamma_b: (number | null)[][];
  room_averages: Record<string, { g_i: number; g_p: number }>;
  global_average: { g_i: number; g_p: number } | null;
  valid_cells: number;
}

export interface ServiceErrorBody {
  error: string;
  message?: string;
  gaps_rad?: [number, number][];
  wall_id?: string;
  distance_m?: number;
}

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ServiceErrorBody,
  ) {
    super(body.message ?? body.error);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private heatmapAbort: AbortController | null = null;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async post<T>(path: string, payload: unknown, signal?: AbortSignal): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
      signal,
    });
    const body = await resp.json();
    if (!resp.ok) {
      throw new ServiceError(resp.status, body as ServiceErrorBody);
    }
    return body as T;
  }

  async healthz(): Promise<boolean> {
    try {
      const resp = await this.fetchFn(`${this.baseUrl}/healthz`);
      return resp.ok;
    } catch {
      return false;
    }
  }

  async presets(): Promise<Record<string, Record<string, number>>> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/presets`);
    const body = await resp.json();
    return body.result.presets;
  }

  async evaluate(
    layout: LayoutDocument,
    x: number,
    y: number,
    params: ParamsSpec,
  ): Promise<{ result: PointResult }> {
    return this.post("/api/evaluate", { layout, x, y, params });
  }

  /** Newer heatmap requests cancel the one in flight. */
  async heatmap(
    layout: LayoutDocument,
    resolution: number,
    params: ParamsSpec,
  ): Promise<{ result: HeatmapResult }> {
    this.heatmapAbort?.abort();
    const abort = new AbortController();
    this.heatmapAbort = abort;
    try {
      return await this.post("/api/heatmap", { layout, resolution, params }, abort.signal);
    } finally {
      if (this.heatmapAbort === abort) this.heatmapAbort = null;
    }
  }
}
