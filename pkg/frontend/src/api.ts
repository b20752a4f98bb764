import type {
  CampaignStartRequest,
  CampaignStatus,
  PresetsResponse,
  SimulateRequest,
  SimulateResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: unknown,
    message?: string,
  ) {
    super(message ?? `request failed with status ${status}`);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const detail = body && typeof body === "object" && "error" in body
      ? String((body as { error: unknown }).error)
      : undefined;
    throw new ApiError(response.status, body, detail);
  }
  return body as T;
}

/** Thin client for the local simulation service. */
export class ApiClient {
  constructor(private readonly base: string = "") {}

  presets(): Promise<PresetsResponse> {
    return fetch(`${this.base}/api/presets`).then((r) => asJson<PresetsResponse>(r));
  }

  simulate(request: SimulateRequest): Promise<SimulateResponse> {
    return fetch(`${this.base}/api/simulate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    }).then((r) => asJson<SimulateResponse>(r));
  }

  startCampaign(request: CampaignStartRequest): Promise<{ campaign_id: string }> {
    return fetch(`${this.base}/api/campaign/start`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    }).then((r) => asJson<{ campaign_id: string }>(r));
  }

  campaignStatus(id: string): Promise<CampaignStatus> {
    return fetch(`${this.base}/api/campaign/${id}/status`).then((r) =>
      asJson<CampaignStatus>(r),
    );
  }

  stopCampaign(id: string): Promise<unknown> {
    return fetch(`${this.base}/api/campaign/${id}/stop`, { method: "POST" }).then(
      (r) => asJson(r),
    );
  }
}

export function buildSimulateRequest(
  gait: string | SimulateRequest["gait"],
  options: Partial<Omit<SimulateRequest, "gait">> = {},
): SimulateRequest {
  return {
    gait,
    slope_deg: options.slope_deg ?? 25.0,
    duration_s: options.duration_s ?? 120.0,
    dt_s: options.dt_s ?? 0.01,
    target_yaw_deg: options.target_yaw_deg ?? 90.0,
    seed: options.seed ?? 0,
    stop_at_target: options.stop_at_target ?? false,
  };
}
