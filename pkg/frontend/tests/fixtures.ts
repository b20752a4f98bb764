import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { CampaignRecordDoc, GaitDoc, PresetsResponse, SimulateRequest, SimulateResponse, EpisodeSummary } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

function load<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8")) as T;
}

export const presetsFixture = load<PresetsResponse>("presets.json");

export const simulateParity = load<{
  request: SimulateRequest;
  cli_summary: EpisodeSummary;
  api_response: SimulateResponse;
}>("simulate_parity.json");

export const campaignFixture = load<{
  records: CampaignRecordDoc[];
  decoded_iteration_19: GaitDoc;
}>("campaign_log.json");

export const decodeParity = load<Record<string, { x: number[]; gait: GaitDoc }>>(
  "decode_parity.json",
);
