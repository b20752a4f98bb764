// Application wiring: preset selection, edit-and-run with overlays, and the
// campaign monitor panel.

import { ApiClient, ApiError, buildSimulateRequest } from "./api.js";
import { pollCampaign, renderCampaignTable, type PollHandle } from "./campaign.js";
import { pathChartSvg, RunStore, yawChartSvg } from "./charts.js";
import { decodeVector } from "./clamp.js";
import { GaitEditor, summaryText } from "./editor.js";
import type { CampaignStatus, PresetsResponse } from "./types.js";

const api = new ApiClient();
const runs = new RunStore();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setBanner(message: string | null): void {
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = message ?? "";
  banner.style.display = message ? "block" : "none";
}

async function boot(): Promise<void> {
  let presets: PresetsResponse;
  try {
    presets = await api.presets();
  } catch (error) {
    setBanner("simulation service unreachable — start it with: regolith serve --static-dir frontend/dist");
    throw error;
  }
  setBanner(null);

  const dims = presets.space.dims;
  const presetSelect = el<HTMLSelectElement>("preset-select");
  for (const name of Object.keys(presets.presets).sort()) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    presetSelect.appendChild(option);
  }
  presetSelect.value = "TRRP";

  const editor = new GaitEditor(document, presets.presets.TRRP, dims);
  editor.mount(el("editor"));

  presetSelect.addEventListener("change", () => {
    editor.loadGait(presets.presets[presetSelect.value], presetSelect.value);
  });

  const redraw = () => {
    el("yaw-chart").innerHTML = yawChartSvg(runs.all(), 560, 300, Number(el<HTMLInputElement>("target-deg").value));
    el("path-chart").innerHTML = pathChartSvg(runs.all());
  };

  el<HTMLButtonElement>("run-button").addEventListener("click", async () => {
    const { gait } = editor.readGait();
    const request = buildSimulateRequest(gait, {
      slope_deg: Number(el<HTMLInputElement>("slope-deg").value),
      duration_s: Number(el<HTMLInputElement>("duration-s").value),
      seed: Number(el<HTMLInputElement>("seed").value),
      target_yaw_deg: Number(el<HTMLInputElement>("target-deg").value),
    });
    const button = el<HTMLButtonElement>("run-button");
    button.disabled = true;
    try {
      const response = await api.simulate(request);
      editor.recordSummary(response.summary);
      el("summary").textContent = summaryText(response.summary);
      const label = `${gait.label}#${runs.all().length + 1}`;
      runs.add(label, response);
      redraw();
      setBanner(null);
    } catch (error) {
      setBanner(error instanceof ApiError ? `simulate failed: ${error.message}` : "service unreachable");
    } finally {
      button.disabled = false;
    }
  });

  el<HTMLButtonElement>("clear-button").addEventListener("click", () => {
    runs.clear();
    redraw();
  });

  // ---- campaign panel ----
  let poller: PollHandle | null = null;
  let activeCampaign: string | null = null;

  const renderStatus = (status: CampaignStatus) => {
    el("campaign-state").textContent =
      `${status.campaign_id}: ${status.running ? "running" : "finished"} ` +
      `(${status.iterations_completed}/${status.budget})` +
      (status.best_so_far === null
        ? ""
        : ` — best ${(status.best_so_far * 180 / Math.PI).toFixed(1)}°`);
    const tableHost = el("campaign-table-host");
    tableHost.textContent = "";
    tableHost.appendChild(
      renderCampaignTable(document, status.records, (record) => {
        editor.loadGait(decodeVector(record.x, dims, `iteration-${record.iteration}`), null);
      }),
    );
  };

  const watch = (id: string) => {
    poller?.cancel();
    activeCampaign = id;
    poller = pollCampaign(api, id, {
      onStatus: renderStatus,
      onMissing: () => {
        el("campaign-state").textContent = "no active campaign";
      },
      onError: () => setBanner("campaign status poll failed"),
    });
  };

  el<HTMLButtonElement>("campaign-start").addEventListener("click", async () => {
    try {
      const started = await api.startCampaign({
        budget: Number(el<HTMLInputElement>("campaign-budget").value),
        n_random: 4,
        seed_gait: "TRRP",
        slope_deg: Number(el<HTMLInputElement>("slope-deg").value),
        duration_s: Number(el<HTMLInputElement>("duration-s").value),
        dt_s: 0.02,
        rng_seed: Number(el<HTMLInputElement>("seed").value),
      });
      watch(started.campaign_id);
    } catch (error) {
      setBanner(
        error instanceof ApiError && error.status === 409
          ? "a campaign is already running"
          : "failed to start campaign",
      );
    }
  });

  el<HTMLButtonElement>("campaign-stop").addEventListener("click", async () => {
    if (activeCampaign) {
      await api.stopCampaign(activeCampaign).catch(() => setBanner("stop failed"));
    }
  });

  el<HTMLButtonElement>("campaign-attach").addEventListener("click", () => {
    const id = el<HTMLInputElement>("campaign-id").value.trim();
    if (id) watch(id);
  });

  redraw();
}

void boot();
