// Campaign monitoring: a 1 s status poller and the per-iteration table with
// failure markers and a load-into-editor action.

import { ApiClient, ApiError } from "./api.js";
import type { CampaignRecordDoc, CampaignStatus } from "./types.js";

export interface PollHandle {
  cancel(): void;
}

export interface PollCallbacks {
  onStatus(status: CampaignStatus): void;
  /** Called when the campaign id is unknown (404). */
  onMissing(): void;
  onError?(error: unknown): void;
}

/**
 * Poll campaign status once per interval until the campaign stops running,
 * the id turns out to be unknown, or the handle is cancelled.
 */
export function pollCampaign(
  api: ApiClient,
  id: string,
  callbacks: PollCallbacks,
  intervalMs = 1000,
): PollHandle {
  let cancelled = false;
  let timer: ReturnType<typeof setTimeout> | undefined;

  const tick = async (): Promise<void> => {
    if (cancelled) return;
    try {
      const status = await api.campaignStatus(id);
      if (cancelled) return;
      callbacks.onStatus(status);
      if (!status.running) return;
    } catch (error) {
      if (cancelled) return;
      if (error instanceof ApiError && error.status === 404) {
        callbacks.onMissing();
        return;
      }
      callbacks.onError?.(error);
    }
    timer = setTimeout(tick, intervalMs);
  };

  void tick();
  return {
    cancel() {
      cancelled = true;
      if (timer !== undefined) clearTimeout(timer);
    },
  };
}

const DEG = 180 / Math.PI;

function fmtAngle(value: number | null): string {
  return value === null ? "—" : `${(value * DEG).toFixed(1)}°`;
}

/**
 * Render the per-iteration table.  Failed iterations carry the ``failed``
 * row class and an ✗ marker; every row has a button handing its parameter
 * vector to ``onLoad`` for manual refinement in the editor.
 */
export function renderCampaignTable(
  doc: Document,
  records: CampaignRecordDoc[],
  onLoad: (record: CampaignRecordDoc) => void,
): HTMLTableElement {
  const table = doc.createElement("table");
  table.className = "campaign-table";
  const thead = doc.createElement("thead");
  const head = doc.createElement("tr");
  for (const title of ["#", "kind", "achieved", "best", "status", ""]) {
    const th = doc.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  thead.appendChild(head);
  table.appendChild(thead);

  const body = doc.createElement("tbody");
  const cell = (row: HTMLTableRowElement, text: string, className?: string) => {
    const td = doc.createElement("td");
    td.textContent = text;
    if (className) td.className = className;
    row.appendChild(td);
    return td;
  };
  for (const record of records) {
    const row = doc.createElement("tr");
    row.className = record.failed ? "failed" : "succeeded";
    cell(row, String(record.iteration));
    cell(row, record.kind);
    cell(row, fmtAngle(record.value));
    cell(row, fmtAngle(record.best_so_far));
    cell(row, record.failed ? "✗" : "●", "marker");
    const actions = doc.createElement("td");
    const button = doc.createElement("button");
    button.textContent = "load";
    button.addEventListener("click", () => onLoad(record));
    actions.appendChild(button);
    row.appendChild(actions);
    body.appendChild(row);
  }
  table.appendChild(body);
  return table;
}
