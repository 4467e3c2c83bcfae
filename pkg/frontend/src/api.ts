// Thin typed client for the monitoring service. The UI does no displacement
// math of its own: every plotted value, max readout, and severity color
// comes out of these responses verbatim.

export type Severity = "green" | "orange" | "red";

export interface ViewPoint {
  t: number;
  d: number;
}

export interface DisplacementView {
  points: ViewPoint[];
  max_displacement_mm: number;
  max_time_s: number;
  severity: Severity;
  as_of_seq: number;
  restarted: boolean;
}

export interface ServiceInfo {
  poll_interval_s: number;
  display_rate_hz: number;
  max_points: number;
  sample_rate_hz: number;
  window_len: number;
}

export interface AcquisitionState {
  status: "idle" | "running";
  source: string | null;
  records_ingested: number;
  frames_rejected: number;
}

export interface ExperimentInfo {
  id: string;
  exp_time: string;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const res = await fetch(path, init);
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = await res.json();
      if (body && body.detail) detail = String(body.detail);
    } catch {
      // non-JSON error body; keep statusText
    }
    throw new ApiError(res.status, detail);
  }
  return (await res.json()) as T;
}

export const api = {
  config: () => request<ServiceInfo>("/config"),
  display: () =>
    request<AcquisitionState>("/acquisition/display", { method: "POST" }),
  stop: () => request<AcquisitionState>("/acquisition/stop", { method: "POST" }),
  deleteLive: () => request<{ removed: number }>("/live", { method: "DELETE" }),
  liveView: (asOfSeq = 0) =>
    request<DisplacementView>(`/view/live?as_of_seq=${asOfSeq}`),
  saveExperiment: () =>
    request<ExperimentInfo>("/experiments", { method: "POST" }),
  listExperiments: () =>
    request<{ experiments: ExperimentInfo[] }>("/experiments"),
  experimentView: (id: string) =>
    request<DisplacementView>(`/experiments/${encodeURIComponent(id)}/view`),
  clearExperiments: () =>
    request<{ removed: number }>("/experiments", { method: "DELETE" }),
};
