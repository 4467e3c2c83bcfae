// Current / past displacement panels. The current panel polls the live view
// while acquisition runs; the past panel loads archived views on demand.
// The two stacked charts share one mm scale so displacements compare
// directly across panels.

import { api, ApiError, DisplacementView } from "./api";
import { renderChart, sharedScale } from "./chart";
import { ButtonId, enablementMatrix } from "./state";

export interface PanelElements {
  chart: SVGSVGElement;
  maxLabel: HTMLElement;
  timeLabel: HTMLElement;
}

export function formatMax(view: DisplacementView | null): string {
  const value = view ? view.max_displacement_mm : 0;
  return `${value.toFixed(2)} mm`;
}

export class Dashboard {
  currentView: DisplacementView | null = null;
  pastView: DisplacementView | null = null;
  running = false;
  archiveEmpty = true;
  polling = false;
  pollIntervalMs = 500;
  private pollTimer: ReturnType<typeof setTimeout> | null = null;
  private inFlight = false;
  private backoffMs = 0;

  constructor(
    private current: PanelElements,
    private past: PanelElements,
    private buttons: Record<ButtonId, HTMLButtonElement>,
    private banner: HTMLElement,
    private toast: HTMLElement,
  ) {}

  async init(): Promise<void> {
    try {
      const cfg = await api.config();
      this.pollIntervalMs = cfg.poll_interval_s * 1000;
    } catch {
      // keep the 0.5 s default when /config is unreachable
    }
    await this.refreshArchive();
    this.render();
  }

  // -- polling --------------------------------------------------------

  startPolling(): void {
    if (this.polling) return;
    this.polling = true;
    void this.pollOnce();
  }

  stopPolling(): void {
    this.polling = false;
    if (this.pollTimer !== null) {
      clearTimeout(this.pollTimer);
      this.pollTimer = null;
    }
  }

  async pollOnce(): Promise<void> {
    if (this.inFlight) return; // one in-flight poll at a time
    this.inFlight = true;
    try {
      const view = await api.liveView(this.currentView?.as_of_seq ?? 0);
      // discard stale responses
      if (!this.currentView || view.as_of_seq >= this.currentView.as_of_seq) {
        this.currentView = view;
      }
      this.banner.hidden = true;
      this.backoffMs = 0;
    } catch {
      this.banner.hidden = false; // stale-data banner; polling continues
      this.backoffMs = Math.min((this.backoffMs || this.pollIntervalMs) * 2, 10000);
    } finally {
      this.inFlight = false;
    }
    this.render();
    if (this.polling) {
      this.pollTimer = setTimeout(
        () => void this.pollOnce(),
        this.backoffMs || this.pollIntervalMs,
      );
    }
  }

  // -- actions --------------------------------------------------------

  async dispatch(action: ButtonId, experimentId?: string): Promise<void> {
    try {
      switch (action) {
        case "display":
          await api.display();
          this.running = true;
          this.startPolling();
          break;
        case "stop":
          await api.stop();
          this.running = false;
          this.stopPolling();
          break;
        case "save":
          await api.saveExperiment();
          await this.refreshArchive();
          break;
        case "delete":
          await api.deleteLive();
          this.currentView = null;
          break;
        case "experiment": {
          const id = experimentId ?? (await this.latestExperimentId());
          if (id) this.pastView = await api.experimentView(id);
          break;
        }
        case "clear":
          await api.clearExperiments();
          this.pastView = null;
          this.archiveEmpty = true;
          break;
      }
    } catch (err) {
      this.showToast(err instanceof ApiError ? err.message : "request failed");
      return; // state unchanged on conflict
    }
    this.render();
  }

  private async latestExperimentId(): Promise<string | null> {
    const { experiments } = await api.listExperiments();
    return experiments.length ? experiments[experiments.length - 1].id : null;
  }

  private async refreshArchive(): Promise<void> {
    try {
      const { experiments } = await api.listExperiments();
      this.archiveEmpty = experiments.length === 0;
    } catch {
      // leave archiveEmpty as-is if listing fails
    }
  }

  private showToast(message: string): void {
    this.toast.textContent = message;
    this.toast.hidden = false;
  }

  // -- rendering ------------------------------------------------------

  render(): void {
    const scale =
      this.currentView && this.pastView
        ? sharedScale(this.currentView.points, this.pastView.points)
        : undefined;
    this.renderPanel(this.current, this.currentView, scale);
    this.renderPanel(this.past, this.pastView, scale);

    const matrix = enablementMatrix({
      running: this.running,
      archiveEmpty: this.archiveEmpty,
    });
    for (const [id, enabled] of Object.entries(matrix)) {
      this.buttons[id as ButtonId].disabled = !enabled;
    }
  }

  private renderPanel(
    el: PanelElements,
    view: DisplacementView | null,
    scale?: ReturnType<typeof sharedScale>,
  ): void {
    renderChart(el.chart, view ? view.points : [], scale);
    el.maxLabel.textContent = formatMax(view);
    // severity color arrives from the API verbatim
    el.maxLabel.style.color = view ? view.severity : "green";
    el.timeLabel.textContent = view ? `at t = ${view.max_time_s.toFixed(2)} s` : "";
  }
}
