import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import type { DisplacementView } from "../src/api";
import { Dashboard, PanelElements, formatMax } from "../src/panels";
import { ButtonId } from "../src/state";

function view(maxMm: number, severity: string, n = 100): DisplacementView {
  const points = Array.from({ length: n }, (_, i) => ({
    t: i * 0.2,
    d: maxMm * Math.sin(i / 9),
  }));
  points[n - 1] = { t: (n - 1) * 0.2, d: maxMm };
  return {
    points,
    max_displacement_mm: maxMm,
    max_time_s: (n - 1) * 0.2,
    severity: severity as DisplacementView["severity"],
    as_of_seq: 1000,
    restarted: false,
  };
}

interface Fixture {
  dash: Dashboard;
  current: PanelElements;
  past: PanelElements;
  buttons: Record<ButtonId, HTMLButtonElement>;
}

const routes: Record<string, () => unknown> = {};

function route(method: string, path: string, body: () => unknown): void {
  routes[`${method} ${path}`] = body;
}

function jsonResponse(body: unknown): Response {
  return {
    ok: true,
    status: 200,
    json: () => Promise.resolve(body),
  } as Response;
}

function installFetch(): void {
  vi.stubGlobal("fetch", (input: RequestInfo | URL, init?: RequestInit) => {
    const path = String(input).split("?")[0];
    const key = `${init?.method ?? "GET"} ${path}`;
    const handler = routes[key];
    if (!handler) {
      return Promise.resolve({
        ok: false,
        status: 404,
        statusText: "not found",
        json: () => Promise.reject(new Error("no body")),
      } as unknown as Response);
    }
    return Promise.resolve(jsonResponse(handler()));
  });
}

function makeFixture(): Fixture {
  document.body.innerHTML = "";
  const ns = "http://www.w3.org/2000/svg";
  const panel = (): PanelElements => {
    const chart = document.createElementNS(ns, "svg") as SVGSVGElement;
    const maxLabel = document.createElement("span");
    const timeLabel = document.createElement("span");
    document.body.append(chart, maxLabel, timeLabel);
    return { chart, maxLabel, timeLabel };
  };
  const ids: ButtonId[] = ["display", "stop", "save", "delete", "experiment", "clear"];
  const buttons = {} as Record<ButtonId, HTMLButtonElement>;
  for (const id of ids) {
    buttons[id] = document.createElement("button");
    document.body.append(buttons[id]);
  }
  const banner = document.createElement("div");
  const toast = document.createElement("div");
  document.body.append(banner, toast);
  const current = panel();
  const past = panel();
  return { dash: new Dashboard(current, past, buttons, banner, toast), current, past, buttons };
}

beforeEach(() => {
  for (const k of Object.keys(routes)) delete routes[k];
  route("GET", "/config", () => ({
    poll_interval_s: 0.5,
    display_rate_hz: 5,
    max_points: 100,
    sample_rate_hz: 300,
    window_len: 601,
  }));
  route("GET", "/experiments", () => ({ experiments: [] }));
  installFetch();
});

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("live panel", () => {
  it("renders at most 100 vertices from a full live view", async () => {
    route("GET", "/view/live", () => view(5.98, "green", 100));
    const f = makeFixture();
    await f.dash.init();
    await f.dash.pollOnce();
    const dots = f.current.chart.querySelectorAll("circle.vertex");
    expect(dots.length).toBe(100);
    expect(dots.length).toBeLessThanOrEqual(100);
  });

  it("shows the served maximum and colors it with the served severity", async () => {
    route("GET", "/view/live", () => view(5.98, "green"));
    const f = makeFixture();
    await f.dash.init();
    await f.dash.pollOnce();
    expect(f.current.maxLabel.textContent).toBe("5.98 mm");
    expect(f.current.maxLabel.style.color).toBe("green");
  });

  it("uses the API severity verbatim, not a local threshold", async () => {
    // even an implausible pairing must be displayed as served
    route("GET", "/view/live", () => view(12.34, "red"));
    const f = makeFixture();
    await f.dash.init();
    await f.dash.pollOnce();
    expect(f.current.maxLabel.textContent).toBe("12.34 mm");
    expect(f.current.maxLabel.style.color).toBe("red");

    route("GET", "/view/live", () => view(7.5, "orange"));
    await f.dash.pollOnce();
    expect(f.current.maxLabel.style.color).toBe("orange");
  });

  it("shows the stale banner when polling fails and keeps the last view", async () => {
    route("GET", "/view/live", () => view(4.2, "green"));
    const f = makeFixture();
    await f.dash.init();
    await f.dash.pollOnce();
    delete routes["GET /view/live"]; // server goes away
    await f.dash.pollOnce();
    const banner = document.body.querySelectorAll("div")[0];
    expect(banner.hidden).toBe(false);
    expect(f.current.maxLabel.textContent).toBe("4.20 mm");
  });
});

describe("dual-panel overlay", () => {
  it("displays both maxima simultaneously on a shared scale", async () => {
    route("GET", "/view/live", () => view(5.98, "green"));
    route("GET", "/experiments", () => ({
      experiments: [{ id: "20260823T120000-1", exp_time: "2026-08-23T12:00:00" }],
    }));
    route("GET", "/experiments/20260823T120000-1/view", () => view(3.9, "green", 80));
    const f = makeFixture();
    await f.dash.init();
    await f.dash.pollOnce();
    await f.dash.dispatch("experiment");

    expect(f.current.maxLabel.textContent).toBe("5.98 mm");
    expect(f.past.maxLabel.textContent).toBe("3.90 mm");
    expect(f.current.chart.querySelectorAll("circle.vertex").length).toBe(100);
    expect(f.past.chart.querySelectorAll("circle.vertex").length).toBe(80);

    // shared vertical scale: equal displacements land at equal heights,
    // so the larger trace must span a taller pixel range than the smaller
    const span = (el: SVGSVGElement) => {
      const ys = [...el.querySelectorAll("circle.vertex")].map((c) =>
        Number(c.getAttribute("cy")),
      );
      return Math.max(...ys) - Math.min(...ys);
    };
    expect(span(f.past.chart)).toBeLessThan(span(f.current.chart));
  });
});

describe("button enablement", () => {
  it("disables display and delete while running, re-enables after stop", async () => {
    route("POST", "/acquisition/display", () => ({
      status: "running",
      source: "sim:s1",
      records_ingested: 0,
      frames_rejected: 0,
    }));
    route("POST", "/acquisition/stop", () => ({
      status: "idle",
      source: null,
      records_ingested: 100,
      frames_rejected: 0,
    }));
    route("GET", "/view/live", () => view(1.0, "green"));
    const f = makeFixture();
    await f.dash.init();

    expect(f.buttons.display.disabled).toBe(false);
    expect(f.buttons.delete.disabled).toBe(false);
    expect(f.buttons.stop.disabled).toBe(true);

    await f.dash.dispatch("display");
    expect(f.buttons.display.disabled).toBe(true);
    expect(f.buttons.delete.disabled).toBe(true);
    expect(f.buttons.stop.disabled).toBe(false);
    expect(f.buttons.save.disabled).toBe(false);

    await f.dash.dispatch("stop");
    expect(f.buttons.display.disabled).toBe(false);
    expect(f.buttons.delete.disabled).toBe(false);
    expect(f.buttons.stop.disabled).toBe(true);
    f.dash.stopPolling();
  });

  it("enables archive buttons only when experiments exist", async () => {
    const f = makeFixture();
    await f.dash.init();
    expect(f.buttons.experiment.disabled).toBe(true);
    expect(f.buttons.clear.disabled).toBe(true);

    route("GET", "/experiments", () => ({
      experiments: [{ id: "20260823T120000-1", exp_time: "2026-08-23T12:00:00" }],
    }));
    route("POST", "/experiments", () => ({
      id: "20260823T120000-1",
      exp_time: "2026-08-23T12:00:00",
    }));
    await f.dash.dispatch("save");
    expect(f.buttons.experiment.disabled).toBe(false);
    expect(f.buttons.clear.disabled).toBe(false);
  });
});

describe("formatMax", () => {
  it("renders two decimals with a mm unit", () => {
    expect(formatMax(null)).toBe("0.00 mm");
    expect(formatMax(view(3.9, "green"))).toBe("3.90 mm");
  });
});
