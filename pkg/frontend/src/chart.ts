// SVG strip chart: draws the served points as a connected points-and-lines
// trace. Vertex count always equals the number of served points.

import type { ViewPoint } from "./api";

export interface ChartScale {
  dMin: number;
  dMax: number;
}

const WIDTH = 600;
const HEIGHT = 200;
const PAD = 10;

export function computeScale(points: ViewPoint[], floorMm = 1.0): ChartScale {
  let m = floorMm;
  for (const p of points) m = Math.max(m, Math.abs(p.d));
  return { dMin: -m, dMax: m };
}

/** Shared-scale helper for the past-vs-current overlay. */
export function sharedScale(a: ViewPoint[], b: ViewPoint[]): ChartScale {
  const sa = computeScale(a);
  const sb = computeScale(b);
  const m = Math.max(sa.dMax, sb.dMax);
  return { dMin: -m, dMax: m };
}

export function renderChart(
  svg: SVGSVGElement,
  points: ViewPoint[],
  scale?: ChartScale,
): void {
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  while (svg.firstChild) svg.removeChild(svg.firstChild);
  if (points.length === 0) return;

  const s = scale ?? computeScale(points);
  const t0 = points[0].t;
  const t1 = points[points.length - 1].t;
  const tSpan = Math.max(t1 - t0, 1e-9);
  const x = (t: number) => PAD + ((t - t0) / tSpan) * (WIDTH - 2 * PAD);
  const y = (d: number) =>
    HEIGHT - PAD - ((d - s.dMin) / (s.dMax - s.dMin)) * (HEIGHT - 2 * PAD);

  const ns = "http://www.w3.org/2000/svg";
  const line = document.createElementNS(ns, "polyline");
  line.setAttribute("fill", "none");
  line.setAttribute("stroke", "steelblue");
  line.setAttribute(
    "points",
    points.map((p) => `${x(p.t).toFixed(2)},${y(p.d).toFixed(2)}`).join(" "),
  );
  svg.appendChild(line);

  for (const p of points) {
    const dot = document.createElementNS(ns, "circle");
    dot.setAttribute("class", "vertex");
    dot.setAttribute("cx", x(p.t).toFixed(2));
    dot.setAttribute("cy", y(p.d).toFixed(2));
    dot.setAttribute("r", "2");
    svg.appendChild(dot);
  }
}
