/**
 * Spectrogram rendering: the cited-references curve and the deviation from
 * the median curve as SVG, plus the hover/click geometry helpers. Values
 * are plotted exactly as the server sent them.
 */

import type { SpectrumPoint } from "./api.js";

export const CHART_WIDTH = 860;
export const CHART_HEIGHT = 420;
const MARGIN = { left: 60, right: 20, top: 30, bottom: 40 };
const COUNTS_COLOR = "#d62728";
const DEVIATION_COLOR = "#1f77b4";

export interface Geometry {
  yearFrom: number;
  yearTo: number;
  valueMin: number;
  valueMax: number;
  x(year: number): number;
  y(value: number): number;
  yearAt(px: number): number;
}

export interface CurveSelection {
  counts: boolean;
  deviation: boolean;
}

/**
 * Scales for the visible window. The year range clamps the view without
 * touching the data (zooming is display-only).
 */
export function computeGeometry(
  points: SpectrumPoint[],
  yearFrom: number | null = null,
  yearTo: number | null = null,
  curves: CurveSelection = { counts: true, deviation: true },
): Geometry {
  const lo = yearFrom ?? (points.length ? points[0].year : 0);
  const hi = yearTo ?? (points.length ? points[points.length - 1].year : 1);
  const visible = points.filter((p) => p.year >= lo && p.year <= hi);
  const values: number[] = [0];
  for (const p of visible) {
    if (curves.counts) values.push(p.n_cr);
    if (curves.deviation) values.push(p.deviation);
  }
  const valueMin = Math.min(...values);
  const valueMax = Math.max(...values, valueMin + 1);
  const plotWidth = CHART_WIDTH - MARGIN.left - MARGIN.right;
  const plotHeight = CHART_HEIGHT - MARGIN.top - MARGIN.bottom;
  const span = Math.max(1, hi - lo);
  return {
    yearFrom: lo,
    yearTo: hi,
    valueMin,
    valueMax,
    x: (year) => MARGIN.left + ((year - lo) / span) * plotWidth,
    y: (value) => MARGIN.top + ((valueMax - value) / (valueMax - valueMin)) * plotHeight,
    yearAt: (px) => Math.round(lo + ((px - MARGIN.left) / plotWidth) * span),
  };
}

export function polylinePoints(
  points: SpectrumPoint[],
  geometry: Geometry,
  accessor: (p: SpectrumPoint) => number,
): string {
  return points
    .filter((p) => p.year >= geometry.yearFrom && p.year <= geometry.yearTo)
    .map((p) => `${geometry.x(p.year).toFixed(1)},${geometry.y(accessor(p)).toFixed(1)}`)
    .join(" ");
}

/** The point under the cursor, or null when the cursor is off the curve. */
export function nearestPoint(
  points: SpectrumPoint[],
  geometry: Geometry,
  px: number,
  maxDistancePx = 8,
): SpectrumPoint | null {
  let best: SpectrumPoint | null = null;
  let bestDistance = maxDistancePx;
  for (const p of points) {
    if (p.year < geometry.yearFrom || p.year > geometry.yearTo) continue;
    const distance = Math.abs(geometry.x(p.year) - px);
    if (distance <= bestDistance) {
      best = p;
      bestDistance = distance;
    }
  }
  return best;
}

/** Hover window content: the year and the server-reported total. */
export function tooltipText(point: SpectrumPoint): string {
  return `Year: ${point.year}, N_CR: ${point.n_cr}`;
}

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderChartSvg(
  points: SpectrumPoint[],
  yearFrom: number | null,
  yearTo: number | null,
  curves: CurveSelection,
  title = "Cited references per publication year",
): string {
  const geometry = computeGeometry(points, yearFrom, yearTo, curves);
  const axisY = CHART_HEIGHT - MARGIN.bottom;
  const parts: string[] = [
    `<svg class="spectrum" viewBox="0 0 ${CHART_WIDTH} ${CHART_HEIGHT}" ` +
      `width="${CHART_WIDTH}" height="${CHART_HEIGHT}">`,
    `<text x="${CHART_WIDTH / 2}" y="18" text-anchor="middle" class="chart-title">` +
      `${escapeXml(title)}</text>`,
    `<line x1="${MARGIN.left}" y1="${axisY}" x2="${CHART_WIDTH - MARGIN.right}" y2="${axisY}" stroke="#333"/>`,
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${axisY}" stroke="#333"/>`,
  ];
  if (points.length) {
    const span = geometry.yearTo - geometry.yearFrom;
    const step = Math.max(1, Math.floor(span / 10) || 1);
    for (let year = geometry.yearFrom; year <= geometry.yearTo; year += step) {
      const x = geometry.x(year).toFixed(1);
      parts.push(`<line x1="${x}" y1="${axisY}" x2="${x}" y2="${axisY + 5}" stroke="#333"/>`);
      parts.push(
        `<text x="${x}" y="${axisY + 18}" text-anchor="middle" class="tick">${year}</text>`,
      );
    }
    if (curves.counts) {
      parts.push(
        `<polyline fill="none" stroke="${COUNTS_COLOR}" stroke-width="1.5" ` +
          `points="${polylinePoints(points, geometry, (p) => p.n_cr)}"/>`,
      );
    }
    if (curves.deviation) {
      parts.push(
        `<polyline fill="none" stroke="${DEVIATION_COLOR}" stroke-width="1.5" ` +
          `points="${polylinePoints(points, geometry, (p) => p.deviation)}"/>`,
      );
    }
  }
  parts.push("</svg>");
  return parts.join("\n");
}
