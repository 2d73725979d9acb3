/**
 * View state and the pure logic behind it: sort specs, row banding, the
 * threshold slider's 50-100 display scale, row selection and revision
 * tracking. No data values are computed here, only presentation state.
 */

import type { MutationResponse, Row } from "./api.js";

export interface SortColumn {
  field: keyof Row;
  desc: boolean;
}

export interface ViewState {
  sessionId: string | null;
  revision: number;
  sort: SortColumn[];
  selected: Set<number>;
  selectionAnchor: number | null;
  sliderValue: number; // threshold on the 50..100 display scale
  attributes: { volume: boolean; page: boolean; doi: boolean };
  yearFrom: number | null; // display-only chart zoom
  yearTo: number | null;
  curves: { counts: boolean; deviation: boolean };
  undoDepth: number;
  highlightedRow: number | null;
  conflict: boolean; // stale revision detected, prompt a reload
  warning: string | null;
  clustered: boolean;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    revision: 0,
    sort: [],
    selected: new Set(),
    selectionAnchor: null,
    sliderValue: 75,
    attributes: { volume: false, page: false, doi: false },
    yearFrom: null,
    yearTo: null,
    curves: { counts: true, deviation: true },
    undoDepth: 0,
    highlightedRow: null,
    conflict: false,
    warning: null,
    clustered: false,
  };
}

/** Slider shows 50..100 for thresholds 0.5..1.0. */
export function sliderToThreshold(value: number): number {
  return value / 100;
}

export function thresholdToSlider(threshold: number): number {
  return Math.round(threshold * 100);
}

/**
 * A header click makes that column the primary sort key, keeping the
 * previous spec as tie-breakers; clicking the current primary column flips
 * its direction.
 */
export function toggleSort(sort: SortColumn[], field: keyof Row): SortColumn[] {
  if (sort.length && sort[0].field === field) {
    return [{ field, desc: !sort[0].desc }, ...sort.slice(1)];
  }
  return [{ field, desc: false }, ...sort.filter((c) => c.field !== field)];
}

export function sortParam(sort: SortColumn[]): string {
  return sort.map((c) => `${c.field}:${c.desc ? "desc" : "asc"}`).join(",");
}

/** Clicking a chart point sorts by year, then share of the year, descending. */
export function pointClickSort(): SortColumn[] {
  return [
    { field: "year", desc: true },
    { field: "pct_in_year", desc: true },
  ];
}

/** First row of the given year in the server-sorted row order. */
export function topRowOfYear(rows: Row[], year: number): Row | null {
  return rows.find((row) => row.year === year) ?? null;
}

/**
 * Band index per row: rows with equal values in all sorted columns share a
 * band, the index increments whenever the sort key changes.
 */
export function bandIds(rows: Row[], sort: SortColumn[]): number[] {
  if (!sort.length) return rows.map((_, i) => i % 2);
  const bands: number[] = [];
  let band = 0;
  let previous: string | null = null;
  for (const row of rows) {
    const key = JSON.stringify(sort.map((c) => row[c.field]));
    if (previous !== null && key !== previous) band += 1;
    bands.push(band);
    previous = key;
  }
  return bands;
}

/**
 * Checkbox selection with shift-click ranges over the current row order.
 * Returns the new selection and the anchor for the next shift-click.
 */
export function updateSelection(
  selected: Set<number>,
  orderedIds: number[],
  id: number,
  shift: boolean,
  anchor: number | null,
): { selected: Set<number>; anchor: number | null } {
  const next = new Set(selected);
  if (shift && anchor !== null && orderedIds.includes(anchor)) {
    const from = orderedIds.indexOf(anchor);
    const to = orderedIds.indexOf(id);
    const [lo, hi] = from <= to ? [from, to] : [to, from];
    for (const rangeId of orderedIds.slice(lo, hi + 1)) next.add(rangeId);
    return { selected: next, anchor };
  }
  if (next.has(id)) {
    next.delete(id);
  } else {
    next.add(id);
  }
  return { selected: next, anchor: id };
}

/** Fold a mutation response into the view state. */
export function applyMutation(state: ViewState, response: MutationResponse): ViewState {
  return {
    ...state,
    revision: response.revision,
    undoDepth: response.undo_depth,
    warning: response.warning ?? null,
    selected: new Set(),
    selectionAnchor: null,
  };
}

export function markConflict(state: ViewState): ViewState {
  return { ...state, conflict: true };
}

/** Chart zoom is display-only: it never touches the dataset. */
export function selectRange(state: ViewState, from: number, to: number): ViewState {
  const [lo, hi] = from <= to ? [from, to] : [to, from];
  return { ...state, yearFrom: lo, yearTo: hi };
}

export function autoRange(state: ViewState): ViewState {
  return { ...state, yearFrom: null, yearTo: null };
}
