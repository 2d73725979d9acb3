/**
 * Two-pane workbench: spectrogram on the left, reference table on the
 * right. All numbers come from the server; this module only wires events
 * to API calls and re-renders from the responses.
 */

import { ApiClient, ConflictError, type DatasetInfo, type Row, type SpectrumPoint } from "./api.js";
import {
  computeGeometry,
  nearestPoint,
  renderChartSvg,
  tooltipText,
  CHART_WIDTH,
} from "./chart.js";
import { renderControls, renderStatus } from "./controls.js";
import {
  applyMutation,
  autoRange,
  initialState,
  markConflict,
  pointClickSort,
  selectRange,
  sliderToThreshold,
  sortParam,
  toggleSort,
  topRowOfYear,
  updateSelection,
  type ViewState,
} from "./state.js";
import { renderTable } from "./table.js";

const api = new ApiClient();
let state: ViewState = initialState();
let rows: Row[] = [];
let points: SpectrumPoint[] = [];
let info: DatasetInfo | null = null;
let dragStartYear: number | null = null;

function el<T extends HTMLElement>(id: string): T {
  return document.getElementById(id) as T;
}

function infoLine(): string {
  if (!info) return "no dataset imported";
  const range =
    info.min_rpy === null ? "-" : `${info.min_rpy}-${info.max_rpy}`;
  return (
    `${info.n_publications} publications, ${info.n_cr_total} cited references ` +
    `(${info.n_references_distinct} distinct), ${info.n_clusters} clusters, RPY ${range}`
  );
}

function render(): void {
  el("status").innerHTML = renderStatus(state, infoLine());
  el("controls").innerHTML = state.clustered ? renderControls(state) : "";
  el("chart-pane").innerHTML = renderChartSvg(
    points,
    state.yearFrom,
    state.yearTo,
    state.curves,
  );
  el("table-pane").innerHTML = renderTable(
    rows,
    state.sort,
    state.selected,
    state.highlightedRow,
  );
  const urls = state.sessionId ? api.exportUrls(state.sessionId) : null;
  el("exports").innerHTML = urls
    ? `<a href="${urls.table}" download>table.csv</a> ` +
      `<a href="${urls.chart}" download>chart.csv</a> ` +
      `<a href="${urls.svg}" download>chart.svg</a>`
    : "";
  const highlighted = document.querySelector("tr.highlight");
  if (highlighted) highlighted.scrollIntoView({ block: "center" });
}

async function refreshTable(): Promise<void> {
  if (!state.sessionId) return;
  const response = await api.references(state.sessionId, {
    sort: sortParam(state.sort),
  });
  rows = response.rows;
  state = { ...state, undoDepth: response.undo_depth, revision: response.revision };
}

async function refreshSpectrum(): Promise<void> {
  if (!state.sessionId) return;
  const response = await api.spectrum(state.sessionId);
  points = response.points;
}

async function refreshAll(): Promise<void> {
  if (!state.sessionId) return;
  const payload = await api.info(state.sessionId);
  info = payload.info;
  await Promise.all([refreshTable(), refreshSpectrum()]);
  render();
}

function guarded<T extends unknown[]>(handler: (...args: T) => Promise<void>) {
  return (...args: T) => {
    handler(...args).catch((error) => {
      if (error instanceof ConflictError) {
        state = markConflict(state);
        render();
      } else {
        el("status").innerHTML = `<span class="error">${String(error)}</span>`;
      }
    });
  };
}

const onImport = guarded(async () => {
  const input = el<HTMLInputElement>("files");
  if (!input.files || !input.files.length) return;
  if (!state.sessionId) {
    const session = await api.createSession();
    state = { ...state, sessionId: session.id, revision: session.revision };
  }
  const payload = await api.importFiles(state.sessionId!, Array.from(input.files));
  info = payload.info;
  state = { ...state, revision: payload.revision, clustered: false };
  await refreshAll();
});

const onCluster = guarded(async () => {
  const response = await api.cluster(
    state.sessionId!,
    sliderToThreshold(state.sliderValue),
    state.revision,
  );
  info = response.info;
  state = { ...applyMutation(state, response), clustered: true };
  await refreshAll();
});

const onRefine = guarded(async () => {
  const response = await api.refine(state.sessionId!, state.attributes, state.revision);
  info = response.info;
  state = applyMutation(state, response);
  await refreshAll();
});

const onManual = guarded(async (action: "same" | "different" | "extract") => {
  const ids = Array.from(state.selected);
  if (!ids.length) return;
  const response = await api.manual(state.sessionId!, action, ids, state.revision);
  info = response.info;
  state = applyMutation(state, response);
  await refreshAll();
});

const onUndo = guarded(async () => {
  const response = await api.undo(state.sessionId!, state.revision);
  info = response.info;
  state = applyMutation(state, response);
  await refreshAll();
});

const onMerge = guarded(async () => {
  const response = await api.merge(state.sessionId!, state.revision);
  info = response.info;
  state = applyMutation(state, response);
  await refreshAll();
});

const onPointClick = guarded(async (year: number) => {
  state = { ...state, sort: pointClickSort() };
  await refreshTable();
  const top = topRowOfYear(rows, year);
  state = { ...state, highlightedRow: top ? top.id : null };
  render();
});

function chartPixelX(event: MouseEvent): number {
  const svg = document.querySelector<SVGSVGElement>("svg.spectrum");
  if (!svg) return 0;
  const rect = svg.getBoundingClientRect();
  return ((event.clientX - rect.left) / rect.width) * CHART_WIDTH;
}

function wireEvents(): void {
  el("import").addEventListener("click", () => onImport());

  el("status").addEventListener("click", (event) => {
    if ((event.target as HTMLElement).id === "reload") {
      window.location.reload();
    }
  });

  el("controls").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.id === "cluster") onCluster();
    else if (target.id === "refine") onRefine();
    else if (target.id === "undo") onUndo();
    else if (target.id === "merge") onMerge();
    else if (target.dataset.action) {
      onManual(target.dataset.action as "same" | "different" | "extract");
    }
  });

  el("controls").addEventListener("input", (event) => {
    const target = event.target as HTMLInputElement;
    if (target.id === "threshold") {
      state = { ...state, sliderValue: Number(target.value) };
      const label = document.getElementById("threshold-value");
      if (label) label.textContent = target.value;
    } else if (target.dataset.attribute) {
      state = {
        ...state,
        attributes: {
          ...state.attributes,
          [target.dataset.attribute]: target.checked,
        },
      };
    }
  });

  const chartPane = el("chart-pane");
  chartPane.addEventListener("mousemove", (event) => {
    const geometry = computeGeometry(points, state.yearFrom, state.yearTo, state.curves);
    const point = nearestPoint(points, geometry, chartPixelX(event));
    const tooltip = el("tooltip");
    if (point) {
      tooltip.textContent = tooltipText(point);
      tooltip.style.display = "block";
      tooltip.style.left = `${event.pageX + 12}px`;
      tooltip.style.top = `${event.pageY + 12}px`;
    } else {
      tooltip.style.display = "none";
    }
  });
  chartPane.addEventListener("mousedown", (event) => {
    const geometry = computeGeometry(points, state.yearFrom, state.yearTo, state.curves);
    dragStartYear = geometry.yearAt(chartPixelX(event));
  });
  chartPane.addEventListener("mouseup", (event) => {
    const geometry = computeGeometry(points, state.yearFrom, state.yearTo, state.curves);
    const year = geometry.yearAt(chartPixelX(event));
    if (dragStartYear !== null && Math.abs(year - dragStartYear) >= 1) {
      state = selectRange(state, dragStartYear, year); // display-only zoom
      render();
    } else {
      onPointClick(year);
    }
    dragStartYear = null;
  });
  chartPane.addEventListener("dblclick", () => {
    state = autoRange(state);
    render();
  });

  el("table-pane").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const selectId = (target as HTMLInputElement).dataset?.select;
    if (selectId) {
      const orderedIds = rows.map((row) => row.id);
      const result = updateSelection(
        state.selected,
        orderedIds,
        Number(selectId),
        (event as MouseEvent).shiftKey,
        state.selectionAnchor,
      );
      state = { ...state, selected: result.selected, selectionAnchor: result.anchor };
      render();
      return;
    }
    const th = target.closest("th[data-field]") as HTMLElement | null;
    if (th) {
      state = { ...state, sort: toggleSort(state.sort, th.dataset.field as keyof Row) };
      guarded(async () => {
        await refreshTable();
        render();
      })();
    }
  });
}

document.addEventListener("DOMContentLoaded", () => {
  wireEvents();
  render();
});
