/**
 * Reference table rendering. Every cell prints a payload field verbatim
 * (percentages are the payload fraction shown as a percent with two
 * decimals, cluster ids as "main/sub"); rows sharing the sorted columns'
 * values share a background band.
 */

import type { Row } from "./api.js";
import { bandIds, type SortColumn } from "./state.js";

export const COLUMNS: { field: keyof Row; label: string }[] = [
  { field: "id", label: "ID" },
  { field: "raw", label: "Cited Reference" },
  { field: "year", label: "Cited Reference Year" },
  { field: "n_cr", label: "Number of Cited References" },
  { field: "pct_in_year", label: "Percent in Year" },
  { field: "pct_all_years", label: "Percent over all Years" },
  { field: "last_name", label: "Last Name" },
  { field: "source_title", label: "Source Title" },
  { field: "volume", label: "Volume" },
  { field: "page", label: "Page" },
  { field: "doi", label: "DOI" },
  { field: "cluster_main", label: "ClusterID" },
  { field: "cluster_size", label: "Cluster Size" },
];

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function cellText(row: Row, field: keyof Row): string {
  if (field === "pct_in_year" || field === "pct_all_years") {
    return (row[field] * 100).toFixed(2);
  }
  if (field === "cluster_main") {
    return `${row.cluster_main}/${row.cluster_sub}`;
  }
  const value = row[field];
  return value === null || value === undefined ? "" : String(value);
}

export function renderTable(
  rows: Row[],
  sort: SortColumn[],
  selected: Set<number>,
  highlightedRow: number | null,
): string {
  const bands = bandIds(rows, sort);
  const header = COLUMNS.map((column) => {
    const spec = sort.find((c) => c.field === column.field);
    const marker = spec ? (spec.desc ? " ▼" : " ▲") : "";
    return (
      `<th data-field="${column.field}" class="sortable">` +
      `${escapeHtml(column.label)}${marker}</th>`
    );
  }).join("");
  const body = rows
    .map((row, index) => {
      const classes = [`band-${bands[index] % 2}`];
      if (row.id === highlightedRow) classes.push("highlight");
      if (selected.has(row.id)) classes.push("selected");
      const checked = selected.has(row.id) ? " checked" : "";
      const cells = COLUMNS.map(
        (column) => `<td>${escapeHtml(cellText(row, column.field))}</td>`,
      ).join("");
      return (
        `<tr data-id="${row.id}" class="${classes.join(" ")}">` +
        `<td><input type="checkbox" data-select="${row.id}"${checked}></td>${cells}</tr>`
      );
    })
    .join("\n");
  return (
    `<table class="references"><thead><tr><th></th>${header}</tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}
