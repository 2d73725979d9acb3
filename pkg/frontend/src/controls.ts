/**
 * Clustering control strip: threshold slider (50-100), volume/page/DOI
 * checkboxes, and the Same / Different / Extract / Undo buttons. Undo is
 * disabled whenever the server reports an empty undo stack.
 */

import type { ViewState } from "./state.js";

export function renderControls(state: ViewState): string {
  const disabledWhenEmpty = state.selected.size ? "" : " disabled";
  const undoDisabled = state.undoDepth > 0 ? "" : " disabled";
  const attribute = (name: "volume" | "page" | "doi") =>
    `<label><input type="checkbox" data-attribute="${name}"` +
    `${state.attributes[name] ? " checked" : ""}> ${name}</label>`;
  return [
    '<div class="cluster-controls">',
    `<label>Threshold <input type="range" id="threshold" min="50" max="100" ` +
      `value="${state.sliderValue}"> <span id="threshold-value">${state.sliderValue}</span></label>`,
    '<button id="cluster">Cluster</button>',
    attribute("volume"),
    attribute("page"),
    attribute("doi"),
    '<button id="refine">Refine</button>',
    `<button id="same" data-action="same"${disabledWhenEmpty}>Same</button>`,
    `<button id="different" data-action="different"${disabledWhenEmpty}>Different</button>`,
    `<button id="extract" data-action="extract"${disabledWhenEmpty}>Extract</button>`,
    `<button id="undo"${undoDisabled}>Undo</button>`,
    '<button id="merge">Merge</button>',
    "</div>",
  ].join("\n");
}

export function renderStatus(state: ViewState, infoLine: string): string {
  const parts = [`<span class="info">${infoLine}</span>`, `<span class="revision">rev ${state.revision}</span>`];
  if (state.warning) parts.push(`<span class="warning">${state.warning}</span>`);
  if (state.conflict) {
    parts.push(
      '<span class="conflict">another tab changed this session; ' +
        '<button id="reload">reload</button> before continuing</span>',
    );
  }
  return parts.join(" ");
}
