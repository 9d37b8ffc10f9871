/**
 * Single-page decision UI: upload a model, inspect importance rankings
 * and curves, and build what-if scenarios evaluated live by the service.
 * All risk numbers shown here are copied from service responses.
 */

import { ApiClient } from "./api.js";
import { medianCrossing, polylinePoints, toPixel, plotScale } from "./curvePlot.js";
import { formatMoney, formatShare } from "./format.js";
import { computeRankingRows, rankFamily } from "./ranking.js";
import {
  ScenarioEvaluator,
  deltaView,
  diagnosticsToFieldErrors,
  validateDraft,
} from "./scenario.js";
import type {
  Diagnostic,
  Modification,
  Report,
  ScenarioDraft,
} from "./types.js";

const client = new ApiClient("");

interface UiState {
  modelId: string | null;
  report: Report | null;
  hazardTargets: string[];
  fragilityTargets: string[];
  disabledEvents: Set<string>;
  retrofits: Map<string, number>;
  backPeriod: number | null;
}

const state: UiState = {
  modelId: null,
  report: null,
  hazardTargets: [],
  fragilityTargets: [],
  disabledEvents: new Set(),
  retrofits: new Map(),
  backPeriod: null,
};

function curveTargetsFromSource(source: string): {
  hazards: string[];
  fragilities: string[];
} {
  // The document was just accepted by the service, so it parses; curve
  // targets (event/area and component/event pairs) come from it as-is.
  try {
    const doc = JSON.parse(source) as {
      hazards?: { event_type_id?: string; area_id?: string }[];
      fragilities?: { component_id?: string; event_type_id?: string }[];
    };
    return {
      hazards: [
        ...new Set(
          (doc.hazards ?? []).map((h) => `${h.event_type_id}/${h.area_id}`),
        ),
      ].sort(),
      fragilities: [
        ...new Set(
          (doc.fragilities ?? []).map(
            (f) => `${f.component_id}/${f.event_type_id}`,
          ),
        ),
      ].sort(),
    };
  } catch {
    return { hazards: [], fragilities: [] };
  }
}

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function renderDiagnostics(target: HTMLElement, diagnostics: Diagnostic[]): void {
  target.innerHTML = diagnostics
    .map(
      (d) =>
        `<li class="diag diag-${escapeHtml(d.severity)}">` +
        `<code>${escapeHtml(d.code)}</code> at ${escapeHtml(d.path)}: ` +
        `${escapeHtml(d.message)}</li>`,
    )
    .join("");
}

function renderRanking(report: Report): void {
  const container = el<HTMLDivElement>("ranking");
  const rows = computeRankingRows(report);
  if (rows === null) {
    container.innerHTML =
      '<p class="empty-state">No risk: this model has zero probable cost, ' +
      "so importance factors are undefined.</p>";
    return;
  }
  const bars = rows
    .map((row) => {
      const perEvent = row.perEvent
        .map(
          (share) =>
            `<div class="event-bar"><span class="event-name">` +
            `${escapeHtml(share.event)}</span>` +
            `<div class="bar"><div class="bar-fill" style="width:${(
              share.share * 100
            ).toFixed(1)}%"></div></div>` +
            `<span class="event-share">${share.display}</span></div>`,
        )
        .join("");
      return (
        `<div class="ranking-row"><div class="ranking-head">` +
        `<span class="component">${escapeHtml(row.id)}</span>` +
        `<span class="importance">${row.display}</span></div>` +
        `<div class="bar total-bar"><div class="bar-fill" style="width:${(
          row.importance * 100
        ).toFixed(1)}%"></div></div>${perEvent}</div>`
      );
    })
    .join("");
  const events = rankFamily(report.event_importance) ?? [];
  const lines = rankFamily(report.line_importance) ?? [];
  container.innerHTML =
    `<h3>Components</h3>${bars}` +
    `<h3>Events</h3><ul>${events
      .map((e) => `<li>${escapeHtml(e.id)}: ${e.display}</li>`)
      .join("")}</ul>` +
    `<h3>Lines</h3><ul>${lines
      .map((l) => `<li>${escapeHtml(l.id)}: ${l.display}</li>`)
      .join("")}</ul>` +
    `<p class="total">Network probable cost: ${formatMoney(
      report.total.total,
    )}/yr</p>`;
}

function currentDraft(): ScenarioDraft {
  const modifications: Modification[] = [];
  for (const event of [...state.disabledEvents].sort()) {
    modifications.push({ remove_event: { event_type_id: event } });
  }
  for (const [key, scale] of [...state.retrofits.entries()].sort()) {
    if (scale !== 1.0) {
      const [component, event] = key.split("/") as [string, string];
      modifications.push({
        retrofit: {
          component_id: component,
          event_type_id: event,
          median_scale: scale,
        },
      });
    }
  }
  if (state.backPeriod !== null) {
    modifications.push({ set_back_period: { years: state.backPeriod } });
  }
  return { name: "interactive draft", modifications };
}

const evaluator = new ScenarioEvaluator(
  (draft) => {
    if (state.modelId === null) {
      return Promise.reject(new Error("no model loaded"));
    }
    return client.postScenario(state.modelId, draft);
  },
  (draft, result) => {
    const banner = el<HTMLDivElement>("delta-banner");
    const errors = el<HTMLUListElement>("scenario-errors");
    if (!result.ok) {
      errors.innerHTML = diagnosticsToFieldErrors(result.diagnostics)
        .map(
          (fe) =>
            `<li><code>${escapeHtml(fe.field)}</code>: ` +
            `${escapeHtml(fe.message)}</li>`,
        )
        .join("");
      return;
    }
    errors.innerHTML = "";
    const view = deltaView(result.value.delta);
    banner.innerHTML =
      `<strong>${view.relativeDisplay}</strong> ` +
      `(${view.absoluteDisplay}) vs base` +
      `<ul>${view.perEvent
        .map(
          (row) =>
            `<li>${escapeHtml(row.id)}: ${row.relativeDisplay} ` +
            `(${row.absoluteDisplay})</li>`,
        )
        .join("")}</ul>`;
    renderHistory();
  },
);

function renderHistory(): void {
  const history = el<HTMLOListElement>("scenario-history");
  history.innerHTML = evaluator.history
    .map(
      (entry, index) =>
        `<li>#${index + 1} ${escapeHtml(entry.name)} — ` +
        `${entry.view.relativeDisplay} (${entry.view.absoluteDisplay})</li>`,
    )
    .join("");
}

function submitDraft(): void {
  const errors = el<HTMLUListElement>("scenario-errors");
  const draft = currentDraft();
  const fieldErrors = validateDraft(draft);
  if (fieldErrors.length > 0) {
    errors.innerHTML = fieldErrors
      .map(
        (fe) =>
          `<li><code>${escapeHtml(fe.field)}</code>: ` +
          `${escapeHtml(fe.message)}</li>`,
      )
      .join("");
    return;
  }
  void evaluator.submit(draft);
}

function renderScenarioControls(report: Report): void {
  const events = Object.keys(report.event_totals).sort();
  const toggles = el<HTMLDivElement>("event-toggles");
  toggles.innerHTML = events
    .map(
      (event) =>
        `<label><input type="checkbox" data-event="${escapeHtml(event)}" ` +
        `checked> ${escapeHtml(event)}</label>`,
    )
    .join("");
  toggles.querySelectorAll("input").forEach((input) => {
    input.addEventListener("change", () => {
      const event = input.getAttribute("data-event") as string;
      if (input.checked) {
        state.disabledEvents.delete(event);
      } else {
        state.disabledEvents.add(event);
      }
      submitDraft();
    });
  });

  const pairs = report.cells
    .map((cell) => `${cell.component_id}/${cell.event_type_id}`)
    .sort();
  const retrofit = el<HTMLDivElement>("retrofit-controls");
  retrofit.innerHTML = pairs
    .map(
      (pair) =>
        `<label class="retrofit">${escapeHtml(pair)}` +
        `<input type="number" data-pair="${escapeHtml(pair)}" value="1.0" ` +
        `step="0.1"> × median</label>`,
    )
    .join("");
  retrofit.querySelectorAll("input").forEach((input) => {
    input.addEventListener("change", () => {
      const pair = input.getAttribute("data-pair") as string;
      state.retrofits.set(pair, Number((input as HTMLInputElement).value));
      submitDraft();
    });
  });

  const backPeriod = el<HTMLInputElement>("back-period");
  backPeriod.addEventListener("change", () => {
    state.backPeriod = backPeriod.value === "" ? null : Number(backPeriod.value);
    submitDraft();
  });
}

function renderCurveControls(): void {
  const target = el<HTMLSelectElement>("curve-target");
  const kind = el<HTMLSelectElement>("curve-kind");
  const fill = () => {
    const pairs =
      kind.value === "hazard" ? state.hazardTargets : state.fragilityTargets;
    target.innerHTML = pairs
      .map((p) => `<option>${escapeHtml(p)}</option>`)
      .join("");
  };
  fill();
  kind.addEventListener("change", fill);
  el<HTMLButtonElement>("plot-button").addEventListener("click", () => {
    void plotCurve();
  });
}

async function plotCurve(): Promise<void> {
  if (state.modelId === null) {
    return;
  }
  const kind = el<HTMLSelectElement>("curve-kind").value as
    | "fragility"
    | "hazard"
    | "failure";
  const target = el<HTMLSelectElement>("curve-target").value;
  const notice = el<HTMLParagraphElement>("curve-notice");
  const result = await client.getCurve(state.modelId, kind, target);
  if (!result.ok) {
    notice.textContent =
      result.status === 404
        ? `No such curve: ${target}`
        : `Curve request failed (${result.status})`;
    el<HTMLElement>("curve-plot").innerHTML = "";
    return;
  }
  notice.textContent = `${result.value.kind} — ${result.value.target} (${result.value.unit})`;
  const geom = { width: 560, height: 280, padding: 24 };
  const pts = polylinePoints(result.value.points, geom);
  let marker = "";
  if (kind === "fragility") {
    const median = medianCrossing(result.value.points);
    if (median !== null) {
      const scale = plotScale(result.value.points);
      const { px, py } = toPixel(median, scale, geom);
      marker =
        `<circle cx="${px.toFixed(1)}" cy="${py.toFixed(1)}" r="4" ` +
        `class="median-marker"/>` +
        `<text x="${(px + 6).toFixed(1)}" y="${(py - 6).toFixed(1)}" ` +
        `class="median-label">median ${formatShare(median.y)}</text>`;
    }
  }
  el<HTMLElement>("curve-plot").innerHTML =
    `<svg viewBox="0 0 ${geom.width} ${geom.height}">` +
    `<polyline points="${pts}" class="curve-line"/>` +
    `${marker}</svg>`;
}

async function uploadModel(): Promise<void> {
  const source = el<HTMLTextAreaElement>("model-source").value;
  const diagnostics = el<HTMLUListElement>("upload-diagnostics");
  const result = await client.uploadModel(source);
  if (!result.ok) {
    renderDiagnostics(diagnostics, result.diagnostics);
    return;
  }
  diagnostics.innerHTML = "";
  state.modelId = result.value.model_id;
  state.report = result.value.report;
  const targets = curveTargetsFromSource(source);
  state.hazardTargets = targets.hazards;
  state.fragilityTargets = targets.fragilities;
  state.disabledEvents.clear();
  state.retrofits.clear();
  state.backPeriod = null;
  el<HTMLSpanElement>("model-label").textContent = result.value.model_id;
  renderRanking(result.value.report);
  renderScenarioControls(result.value.report);
  renderCurveControls();
}

export function start(): void {
  el<HTMLButtonElement>("upload-button").addEventListener("click", () => {
    void uploadModel();
  });
  const file = el<HTMLInputElement>("model-file");
  file.addEventListener("change", async () => {
    const selected = file.files?.[0];
    if (selected !== undefined) {
      el<HTMLTextAreaElement>("model-source").value = await selected.text();
    }
  });
}

start();
