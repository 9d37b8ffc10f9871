/**
 * Scenario drafts, client-side validation, delta view models and the
 * debounced evaluator.
 *
 * The delta view copies the service's numbers verbatim; the evaluator
 * keeps at most one request in flight and collapses rapid edits onto
 * the latest draft.
 */

import type { ApiResult } from "./api.js";
import { formatRelative, formatSignedMoney } from "./format.js";
import type {
  Delta,
  Diagnostic,
  Modification,
  ScenarioDraft,
  ScenarioOutcome,
} from "./types.js";

export interface FieldError {
  field: string;
  message: string;
}

export function validateDraft(draft: ScenarioDraft): FieldError[] {
  const errors: FieldError[] = [];
  draft.modifications.forEach((mod, index) => {
    if ("retrofit" in mod) {
      const scale = mod.retrofit.median_scale;
      if (!Number.isFinite(scale) || scale <= 0) {
        errors.push({
          field: `modifications[${index}].retrofit.median_scale`,
          message: "retrofit scale must be a positive number",
        });
      }
    } else if ("set_back_period" in mod) {
      const years = mod.set_back_period.years;
      if (!Number.isFinite(years) || years <= 0) {
        errors.push({
          field: `modifications[${index}].set_back_period.years`,
          message: "back period must be a positive number of years",
        });
      }
    } else if ("set_cost" in mod) {
      const cost = mod.set_cost.cost;
      if (!Number.isFinite(cost.direct) || cost.direct < 0) {
        errors.push({
          field: `modifications[${index}].set_cost.cost.direct`,
          message: "direct cost must be zero or more",
        });
      }
      if (!Number.isFinite(cost.indirect_lump) || cost.indirect_lump < 0) {
        errors.push({
          field: `modifications[${index}].set_cost.cost.indirect_lump`,
          message: "indirect cost must be zero or more",
        });
      }
    }
  });
  return errors;
}

export function buildScenarioDocument(draft: ScenarioDraft): ScenarioDraft {
  return {
    name: draft.name,
    modifications: draft.modifications.map(
      (mod) => JSON.parse(JSON.stringify(mod)) as Modification,
    ),
  };
}

export interface DeltaRow {
  id: string;
  absolute: number;
  relative: number | null;
  absoluteDisplay: string;
  relativeDisplay: string;
}

export interface DeltaView {
  absolute: number;
  relative: number | null;
  absoluteDisplay: string;
  relativeDisplay: string;
  perEvent: DeltaRow[];
  perComponent: DeltaRow[];
  perLine: DeltaRow[];
}

function rows(entries: Record<string, { absolute: number; relative: number | null }>): DeltaRow[] {
  return Object.keys(entries)
    .sort()
    .map((id) => {
      const entry = entries[id] as { absolute: number; relative: number | null };
      return {
        id,
        absolute: entry.absolute,
        relative: entry.relative,
        absoluteDisplay: formatSignedMoney(entry.absolute),
        relativeDisplay: formatRelative(entry.relative),
      };
    });
}

export function deltaView(delta: Delta): DeltaView {
  return {
    absolute: delta.total.absolute,
    relative: delta.total.relative,
    absoluteDisplay: formatSignedMoney(delta.total.absolute),
    relativeDisplay: formatRelative(delta.total.relative),
    perEvent: rows(delta.per_event),
    perComponent: rows(delta.per_component),
    perLine: rows(delta.per_line),
  };
}

export function diagnosticsToFieldErrors(
  diagnostics: Diagnostic[],
): FieldError[] {
  return diagnostics.map((diag) => ({
    field: diag.path,
    message: `${diag.code}: ${diag.message}`,
  }));
}

export interface HistoryEntry {
  name: string;
  draft: ScenarioDraft;
  view: DeltaView;
}

export type OutcomeHandler = (
  draft: ScenarioDraft,
  result: ApiResult<ScenarioOutcome>,
) => void;

/** Serializes scenario evaluations: one request in flight, latest edit wins. */
export class ScenarioEvaluator {
  private busy = false;
  private queued: ScenarioDraft | null = null;
  readonly history: HistoryEntry[] = [];

  constructor(
    private readonly post: (
      draft: ScenarioDraft,
    ) => Promise<ApiResult<ScenarioOutcome>>,
    private readonly onOutcome: OutcomeHandler,
  ) {}

  async submit(draft: ScenarioDraft): Promise<void> {
    if (this.busy) {
      this.queued = draft;
      return;
    }
    this.busy = true;
    try {
      const result = await this.post(buildScenarioDocument(draft));
      if (result.ok) {
        this.history.push({
          name: draft.name,
          draft: buildScenarioDocument(draft),
          view: deltaView(result.value.delta),
        });
      }
      this.onOutcome(draft, result);
    } finally {
      this.busy = false;
      const next = this.queued;
      this.queued = null;
      if (next !== null) {
        await this.submit(next);
      }
    }
  }
}
