/**
 * Importance ranking view model.
 *
 * Rows are ordered by the service-computed importance at full precision
 * (ties broken by identifier) and carry two-decimal display strings.
 * A report with undefined importances yields null: the "no risk" state.
 */

import { formatShare } from "./format.js";
import type { Report } from "./types.js";

export interface EventShare {
  event: string;
  share: number;
  display: string;
}

export interface RankingRow {
  id: string;
  importance: number;
  display: string;
  perEvent: EventShare[];
}

export interface FamilyRow {
  id: string;
  importance: number;
  display: string;
}

export function computeRankingRows(report: Report): RankingRow[] | null {
  const importance = report.component_importance;
  if (!report.importance_defined || importance === null) {
    return null;
  }
  const rows: RankingRow[] = Object.keys(importance).map((id) => ({
    id,
    importance: importance[id] as number,
    display: formatShare(importance[id] as number),
    perEvent: report.cells
      .filter((cell) => cell.component_id === id && cell.importance !== null)
      .map((cell) => ({
        event: cell.event_type_id,
        share: cell.importance as number,
        display: formatShare(cell.importance as number),
      }))
      .sort((a, b) => a.event.localeCompare(b.event)),
  }));
  rows.sort(
    (a, b) => b.importance - a.importance || a.id.localeCompare(b.id),
  );
  return rows;
}

export function rankFamily(
  importance: Record<string, number> | null,
): FamilyRow[] | null {
  if (importance === null) {
    return null;
  }
  const rows: FamilyRow[] = Object.keys(importance).map((id) => ({
    id,
    importance: importance[id] as number,
    display: formatShare(importance[id] as number),
  }));
  rows.sort(
    (a, b) => b.importance - a.importance || a.id.localeCompare(b.id),
  );
  return rows;
}
