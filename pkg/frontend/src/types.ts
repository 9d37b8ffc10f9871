/**
 * Wire types mirroring the risk service's JSON payloads.
 *
 * Every number rendered by the UI comes from one of these fields; the
 * client never recomputes probable costs or importance factors.
 */

export interface Totals {
  direct: number;
  indirect: number;
  total: number;
}

export interface ReportCell {
  component_id: string;
  event_type_id: string;
  pf: number;
  pcf_direct: number;
  pcf_indirect: number;
  pcf_total: number;
  importance: number | null;
}

export interface ConnectionPf {
  from_node: string;
  to_node: string;
  value: number;
}

export interface Report {
  schema: string;
  total: Totals;
  importance_defined: boolean;
  cells: ReportCell[];
  component_totals: Record<string, Totals>;
  event_totals: Record<string, Totals>;
  line_totals: Record<string, Totals>;
  component_importance: Record<string, number> | null;
  event_importance: Record<string, number> | null;
  line_importance: Record<string, number> | null;
  connection_failure_probability: ConnectionPf[];
  warnings: string[];
}

export interface Diagnostic {
  severity: string;
  code: string;
  path: string;
  message: string;
}

export interface DeltaEntry {
  absolute: number;
  relative: number | null;
}

export interface Delta {
  schema: string;
  total: DeltaEntry;
  per_component: Record<string, DeltaEntry>;
  per_event: Record<string, DeltaEntry>;
  per_line: Record<string, DeltaEntry>;
}

export interface ScenarioOutcome {
  report: Report;
  delta: Delta;
}

export interface UploadOutcome {
  model_id: string;
  report: Report;
}

export interface CurvePoint {
  x: number;
  y: number;
}

export interface Curve {
  kind: string;
  target: string;
  unit: string;
  points: CurvePoint[];
}

export type Modification =
  | { remove_event: { event_type_id: string } }
  | {
      retrofit: {
        component_id: string;
        event_type_id: string;
        median_scale: number;
      };
    }
  | {
      set_cost: {
        component_id: string;
        cost: { direct: number; indirect_lump: number };
      };
    }
  | { set_back_period: { years: number } };

export interface ScenarioDraft {
  name: string;
  modifications: Modification[];
}
