"""Model-file schema, validation diagnostics, and report serialization.

Models are single JSON documents with lower_snake_case fields; the same
format travels over HTTP and through the CLI. Loading validates the
whole document and reports every problem it finds, not just the first:
each diagnostic carries a severity, a stable machine-readable code, and
the path of the offending value. Error diagnostics block evaluation;
warnings do not.

Reports serialize either as a structured JSON document (lossless, for
machines and the browser UI) or as CSV rows with a stable column order
(for spreadsheets). Numbers are emitted at full precision; the tabular
form adds display columns rounded to two decimals. A loaded model
serializes to a canonical byte form: loading that form again and
re-serializing reproduces it exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from .economics import CostModel, RecoveryFunction
from .engine import (
    RemoveEvent,
    Retrofit,
    RiskReport,
    Scenario,
    SetBackPeriod,
    SetCost,
)
from .errors import ValidationError
from .fragility import FragilityCurve, Lognormal, Tabulated
from .hazard import ExceedanceCurve, HazardCurve, IntensityGrid
from .model import AnalysisSettings, ModelDocument
from .network import Component, Line, Network

SUPPORTED_VERSIONS = ("1",)

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    path: str
    message: str

    def render(self) -> str:
        return f"{self.severity}: {self.code} at {self.path}: {self.message}"


@dataclass(frozen=True)
class LoadResult:
    """Either a fully validated model or the complete list of findings."""

    model: ModelDocument | None
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.model is not None

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == ERROR]


@dataclass(frozen=True)
class ScenarioLoadResult:
    scenario: Scenario | None
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.scenario is not None


class _Collector:
    def __init__(self):
        self.items: list[Diagnostic] = []

    def error(self, code: str, path: str, message: str) -> None:
        self.items.append(Diagnostic(ERROR, code, path, message))

    def warning(self, code: str, path: str, message: str) -> None:
        self.items.append(Diagnostic(WARNING, code, path, message))

    def has_errors(self) -> bool:
        return any(d.severity == ERROR for d in self.items)

    def capture(self, code_path: str):
        return _Capture(self, code_path)


class _Capture:
    """Context manager turning a raised ValidationError into a diagnostic."""

    def __init__(self, collector: _Collector, path: str):
        self.collector = collector
        self.path = path

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if isinstance(exc, ValidationError):
            self.collector.error(exc.code, self.path, exc.message)
            return True
        return False


_MISSING = object()


def _get(obj: dict, field: str, path: str, col: _Collector, kinds, required=True):
    """Fetch a typed field, emitting field_missing/field_type diagnostics."""
    if field not in obj:
        if required:
            col.error("field_missing", path, f"required field {field!r} is missing")
        return _MISSING
    value = obj[field]
    if kinds == "number":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            col.error("field_type", f"{path}.{field}", "expected a number")
            return _MISSING
        return float(value)
    if not isinstance(value, kinds):
        col.error(
            "field_type",
            f"{path}.{field}",
            f"expected {getattr(kinds, '__name__', kinds)}, "
            f"got {type(value).__name__}",
        )
        return _MISSING
    return value


def _number_list(value, path: str, col: _Collector) -> list[float] | None:
    if not isinstance(value, list):
        col.error("field_type", path, "expected an array of numbers")
        return None
    out = []
    for i, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            col.error("field_type", f"{path}[{i}]", "expected a number")
            return None
        out.append(float(item))
    return out


def _point_list(value, path: str, col: _Collector) -> list[tuple[float, float]] | None:
    if not isinstance(value, list):
        col.error("field_type", path, "expected an array of [x, y] pairs")
        return None
    out = []
    for i, item in enumerate(value):
        if (
            not isinstance(item, list)
            or len(item) != 2
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in item)
        ):
            col.error("field_type", f"{path}[{i}]", "expected an [x, y] number pair")
            return None
        out.append((float(item[0]), float(item[1])))
    return out


def _string_list(value, path: str, col: _Collector) -> list[str] | None:
    if not isinstance(value, list):
        col.error("field_type", path, "expected an array of strings")
        return None
    for i, item in enumerate(value):
        if not isinstance(item, str):
            col.error("field_type", f"{path}[{i}]", "expected a string")
            return None
    return list(value)


def load_model(data: bytes | str) -> LoadResult:
    """Parse and validate a model document, accumulating all diagnostics."""
    col = _Collector()
    raw = _parse_json(data, col)
    if raw is None:
        return LoadResult(None, tuple(col.items))
    if not isinstance(raw, dict):
        col.error("document_not_object", "$", "model document must be a JSON object")
        return LoadResult(None, tuple(col.items))

    meta = _read_metadata(raw, col)
    areas = _read_identifier_list(raw, "areas", "area_duplicate", col)
    event_types = _read_identifier_list(raw, "event_types", "event_duplicate", col)
    hazards = _read_hazards(raw, col)
    fragilities = _read_fragilities(raw, col)
    cost_models = _read_cost_models(raw, col)
    components = _read_components(raw, col)
    nodes, lines = _read_network(raw, col)
    analysis = _read_analysis(raw, col)

    _cross_checks(
        col,
        areas=areas,
        event_types=event_types,
        hazards=hazards,
        fragilities=fragilities,
        cost_models=cost_models,
        components=components,
        nodes=nodes,
        lines=lines,
        analysis=analysis,
    )

    if col.has_errors():
        return LoadResult(None, tuple(col.items))

    network = Network(nodes=frozenset(nodes), lines=tuple(sorted(lines, key=lambda l: l.id)))
    model = ModelDocument(
        name=meta["name"],
        currency_label=meta["currency_label"],
        version=meta["version"],
        areas=tuple(sorted(areas)),
        event_types=tuple(sorted(event_types)),
        hazards={k: hazards[k] for k in sorted(hazards)},
        fragilities={k: fragilities[k] for k in sorted(fragilities)},
        cost_models={k: cost_models[k] for k in sorted(cost_models)},
        components={k: components[k] for k in sorted(components)},
        network=network,
        analysis=analysis,
    )
    return LoadResult(model, tuple(col.items))


def _parse_json(data: bytes | str, col: _Collector):
    try:
        text = data.decode("utf-8") if isinstance(data, bytes) else data
        return json.loads(text)
    except UnicodeDecodeError as exc:
        col.error("parse_error", "$", f"document is not valid UTF-8: {exc}")
        return None
    except json.JSONDecodeError as exc:
        col.error(
            "parse_error",
            f"line {exc.lineno}, column {exc.colno}",
            exc.msg,
        )
        return None


def _read_metadata(raw: dict, col: _Collector) -> dict:
    meta = {"name": "", "currency_label": "M EUR", "version": ""}
    obj = _get(raw, "metadata", "$", col, dict)
    if obj is _MISSING:
        return meta
    name = _get(obj, "name", "$.metadata", col, str)
    version = _get(obj, "version", "$.metadata", col, str)
    label = _get(obj, "currency_label", "$.metadata", col, str, required=False)
    if name is not _MISSING:
        meta["name"] = name
    if label is not _MISSING:
        meta["currency_label"] = label
    if version is not _MISSING:
        meta["version"] = version
        if version not in SUPPORTED_VERSIONS:
            col.error(
                "version_unsupported",
                "$.metadata.version",
                f"unsupported schema version {version!r}; "
                f"supported: {', '.join(SUPPORTED_VERSIONS)}",
            )
    return meta


def _read_identifier_list(
    raw: dict, field: str, duplicate_code: str, col: _Collector
) -> list[str]:
    value = _get(raw, field, "$", col, list)
    if value is _MISSING:
        return []
    ids = _string_list(value, f"$.{field}", col)
    if ids is None:
        return []
    seen = set()
    for i, item in enumerate(ids):
        if item in seen:
            col.error(
                duplicate_code, f"$.{field}[{i}]", f"identifier {item!r} repeated"
            )
        seen.add(item)
    return ids


def _read_hazards(raw: dict, col: _Collector) -> dict:
    hazards = {}
    records = _get(raw, "hazards", "$", col, list)
    if records is _MISSING:
        return hazards
    for i, record in enumerate(records):
        path = f"$.hazards[{i}]"
        if not isinstance(record, dict):
            col.error("field_type", path, "expected a hazard object")
            continue
        kind = _get(record, "kind", path, col, str)
        event = _get(record, "event_type_id", path, col, str)
        area = _get(record, "area_id", path, col, str)
        unit = _get(record, "unit", path, col, str)
        intensities_raw = _get(record, "intensities", path, col, list)
        if _MISSING in (kind, event, area, unit, intensities_raw):
            continue
        if kind not in ("exceedance", "occurrence"):
            col.error(
                "hazard_kind_invalid",
                f"{path}.kind",
                f"hazard kind must be 'exceedance' or 'occurrence', got {kind!r}",
            )
            continue
        intensities = _number_list(intensities_raw, f"{path}.intensities", col)
        values_raw = _get(record, kind, path, col, list)
        if intensities is None or values_raw is _MISSING:
            continue
        values = _number_list(values_raw, f"{path}.{kind}", col)
        if values is None:
            continue
        with col.capture(path):
            grid = IntensityGrid(
                event_type_id=event, unit=unit, values=tuple(intensities)
            )
            if kind == "exceedance":
                curve = ExceedanceCurve(
                    event_type_id=event,
                    area_id=area,
                    grid=grid,
                    exceedance=tuple(values),
                )
            else:
                curve = HazardCurve.from_point_masses(
                    event_type_id=event,
                    area_id=area,
                    grid=grid,
                    occurrence=tuple(values),
                )
            key = (event, area)
            if key in hazards:
                col.error(
                    "hazard_duplicate",
                    path,
                    f"a hazard for event {event!r} in area {area!r} "
                    f"is already defined",
                )
            else:
                hazards[key] = curve
    return hazards


def _read_fragilities(raw: dict, col: _Collector) -> dict:
    fragilities = {}
    records = _get(raw, "fragilities", "$", col, list)
    if records is _MISSING:
        return fragilities
    for i, record in enumerate(records):
        path = f"$.fragilities[{i}]"
        if not isinstance(record, dict):
            col.error("field_type", path, "expected a fragility object")
            continue
        component = _get(record, "component_id", path, col, str)
        event = _get(record, "event_type_id", path, col, str)
        unit = _get(record, "unit", path, col, str)
        form_tag = _get(record, "form", path, col, str)
        if _MISSING in (component, event, unit, form_tag):
            continue
        form = None
        if form_tag == "lognormal":
            median = _get(record, "median", path, col, "number")
            beta = _get(record, "beta", path, col, "number")
            if _MISSING in (median, beta):
                continue
            with col.capture(path):
                form = Lognormal(median=median, log_std=beta)
        elif form_tag == "tabulated":
            points_raw = _get(record, "points", path, col, list)
            if points_raw is _MISSING:
                continue
            points = _point_list(points_raw, f"{path}.points", col)
            if points is None:
                continue
            with col.capture(path):
                form = Tabulated(points=tuple(points))
        else:
            col.error(
                "fragility_form_invalid",
                f"{path}.form",
                f"fragility form must be 'lognormal' or 'tabulated', "
                f"got {form_tag!r}",
            )
            continue
        if form is None:
            continue
        key = (component, event)
        if key in fragilities:
            col.error(
                "fragility_duplicate",
                path,
                f"component {component!r} already has a fragility for "
                f"event {event!r}",
            )
            continue
        fragilities[key] = FragilityCurve(
            component_id=component, event_type_id=event, unit=unit, form=form
        )
    return fragilities


def _read_cost_models(raw: dict, col: _Collector) -> dict:
    cost_models = {}
    records = _get(raw, "cost_models", "$", col, list)
    if records is _MISSING:
        return cost_models
    for i, record in enumerate(records):
        path = f"$.cost_models[{i}]"
        if not isinstance(record, dict):
            col.error("field_type", path, "expected a cost model object")
            continue
        cid = _get(record, "id", path, col, str)
        if cid is _MISSING:
            continue
        cost = _read_cost_fields(record, path, col, cid)
        if cost is None:
            continue
        if cid in cost_models:
            col.error("cost_duplicate", path, f"cost model id {cid!r} repeated")
            continue
        cost_models[cid] = cost
    return cost_models


def _read_cost_fields(
    record: dict, path: str, col: _Collector, cid: str
) -> CostModel | None:
    direct = _get(record, "direct", path, col, "number")
    has_lump = "indirect_lump" in record
    has_recovery = "recovery" in record
    if has_lump and has_recovery:
        col.error(
            "cost_indirect_conflict",
            path,
            "give either indirect_lump or recovery, not both",
        )
        return None
    if not has_lump and not has_recovery:
        col.error(
            "cost_indirect_missing",
            path,
            "an indirect cost is required: indirect_lump or recovery",
        )
        return None
    if direct is _MISSING:
        return None
    if has_lump:
        lump = _get(record, "indirect_lump", path, col, "number")
        if lump is _MISSING:
            return None
        with col.capture(path):
            return CostModel(id=cid, direct_cost=direct, indirect=lump)
        return None
    recovery_raw = _get(record, "recovery", path, col, dict)
    if recovery_raw is _MISSING:
        return None
    downtime = _get(recovery_raw, "downtime_days", f"{path}.recovery", col, "number")
    points_raw = _get(recovery_raw, "loss_rate_points", f"{path}.recovery", col, list)
    if _MISSING in (downtime, points_raw):
        return None
    points = _point_list(points_raw, f"{path}.recovery.loss_rate_points", col)
    if points is None:
        return None
    with col.capture(f"{path}.recovery"):
        recovery = RecoveryFunction(
            downtime_days=downtime, loss_rate_points=tuple(points)
        )
        with col.capture(path):
            return CostModel(id=cid, direct_cost=direct, indirect=recovery)
    return None


def _read_components(raw: dict, col: _Collector) -> dict:
    components = {}
    records = _get(raw, "components", "$", col, list)
    if records is _MISSING:
        return components
    for i, record in enumerate(records):
        path = f"$.components[{i}]"
        if not isinstance(record, dict):
            col.error("field_type", path, "expected a component object")
            continue
        cid = _get(record, "id", path, col, str)
        kind = _get(record, "kind", path, col, str)
        area = _get(record, "area_id", path, col, str)
        cost_ref = _get(record, "cost_ref", path, col, str)
        if _MISSING in (cid, kind, area, cost_ref):
            continue
        if cid in components:
            col.error("component_duplicate", path, f"component id {cid!r} repeated")
            continue
        components[cid] = Component(id=cid, kind=kind, area_id=area, cost_ref=cost_ref)
    return components


def _read_network(raw: dict, col: _Collector) -> tuple[list[str], list[Line]]:
    nodes_raw = _get(raw, "nodes", "$", col, list)
    nodes: list[str] = []
    if nodes_raw is not _MISSING:
        parsed = _string_list(nodes_raw, "$.nodes", col)
        if parsed is not None:
            seen = set()
            for i, node in enumerate(parsed):
                if node in seen:
                    col.error("node_duplicate", f"$.nodes[{i}]", f"node {node!r} repeated")
                seen.add(node)
            nodes = parsed

    lines: list[Line] = []
    records = _get(raw, "lines", "$", col, list)
    if records is _MISSING:
        return nodes, lines
    seen_ids = set()
    for i, record in enumerate(records):
        path = f"$.lines[{i}]"
        if not isinstance(record, dict):
            col.error("field_type", path, "expected a line object")
            continue
        lid = _get(record, "id", path, col, str)
        from_node = _get(record, "from_node", path, col, str)
        to_node = _get(record, "to_node", path, col, str)
        comp_raw = _get(record, "components", path, col, list)
        if _MISSING in (lid, from_node, to_node, comp_raw):
            continue
        comps = _string_list(comp_raw, f"{path}.components", col)
        if comps is None:
            continue
        if lid in seen_ids:
            col.error("line_duplicate", path, f"line id {lid!r} repeated")
            continue
        seen_ids.add(lid)
        with col.capture(path):
            lines.append(
                Line(
                    id=lid,
                    from_node=from_node,
                    to_node=to_node,
                    components=tuple(comps),
                )
            )
    return nodes, lines


def _read_analysis(raw: dict, col: _Collector) -> AnalysisSettings:
    obj = _get(raw, "analysis", "$", col, dict, required=False)
    if obj is _MISSING:
        return AnalysisSettings()
    back_period = None
    if "back_period_years" in obj and obj["back_period_years"] is not None:
        value = _get(obj, "back_period_years", "$.analysis", col, "number")
        if value is not _MISSING:
            if not math.isfinite(value) or value <= 0:
                col.error(
                    "back_period_invalid",
                    "$.analysis.back_period_years",
                    f"back period must be > 0 years, got {value!r}",
                )
            else:
                back_period = value
    queries: list[tuple[str, str]] = []
    if "connection_queries" in obj:
        raw_queries = _get(obj, "connection_queries", "$.analysis", col, list)
        if raw_queries is not _MISSING:
            for i, pair in enumerate(raw_queries):
                qpath = f"$.analysis.connection_queries[{i}]"
                if (
                    not isinstance(pair, list)
                    or len(pair) != 2
                    or not all(isinstance(p, str) for p in pair)
                ):
                    col.error("field_type", qpath, "expected a [from, to] node pair")
                    continue
                queries.append((pair[0], pair[1]))
    return AnalysisSettings(
        back_period_years=back_period, connection_queries=tuple(queries)
    )


def _cross_checks(
    col: _Collector,
    *,
    areas,
    event_types,
    hazards,
    fragilities,
    cost_models,
    components,
    nodes,
    lines,
    analysis,
) -> None:
    area_set = set(areas)
    event_set = set(event_types)
    node_set = set(nodes)

    for (event, area), curve in sorted(hazards.items()):
        path = f"$.hazards[({event}, {area})]"
        if event not in event_set:
            col.error(
                "hazard_unknown_event", path, f"event type {event!r} is not declared"
            )
        if area not in area_set:
            col.error("hazard_unknown_area", path, f"area {area!r} is not declared")

    for (cid, eid), curve in sorted(fragilities.items()):
        path = f"$.fragilities[({cid}, {eid})]"
        if eid not in event_set:
            col.error(
                "fragility_unknown_event", path, f"event type {eid!r} is not declared"
            )
        if cid not in components:
            col.error(
                "fragility_unknown_component",
                path,
                f"component {cid!r} is not declared",
            )
            continue
        area = components[cid].area_id
        hazard = hazards.get((eid, area))
        if hazard is None:
            col.error(
                "fragility_missing_hazard",
                path,
                f"no hazard for event {eid!r} in area {area!r} (the area of "
                f"component {cid!r})",
            )
        elif hazard.grid.unit != curve.unit:
            col.error(
                "fragility_unit_mismatch",
                path,
                f"fragility unit {curve.unit!r} does not match hazard grid "
                f"unit {hazard.grid.unit!r}",
            )

    for cid, component in sorted(components.items()):
        path = f"$.components[{cid}]"
        if component.area_id not in area_set:
            col.error(
                "component_unknown_area",
                path,
                f"area {component.area_id!r} is not declared",
            )
        if component.cost_ref not in cost_models:
            col.error(
                "component_unknown_cost",
                path,
                f"cost model {component.cost_ref!r} is not declared",
            )

    line_count: dict[str, int] = {}
    for line in lines:
        path = f"$.lines[{line.id}]"
        for node in (line.from_node, line.to_node):
            if node not in node_set:
                col.error(
                    "line_unknown_node", path, f"node {node!r} is not declared"
                )
        for cid in line.components:
            if cid not in components:
                col.error(
                    "line_unknown_component",
                    path,
                    f"component {cid!r} is not declared",
                )
            line_count[cid] = line_count.get(cid, 0) + 1

    by_pair: dict[frozenset, list[Line]] = {}
    for line in lines:
        by_pair.setdefault(frozenset((line.from_node, line.to_node)), []).append(line)
    for pair, group in sorted(by_pair.items(), key=lambda kv: sorted(kv[0])):
        if len(group) < 2:
            continue
        seen: dict[str, str] = {}
        for line in group:
            for cid in line.components:
                if cid in seen:
                    col.error(
                        "parallel_shared_component",
                        f"$.lines[{line.id}]",
                        f"component {cid!r} is shared with parallel line "
                        f"{seen[cid]!r}; parallel lines must be independent",
                    )
                else:
                    seen[cid] = line.id

    for cid in sorted(components):
        count = line_count.get(cid, 0)
        if count == 0:
            col.warning(
                "component_not_on_line",
                f"$.components[{cid}]",
                f"component {cid!r} is not carried by any line; it still "
                f"contributes to network totals but not to line totals",
            )
        elif count > 1:
            col.warning(
                "component_on_multiple_lines",
                f"$.components[{cid}]",
                f"component {cid!r} appears on {count} lines; line importance "
                f"factors will double-count it",
            )

    for i, (from_node, to_node) in enumerate(analysis.connection_queries):
        qpath = f"$.analysis.connection_queries[{i}]"
        for node in (from_node, to_node):
            if node not in node_set:
                col.error(
                    "connection_unknown_node", qpath, f"node {node!r} is not declared"
                )
        if from_node == to_node:
            col.error(
                "connection_identical_nodes",
                qpath,
                "connection query needs two distinct nodes",
            )


# ---------------------------------------------------------------------------
# Scenario documents
# ---------------------------------------------------------------------------


def load_scenario(data: bytes | str) -> ScenarioLoadResult:
    """Parse a scenario document: a model-style JSON file with a
    top-level ``scenario`` object. Reference checks against a concrete
    model happen when the scenario is applied."""
    col = _Collector()
    raw = _parse_json(data, col)
    if raw is None:
        return ScenarioLoadResult(None, tuple(col.items))
    if not isinstance(raw, dict):
        col.error("document_not_object", "$", "scenario document must be a JSON object")
        return ScenarioLoadResult(None, tuple(col.items))
    obj = raw.get("scenario", raw)
    if not isinstance(obj, dict):
        col.error("field_type", "$.scenario", "expected a scenario object")
        return ScenarioLoadResult(None, tuple(col.items))
    scenario = parse_scenario_object(obj, col)
    if col.has_errors():
        return ScenarioLoadResult(None, tuple(col.items))
    return ScenarioLoadResult(scenario, tuple(col.items))


def scenario_from_dict(obj) -> ScenarioLoadResult:
    """Validate a scenario given as an already-parsed JSON object."""
    col = _Collector()
    if not isinstance(obj, dict):
        col.error("field_type", "$.scenario", "expected a scenario object")
        return ScenarioLoadResult(None, tuple(col.items))
    inner = obj.get("scenario", obj)
    if not isinstance(inner, dict):
        col.error("field_type", "$.scenario", "expected a scenario object")
        return ScenarioLoadResult(None, tuple(col.items))
    scenario = parse_scenario_object(inner, col)
    if col.has_errors():
        return ScenarioLoadResult(None, tuple(col.items))
    return ScenarioLoadResult(scenario, tuple(col.items))


def parse_scenario_object(obj: dict, col: _Collector | None = None) -> Scenario | None:
    """Build a Scenario from its JSON object form, collecting diagnostics."""
    col = col if col is not None else _Collector()
    name = obj.get("name", "")
    if not isinstance(name, str):
        col.error("field_type", "$.scenario.name", "expected a string")
        name = ""
    mods_raw = obj.get("modifications", [])
    if not isinstance(mods_raw, list):
        col.error("field_type", "$.scenario.modifications", "expected an array")
        mods_raw = []
    modifications = []
    for i, mod in enumerate(mods_raw):
        path = f"$.scenario.modifications[{i}]"
        parsed = _parse_modification(mod, path, col)
        if parsed is not None:
            modifications.append(parsed)
    if col.has_errors():
        return None
    return Scenario(name=name, modifications=tuple(modifications))


def _parse_modification(mod, path: str, col: _Collector):
    if not isinstance(mod, dict) or len(mod) != 1:
        col.error(
            "modification_invalid",
            path,
            "expected an object with exactly one modification key",
        )
        return None
    tag, body = next(iter(mod.items()))
    if not isinstance(body, dict):
        col.error("modification_invalid", path, f"{tag!r} body must be an object")
        return None
    if tag == "remove_event":
        event = _get(body, "event_type_id", path, col, str)
        if event is _MISSING:
            return None
        return RemoveEvent(event_type_id=event)
    if tag == "retrofit":
        component = _get(body, "component_id", path, col, str)
        event = _get(body, "event_type_id", path, col, str)
        scale = _get(body, "median_scale", path, col, "number")
        if _MISSING in (component, event, scale):
            return None
        with col.capture(path):
            return Retrofit(
                component_id=component, event_type_id=event, median_scale=scale
            )
        return None
    if tag == "set_cost":
        component = _get(body, "component_id", path, col, str)
        cost_raw = _get(body, "cost", path, col, dict)
        if _MISSING in (component, cost_raw):
            return None
        cost = _read_cost_fields(cost_raw, f"{path}.cost", col, f"scenario:{component}")
        if cost is None:
            return None
        return SetCost(component_id=component, cost=cost)
    if tag == "set_back_period":
        years = _get(body, "years", path, col, "number")
        if years is _MISSING:
            return None
        with col.capture(path):
            return SetBackPeriod(years=years)
        return None
    col.error("modification_invalid", path, f"unknown modification kind {tag!r}")
    return None


# ---------------------------------------------------------------------------
# Canonical model serialization
# ---------------------------------------------------------------------------


def model_to_dict(model: ModelDocument) -> dict:
    """Canonical JSON-ready form of a model (stable ordering)."""
    hazards = []
    for (event, area), curve in sorted(model.hazards.items()):
        record = {
            "kind": "exceedance" if isinstance(curve, ExceedanceCurve) else "occurrence",
            "event_type_id": event,
            "area_id": area,
            "unit": curve.grid.unit,
            "intensities": list(curve.grid.values),
        }
        if isinstance(curve, ExceedanceCurve):
            record["exceedance"] = list(curve.exceedance)
        else:
            record["occurrence"] = list(curve.occurrence)
        hazards.append(record)

    fragilities = []
    for (cid, eid), curve in sorted(model.fragilities.items()):
        record = {
            "component_id": cid,
            "event_type_id": eid,
            "unit": curve.unit,
        }
        if isinstance(curve.form, Lognormal):
            record["form"] = "lognormal"
            record["median"] = curve.form.median
            record["beta"] = curve.form.log_std
        else:
            record["form"] = "tabulated"
            record["points"] = [[x, p] for x, p in curve.form.points]
        fragilities.append(record)

    cost_models = []
    for cid in sorted(model.cost_models):
        cm = model.cost_models[cid]
        record = {"id": cid, "direct": cm.direct_cost}
        if isinstance(cm.indirect, RecoveryFunction):
            record["recovery"] = {
                "downtime_days": cm.indirect.downtime_days,
                "loss_rate_points": [[t, r] for t, r in cm.indirect.loss_rate_points],
            }
        else:
            record["indirect_lump"] = cm.indirect
        cost_models.append(record)

    components = [
        {
            "id": cid,
            "kind": model.components[cid].kind,
            "area_id": model.components[cid].area_id,
            "cost_ref": model.components[cid].cost_ref,
        }
        for cid in sorted(model.components)
    ]

    lines = [
        {
            "id": line.id,
            "from_node": line.from_node,
            "to_node": line.to_node,
            "components": list(line.components),
        }
        for line in sorted(model.network.lines, key=lambda l: l.id)
    ]

    return {
        "metadata": {
            "name": model.name,
            "currency_label": model.currency_label,
            "version": model.version,
        },
        "areas": sorted(model.areas),
        "event_types": sorted(model.event_types),
        "hazards": hazards,
        "fragilities": fragilities,
        "cost_models": cost_models,
        "components": components,
        "nodes": sorted(model.network.nodes),
        "lines": lines,
        "analysis": {
            "back_period_years": model.analysis.back_period_years,
            "connection_queries": [
                [a, b] for a, b in model.analysis.connection_queries
            ],
        },
    }


def serialize_model(model: ModelDocument) -> bytes:
    return (json.dumps(model_to_dict(model), indent=2) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Report serialization
# ---------------------------------------------------------------------------


def report_to_dict(report: RiskReport) -> dict:
    """Structured JSON-ready form of a risk report."""

    def triple(t) -> dict:
        return {"direct": t.direct, "indirect": t.indirect, "total": t.total}

    total = report.total.total
    cells = []
    for cell in report.cells:
        importance = cell.pcf_total / total if total > 0 else None
        cells.append(
            {
                "component_id": cell.component_id,
                "event_type_id": cell.event_type_id,
                "pf": cell.pf,
                "pcf_direct": cell.pcf_direct,
                "pcf_indirect": cell.pcf_indirect,
                "pcf_total": cell.pcf_total,
                "importance": importance,
            }
        )
    return {
        "schema": "netrisk-report/1",
        "total": triple(report.total),
        "importance_defined": report.importance_defined,
        "cells": cells,
        "component_totals": {k: triple(v) for k, v in report.component_totals.items()},
        "event_totals": {k: triple(v) for k, v in report.event_totals.items()},
        "line_totals": {k: triple(v) for k, v in report.line_totals.items()},
        "component_importance": report.component_importance,
        "event_importance": report.event_importance,
        "line_importance": report.line_importance,
        "connection_failure_probability": [
            {"from_node": a, "to_node": b, "value": v}
            for (a, b), v in report.connection_pf.items()
        ],
        "warnings": list(report.warnings),
    }


TABULAR_COLUMNS = (
    "row",
    "component",
    "event",
    "pf",
    "pcf_direct",
    "pcf_indirect",
    "pcf_total",
    "importance",
    "pcf_total_2dp",
    "importance_2dp",
)

UNDEFINED = "undefined"


def _fmt(value: float | None) -> str:
    return UNDEFINED if value is None else repr(value)


def _fmt2(value: float | None) -> str:
    return UNDEFINED if value is None else f"{value:.2f}"


def report_to_tabular(report: RiskReport) -> str:
    """CSV form: one row per cell, then component totals, event summaries
    and the network total. Undefined importances render as a marker."""
    total = report.total.total
    defined = total > 0

    def importance(part: float) -> float | None:
        return part / total if defined else None

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TABULAR_COLUMNS)
    for cell in report.cells:
        imp = importance(cell.pcf_total)
        writer.writerow(
            [
                "cell",
                cell.component_id,
                cell.event_type_id,
                repr(cell.pf),
                repr(cell.pcf_direct),
                repr(cell.pcf_indirect),
                repr(cell.pcf_total),
                _fmt(imp),
                _fmt2(cell.pcf_total),
                _fmt2(imp),
            ]
        )
    for cid, t in report.component_totals.items():
        imp = importance(t.total)
        writer.writerow(
            [
                "component_total",
                cid,
                "",
                "",
                repr(t.direct),
                repr(t.indirect),
                repr(t.total),
                _fmt(imp),
                _fmt2(t.total),
                _fmt2(imp),
            ]
        )
    for eid, t in report.event_totals.items():
        imp = importance(t.total)
        writer.writerow(
            [
                "event_total",
                "",
                eid,
                "",
                repr(t.direct),
                repr(t.indirect),
                repr(t.total),
                _fmt(imp),
                _fmt2(t.total),
                _fmt2(imp),
            ]
        )
    writer.writerow(
        [
            "network_total",
            "",
            "",
            "",
            repr(report.total.direct),
            repr(report.total.indirect),
            repr(report.total.total),
            _fmt(1.0 if defined else None),
            _fmt2(report.total.total),
            _fmt2(1.0 if defined else None),
        ]
    )
    return buffer.getvalue()


def emit_report(report: RiskReport, format: str = "structured") -> bytes:
    """Serialize a report; ``format`` is 'structured' (JSON) or 'tabular' (CSV)."""
    if format == "structured":
        return (json.dumps(report_to_dict(report), indent=2) + "\n").encode("utf-8")
    if format == "tabular":
        return report_to_tabular(report).encode("utf-8")
    raise ValidationError(
        "format_invalid", f"unknown report format {format!r}; "
        f"expected 'structured' or 'tabular'"
    )


def delta_to_dict(delta) -> dict:
    """Structured JSON-ready form of a what-if delta."""

    def entry(e) -> dict:
        return {"absolute": e.absolute, "relative": e.relative}

    return {
        "schema": "netrisk-delta/1",
        "total": entry(delta.total),
        "per_component": {k: entry(v) for k, v in delta.per_component.items()},
        "per_event": {k: entry(v) for k, v in delta.per_event.items()},
        "per_line": {k: entry(v) for k, v in delta.per_line.items()},
    }
