"""Probable-cost-of-failure computation, importance factors and what-ifs.

The probable cost of failure of a component under one event type is its
failure cost times its annual failure probability, an annual
insurance-fee equivalent. Cell values are additive: component, event,
line and network totals are plain sums, which is exact for expected
repair cost regardless of failure dependence. Importance factors divide
a part's probable cost by the network total, so each family (components,
events, lines) sums to one whenever the total is positive; a zero-total
model yields an explicit undefined state instead.

Connection failure probabilities use the complement-product combination
of each component's per-event probabilities before the series-parallel
composition, since "the connection failed this year" is a union of
events rather than an expectation.

Scenarios describe what-if modifications (remove an event type, retrofit
a fragility, replace a cost model, change the back period) applied in
order to a base model, producing a fresh model; deltas between the base
and variant reports quantify the benefit of the modification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .economics import CostModel, total_failure_cost
from .errors import ValidationError
from .fragility import (
    AnnualFailureProbability,
    FragilityCurve,
    Lognormal,
    Tabulated,
    combine_event_failure_probabilities,
    component_annual_failure_probability,
)
from .hazard import BackPeriod, ExceedanceCurve, HazardCurve, exceedance_to_occurrence, truncate_by_back_period
from .model import AnalysisSettings, ModelDocument
from .network import connection_failure_probability


@dataclass(frozen=True)
class RiskCell:
    """Probable cost of one (component, event type) pair, M EUR per year."""

    component_id: str
    event_type_id: str
    pf: float
    pcf_direct: float
    pcf_indirect: float
    pcf_total: float


@dataclass(frozen=True)
class PcfTotal:
    direct: float
    indirect: float
    total: float

    def __add__(self, other: "PcfTotal") -> "PcfTotal":
        return PcfTotal(
            self.direct + other.direct,
            self.indirect + other.indirect,
            self.total + other.total,
        )


_ZERO = PcfTotal(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class RiskReport:
    """Full evaluation outcome for one model.

    Importance maps are ``None`` when the network total is zero: the
    shares are undefined then, and downstream formatting renders an
    explicit marker rather than a number.
    """

    cells: tuple[RiskCell, ...]
    component_totals: dict[str, PcfTotal]
    event_totals: dict[str, PcfTotal]
    line_totals: dict[str, PcfTotal]
    total: PcfTotal
    component_importance: dict[str, float] | None
    event_importance: dict[str, float] | None
    line_importance: dict[str, float] | None
    connection_pf: dict[tuple[str, str], float]
    warnings: tuple[str, ...]

    @property
    def importance_defined(self) -> bool:
        return self.component_importance is not None


@dataclass(frozen=True)
class RemoveEvent:
    event_type_id: str


@dataclass(frozen=True)
class Retrofit:
    """Scale a fragility curve's intensity axis, e.g. 2.0 doubles the median."""

    component_id: str
    event_type_id: str
    median_scale: float

    def __post_init__(self):
        if not math.isfinite(self.median_scale) or self.median_scale <= 0:
            raise ValidationError(
                "retrofit_scale_invalid",
                f"retrofit scale must be > 0, got {self.median_scale!r}",
            )


@dataclass(frozen=True)
class SetCost:
    component_id: str
    cost: CostModel


@dataclass(frozen=True)
class SetBackPeriod:
    years: float

    def __post_init__(self):
        if not math.isfinite(self.years) or self.years <= 0:
            raise ValidationError(
                "back_period_invalid",
                f"back period must be > 0 years, got {self.years!r}",
            )


Modification = RemoveEvent | Retrofit | SetCost | SetBackPeriod


@dataclass(frozen=True)
class Scenario:
    name: str
    modifications: tuple[Modification, ...]


@dataclass(frozen=True)
class DeltaEntry:
    """Absolute and relative change; relative is None for a zero base."""

    absolute: float
    relative: float | None


@dataclass(frozen=True)
class WhatIfDelta:
    total: DeltaEntry
    per_component: dict[str, DeltaEntry]
    per_event: dict[str, DeltaEntry]
    per_line: dict[str, DeltaEntry]


def probable_cost(cost: float, pf: float) -> float:
    """Annual probable cost: failure cost times annual failure probability."""
    if not math.isfinite(cost) or cost < 0:
        raise ValidationError(
            "cost_negative", f"failure cost must be >= 0, got {cost!r}"
        )
    if not math.isfinite(pf) or not 0.0 <= pf <= 1.0:
        raise ValidationError(
            "probability_out_of_range",
            f"failure probability must be in [0, 1], got {pf!r}",
        )
    return cost * pf


def importance_factor(part_pcf: float, total_pcf: float) -> float | None:
    """Share of the total probable cost due to one part, or None if undefined."""
    if total_pcf < 0 or part_pcf < -1e-12 or part_pcf > total_pcf + 1e-12:
        raise ValidationError(
            "importance_out_of_range",
            f"part ({part_pcf!r}) must lie within [0, total] "
            f"(total {total_pcf!r})",
        )
    if total_pcf == 0.0:
        return None
    return min(max(part_pcf / total_pcf, 0.0), 1.0)


def _occurrence_form(curve) -> HazardCurve:
    if isinstance(curve, ExceedanceCurve):
        return exceedance_to_occurrence(curve)
    return curve


def evaluate(model: ModelDocument) -> RiskReport:
    """Evaluate a validated model into a full risk report.

    Hazards are truncated by the model's back period, each fragility is
    convolved with its hazard, probable costs are split direct/indirect,
    and importance factors plus connection failure probabilities are
    derived. The computation is deterministic: identical models yield
    bit-identical reports.
    """
    warnings: list[str] = []
    back_period = (
        BackPeriod(model.analysis.back_period_years)
        if model.analysis.back_period_years is not None
        else None
    )

    truncated: dict[tuple[str, str], HazardCurve] = {}
    for key in sorted(model.hazards):
        curve = _occurrence_form(model.hazards[key])
        if back_period is not None:
            result = truncate_by_back_period(curve, back_period)
            curve = result.curve
            if result.emptied:
                warnings.append(
                    f"hazard ({key[0]}, {key[1]}) has no bins more frequent "
                    f"than 1/{back_period.years:g} per year; it contributes "
                    f"no risk"
                )
        truncated[key] = curve

    cells: list[RiskCell] = []
    per_component_events: dict[str, list[AnnualFailureProbability]] = {}
    for cid, eid in model.component_event_pairs():
        component = model.components[cid]
        fragility = model.fragilities[(cid, eid)]
        hazard = truncated[(eid, component.area_id)]
        pf = component_annual_failure_probability(fragility, hazard)
        cost = total_failure_cost(model.cost_models[component.cost_ref])
        cells.append(
            RiskCell(
                component_id=cid,
                event_type_id=eid,
                pf=pf.value,
                pcf_direct=probable_cost(cost.direct, pf.value),
                pcf_indirect=probable_cost(cost.indirect, pf.value),
                pcf_total=probable_cost(cost.total, pf.value),
            )
        )
        per_component_events.setdefault(cid, []).append(pf)

    component_totals = {cid: _ZERO for cid in sorted(model.components)}
    event_totals = {eid: _ZERO for eid in sorted(model.event_types)}
    for cell in cells:
        bump = PcfTotal(cell.pcf_direct, cell.pcf_indirect, cell.pcf_total)
        component_totals[cell.component_id] = (
            component_totals[cell.component_id] + bump
        )
        event_totals[cell.event_type_id] = event_totals[cell.event_type_id] + bump

    line_totals: dict[str, PcfTotal] = {}
    for line in sorted(model.network.lines, key=lambda l: l.id):
        acc = _ZERO
        for cid in line.components:
            acc = acc + component_totals.get(cid, _ZERO)
        line_totals[line.id] = acc

    total = _ZERO
    for cid in sorted(component_totals):
        total = total + component_totals[cid]

    if total.total > 0.0:
        component_importance = {
            cid: t.total / total.total for cid, t in component_totals.items()
        }
        event_importance = {
            eid: t.total / total.total for eid, t in event_totals.items()
        }
        line_importance = {
            lid: t.total / total.total for lid, t in line_totals.items()
        }
    else:
        component_importance = None
        event_importance = None
        line_importance = None
        warnings.append(
            "total probable cost is zero; importance factors are undefined"
        )

    combined_pf = {
        cid: combine_event_failure_probabilities(pfs)
        for cid, pfs in per_component_events.items()
    }
    for cid in model.components:
        combined_pf.setdefault(cid, 0.0)

    connection_pf: dict[tuple[str, str], float] = {}
    for from_node, to_node in model.analysis.connection_queries:
        connection_pf[(from_node, to_node)] = connection_failure_probability(
            model.network, from_node, to_node, combined_pf
        )

    return RiskReport(
        cells=tuple(cells),
        component_totals=component_totals,
        event_totals=event_totals,
        line_totals=line_totals,
        total=total,
        component_importance=component_importance,
        event_importance=event_importance,
        line_importance=line_importance,
        connection_pf=connection_pf,
        warnings=tuple(warnings),
    )


def apply_scenario(model: ModelDocument, scenario: Scenario) -> ModelDocument:
    """Apply scenario modifications in order, returning a new model.

    The base model is never touched. Removing an event type deletes its
    hazard curves and the fragilities that reference it; a retrofit
    scales the named fragility towards higher intensities; a cost change
    installs a private cost model for the named component.
    """
    current = model
    for index, mod in enumerate(scenario.modifications):
        if isinstance(mod, RemoveEvent):
            current = _remove_event(current, mod.event_type_id)
        elif isinstance(mod, Retrofit):
            current = _retrofit(current, mod)
        elif isinstance(mod, SetCost):
            current = _set_cost(current, mod)
        elif isinstance(mod, SetBackPeriod):
            current = replace(
                current,
                analysis=AnalysisSettings(
                    back_period_years=mod.years,
                    connection_queries=current.analysis.connection_queries,
                ),
            )
        else:
            raise ValidationError(
                "modification_invalid",
                f"unknown modification at position {index}: {mod!r}",
            )
    return current


def _remove_event(model: ModelDocument, event_type_id: str) -> ModelDocument:
    if event_type_id not in model.event_types:
        raise ValidationError(
            "scenario_unknown_event",
            f"cannot remove unknown event type {event_type_id!r}",
        )
    hazards = {
        key: curve
        for key, curve in model.hazards.items()
        if key[0] != event_type_id
    }
    fragilities = {
        key: curve
        for key, curve in model.fragilities.items()
        if key[1] != event_type_id
    }
    return replace(model, hazards=hazards, fragilities=fragilities)


def _scaled_form(form, scale: float):
    if isinstance(form, Lognormal):
        return Lognormal(median=form.median * scale, log_std=form.log_std)
    if isinstance(form, Tabulated):
        return Tabulated(points=tuple((x * scale, p) for x, p in form.points))
    raise ValidationError(
        "modification_invalid", f"cannot retrofit fragility form {form!r}"
    )


def _retrofit(model: ModelDocument, mod: Retrofit) -> ModelDocument:
    key = (mod.component_id, mod.event_type_id)
    if key not in model.fragilities:
        raise ValidationError(
            "scenario_unknown_fragility",
            f"no fragility for component {mod.component_id!r} and event "
            f"{mod.event_type_id!r}",
        )
    curve = model.fragilities[key]
    fragilities = dict(model.fragilities)
    fragilities[key] = FragilityCurve(
        component_id=curve.component_id,
        event_type_id=curve.event_type_id,
        unit=curve.unit,
        form=_scaled_form(curve.form, mod.median_scale),
    )
    return replace(model, fragilities=fragilities)


def _set_cost(model: ModelDocument, mod: SetCost) -> ModelDocument:
    if mod.component_id not in model.components:
        raise ValidationError(
            "scenario_unknown_component",
            f"cannot change cost of unknown component {mod.component_id!r}",
        )
    component = model.components[mod.component_id]
    new_ref = f"scenario:{mod.component_id}"
    cost_models = dict(model.cost_models)
    cost_models[new_ref] = replace(mod.cost, id=new_ref)
    components = dict(model.components)
    components[mod.component_id] = replace(component, cost_ref=new_ref)
    return replace(model, cost_models=cost_models, components=components)


def what_if_delta(base: RiskReport, variant: RiskReport) -> WhatIfDelta:
    """Change of probable costs from a base report to a variant report."""
    if set(base.component_totals) != set(variant.component_totals) or set(
        base.line_totals
    ) != set(variant.line_totals):
        raise ValidationError(
            "topology_mismatch",
            "base and variant reports describe different component or line sets",
        )

    def entry(base_value: float, variant_value: float) -> DeltaEntry:
        absolute = variant_value - base_value
        relative = absolute / base_value if base_value > 0.0 else None
        return DeltaEntry(absolute=absolute, relative=relative)

    events = sorted(set(base.event_totals) | set(variant.event_totals))
    return WhatIfDelta(
        total=entry(base.total.total, variant.total.total),
        per_component={
            cid: entry(
                base.component_totals[cid].total,
                variant.component_totals[cid].total,
            )
            for cid in sorted(base.component_totals)
        },
        per_event={
            eid: entry(
                base.event_totals.get(eid, _ZERO).total,
                variant.event_totals.get(eid, _ZERO).total,
            )
            for eid in events
        },
        per_line={
            lid: entry(
                base.line_totals[lid].total, variant.line_totals[lid].total
            )
            for lid in sorted(base.line_totals)
        },
    )
