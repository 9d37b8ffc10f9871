"""Curve sampling for external plotting.

Emits the point data behind the fragility, hazard and failure plots so
that clients (CLI consumers, the browser UI) can draw them without
re-implementing any of the underlying math. Fragility curves are
sampled densely over the referenced hazard's intensity range (with the
lognormal median included exactly, so the 0.5 crossing is visible);
hazard curves emit their annual exceedance values; failure curves emit
each bin's fragility x occurrence contribution after the model's back
period has been applied.
"""

from __future__ import annotations

from .errors import ValidationError
from .fragility import Lognormal, fragility_eval
from .hazard import BackPeriod, ExceedanceCurve, exceedance_to_occurrence, truncate_by_back_period
from .model import ModelDocument

FRAGILITY_SAMPLES = 101


def fragility_curve_points(
    model: ModelDocument, component_id: str, event_type_id: str
) -> tuple[str, list[tuple[float, float]]]:
    """(unit, points) of one fragility curve sampled for plotting."""
    curve = _fragility(model, component_id, event_type_id)
    hi = _grid_top(model, component_id, event_type_id)
    xs = [hi * k / (FRAGILITY_SAMPLES - 1) for k in range(FRAGILITY_SAMPLES)]
    if isinstance(curve.form, Lognormal) and 0.0 < curve.form.median < hi:
        xs.append(curve.form.median)
        xs.sort()
    points = [(x, fragility_eval(curve, x)) for x in xs]
    return curve.unit, points


def hazard_curve_points(
    model: ModelDocument, event_type_id: str, area_id: str
) -> tuple[str, list[tuple[float, float]]]:
    """(unit, points) of one hazard's annual exceedance curve."""
    curve = model.hazards.get((event_type_id, area_id))
    if curve is None:
        raise ValidationError(
            "unknown_curve_target",
            f"no hazard for event {event_type_id!r} in area {area_id!r}",
        )
    if isinstance(curve, ExceedanceCurve):
        points = list(zip(curve.grid.values, curve.exceedance))
    else:
        points = list(zip(curve.bin_intensities, curve.to_exceedance_values()))
    return curve.grid.unit, points


def failure_curve_points(
    model: ModelDocument, component_id: str, event_type_id: str
) -> tuple[str, list[tuple[float, float]]]:
    """(unit, points) of per-bin annual failure contributions.

    Uses the same back-period-truncated hazard as the risk report, so
    the points sum to the component's annual failure probability for
    this event type.
    """
    curve = _fragility(model, component_id, event_type_id)
    component = model.components[component_id]
    hazard = model.hazards[(event_type_id, component.area_id)]
    if isinstance(hazard, ExceedanceCurve):
        hazard = exceedance_to_occurrence(hazard)
    if model.analysis.back_period_years is not None:
        hazard = truncate_by_back_period(
            hazard, BackPeriod(model.analysis.back_period_years)
        ).curve
    points = [
        (x, fragility_eval(curve, x) * p)
        for x, p in zip(hazard.bin_intensities, hazard.occurrence)
    ]
    return hazard.grid.unit, points


def _fragility(model: ModelDocument, component_id: str, event_type_id: str):
    curve = model.fragilities.get((component_id, event_type_id))
    if curve is None:
        raise ValidationError(
            "unknown_curve_target",
            f"no fragility for component {component_id!r} and event "
            f"{event_type_id!r}",
        )
    return curve


def _grid_top(model: ModelDocument, component_id: str, event_type_id: str) -> float:
    component = model.components[component_id]
    hazard = model.hazards[(event_type_id, component.area_id)]
    return hazard.grid.values[-1]
