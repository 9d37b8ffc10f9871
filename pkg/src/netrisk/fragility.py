"""Fragility curves and annual component failure probabilities.

A fragility curve gives the conditional probability that a structure
fails given the intensity of an event acting on it. Two forms are
supported: the common lognormal surrogate, where the failure probability
at intensity x is the standard-normal cumulative of ln(x/median)/log_std,
and a tabulated curve interpolated linearly between measured points.
Evaluation at intensity exactly zero is 0 by convention (no event).

Convolving a fragility curve with the annual occurrence probabilities of
an event yields the component's annual failure probability for that
event: the sum over intensity bins of fragility(bin intensity) times the
bin's occurrence probability. With a single bin this reduces to the
plain product of a conditional failure probability and an occurrence
probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .hazard import HazardCurve

_SQRT2 = math.sqrt(2.0)


def _normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / _SQRT2))


@dataclass(frozen=True)
class Lognormal:
    """Lognormal fragility surrogate: median intensity and log-space spread."""

    median: float
    log_std: float

    def __post_init__(self):
        if not math.isfinite(self.median) or self.median <= 0:
            raise ValidationError(
                "lognormal_median_invalid",
                f"lognormal median must be > 0, got {self.median!r}",
            )
        if not math.isfinite(self.log_std) or self.log_std <= 0:
            raise ValidationError(
                "lognormal_beta_invalid",
                f"lognormal log-standard-deviation must be > 0, got {self.log_std!r}",
            )


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear fragility through (intensity, probability) points.

    Intensities must be strictly increasing and probabilities must be a
    non-decreasing sequence in [0, 1], so the interpolant is monotone.
    Outside the table the first/last probability is extended flat.
    """

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.points:
            raise ValidationError(
                "tabulated_empty", "tabulated fragility needs at least one point"
            )
        for i, (x, p) in enumerate(self.points):
            if not math.isfinite(x) or x < 0:
                raise ValidationError(
                    "tabulated_intensity_invalid",
                    f"tabulated intensity at index {i} must be finite and >= 0, "
                    f"got {x!r}",
                )
            if not math.isfinite(p) or not 0.0 <= p <= 1.0:
                raise ValidationError(
                    "tabulated_probability_out_of_range",
                    f"tabulated probability at index {i} must be in [0, 1], got {p!r}",
                )
        for i in range(1, len(self.points)):
            if self.points[i][0] <= self.points[i - 1][0]:
                raise ValidationError(
                    "tabulated_intensity_invalid",
                    f"tabulated intensities must be strictly increasing; "
                    f"index {i} ({self.points[i][0]}) does not exceed its predecessor",
                )
            if self.points[i][1] < self.points[i - 1][1]:
                raise ValidationError(
                    "tabulated_not_monotone",
                    f"tabulated probabilities must be non-decreasing; "
                    f"index {i} ({self.points[i][1]}) is below its predecessor",
                )


FragilityForm = Lognormal | Tabulated


@dataclass(frozen=True)
class FragilityCurve:
    """Conditional failure probability of one component under one event type."""

    component_id: str
    event_type_id: str
    unit: str
    form: FragilityForm


@dataclass(frozen=True)
class AnnualFailureProbability:
    component_id: str
    event_type_id: str
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value) or not 0.0 <= self.value <= 1.0:
            raise ValidationError(
                "probability_out_of_range",
                f"annual failure probability must be in [0, 1], got {self.value!r}",
            )


def fragility_eval(curve: FragilityCurve, intensity: float) -> float:
    """Conditional failure probability at the given event intensity.

    Returns 0 at intensity exactly 0 (no event) for every curve form.
    """
    if not math.isfinite(intensity) or intensity < 0:
        raise ValidationError(
            "intensity_negative",
            f"intensity must be finite and >= 0, got {intensity!r}",
        )
    if intensity == 0.0:
        return 0.0
    form = curve.form
    if isinstance(form, Lognormal):
        # log(x) - log(m) rather than log(x/m): the quotient can underflow
        # to zero for denormal intensities.
        z = (math.log(intensity) - math.log(form.median)) / form.log_std
        return _normal_cdf(z)
    points = form.points
    if intensity <= points[0][0]:
        return points[0][1]
    if intensity >= points[-1][0]:
        return points[-1][1]
    for i in range(1, len(points)):
        x1, p1 = points[i]
        if intensity <= x1:
            x0, p0 = points[i - 1]
            w = (intensity - x0) / (x1 - x0)
            return p0 + w * (p1 - p0)
    return points[-1][1]  # unreachable; loop always finds a bracket


def component_annual_failure_probability(
    curve: FragilityCurve, hazard: HazardCurve
) -> AnnualFailureProbability:
    """Annual failure probability of a component from one event type.

    Sums fragility(bin intensity) x occurrence over the hazard's bins.
    The result is at most the total occurrence probability, hence a valid
    annual probability.
    """
    if curve.event_type_id != hazard.event_type_id:
        raise ValidationError(
            "event_type_mismatch",
            f"fragility is for event {curve.event_type_id!r} but hazard "
            f"describes {hazard.event_type_id!r}",
        )
    value = math.fsum(
        fragility_eval(curve, x) * p
        for x, p in zip(hazard.bin_intensities, hazard.occurrence)
    )
    return AnnualFailureProbability(
        component_id=curve.component_id,
        event_type_id=curve.event_type_id,
        value=min(value, 1.0),
    )


def combine_event_failure_probabilities(
    per_event: list[AnnualFailureProbability],
) -> float:
    """Overall annual failure probability of one component across event types.

    Assumes independent event occurrences: 1 - prod(1 - p_e).
    """
    if not per_event:
        raise ValidationError(
            "empty_probability_list", "need at least one per-event probability"
        )
    component_ids = {p.component_id for p in per_event}
    if len(component_ids) > 1:
        raise ValidationError(
            "mixed_components",
            f"per-event probabilities reference several components: "
            f"{sorted(component_ids)}",
        )
    if len(per_event) == 1:
        return per_event[0].value
    survival = 1.0
    for p in per_event:
        survival *= 1.0 - p.value
    return 1.0 - survival
