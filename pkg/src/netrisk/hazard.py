"""Annual occurrence models for natural hazards and malicious events.

An event type (seism, flood, ...) acting on an area is described on a
discretized intensity axis, either by an annual exceedance curve
P(intensity >= x) sampled at the grid values, or directly by annual
occurrence probabilities. All probabilities are per year; whatever mass
is not assigned to a bin is the chance that no event of that type occurs
in a given year.

Occurrence curves derived from an exceedance curve assign each interior
bin the telescoped difference of consecutive exceedance values and keep
the residual exceedance of the last grid value as a tail bin. Each bin
carries a representative intensity (interior midpoint, or the last grid
value for the tail bin) at which fragilities are later evaluated.

A back period T excludes events rarer than 1/T per year: exceedance
entries below the threshold are zeroed and, for occurrence curves, the
bin probabilities are rebuilt from the thresholded exceedance. Working
in the exceedance representation makes truncation idempotent and makes
it commute with the exceedance-to-occurrence conversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import ValidationError


@dataclass(frozen=True)
class IntensityGrid:
    """Strictly increasing, non-negative intensity values for one event type.

    ``unit`` is a free-text label (e.g. peak ground acceleration in g,
    water height in m) used only for display and for load-time unit
    agreement checks against fragility curves.
    """

    event_type_id: str
    unit: str
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) < 2:
            raise ValidationError(
                "grid_too_short",
                f"intensity grid needs at least 2 values, got {len(self.values)}",
            )
        for i, v in enumerate(self.values):
            if not math.isfinite(v) or v < 0:
                raise ValidationError(
                    "grid_value_invalid",
                    f"grid value at index {i} must be finite and >= 0, got {v!r}",
                )
        for i in range(1, len(self.values)):
            if self.values[i] <= self.values[i - 1]:
                raise ValidationError(
                    "grid_not_increasing",
                    f"grid values must be strictly increasing; "
                    f"value at index {i} ({self.values[i]}) does not exceed "
                    f"its predecessor ({self.values[i - 1]})",
                )


@dataclass(frozen=True)
class ExceedanceCurve:
    """Annual probability of reaching or exceeding each grid intensity."""

    event_type_id: str
    area_id: str
    grid: IntensityGrid
    exceedance: tuple[float, ...]

    def __post_init__(self):
        if len(self.exceedance) != len(self.grid.values):
            raise ValidationError(
                "exceedance_length_mismatch",
                f"expected one exceedance value per grid value "
                f"({len(self.grid.values)}), got {len(self.exceedance)}",
            )
        for i, p in enumerate(self.exceedance):
            if not math.isfinite(p) or not 0.0 <= p <= 1.0:
                raise ValidationError(
                    "exceedance_out_of_range",
                    f"exceedance at index {i} must be in [0, 1], got {p!r}",
                )
        for i in range(1, len(self.exceedance)):
            if self.exceedance[i] > self.exceedance[i - 1]:
                raise ValidationError(
                    "exceedance_not_monotone",
                    f"exceedance must be non-increasing in intensity; "
                    f"value at index {i} ({self.exceedance[i]}) exceeds "
                    f"its predecessor ({self.exceedance[i - 1]})",
                )


@dataclass(frozen=True)
class HazardCurve:
    """Annual occurrence probability per intensity bin.

    ``bin_intensities`` holds the representative intensity of each
    occurrence entry. For curves converted from an exceedance curve these
    are the interior bin midpoints plus the last grid value for the tail
    bin; for directly-authored occurrence records they are the grid
    values themselves (point masses).
    """

    event_type_id: str
    area_id: str
    grid: IntensityGrid
    occurrence: tuple[float, ...]
    bin_intensities: tuple[float, ...]

    def __post_init__(self):
        if len(self.occurrence) != len(self.bin_intensities):
            raise ValidationError(
                "hazard_length_mismatch",
                f"occurrence ({len(self.occurrence)} entries) and bin "
                f"intensities ({len(self.bin_intensities)}) must have the "
                f"same length",
            )
        for i, p in enumerate(self.occurrence):
            if not math.isfinite(p) or not 0.0 <= p <= 1.0:
                raise ValidationError(
                    "occurrence_out_of_range",
                    f"occurrence at index {i} must be in [0, 1], got {p!r}",
                )
        total = math.fsum(self.occurrence)
        if total > 1.0 + 1e-9:
            raise ValidationError(
                "occurrence_sum_exceeds_one",
                f"occurrence probabilities sum to {total}, which exceeds 1",
            )
        lo, hi = self.grid.values[0], self.grid.values[-1]
        for i, x in enumerate(self.bin_intensities):
            if not lo <= x <= hi:
                raise ValidationError(
                    "hazard_bin_outside_grid",
                    f"bin intensity at index {i} ({x}) lies outside the "
                    f"grid range [{lo}, {hi}]",
                )
            if i > 0 and x <= self.bin_intensities[i - 1]:
                raise ValidationError(
                    "hazard_bins_not_increasing",
                    f"bin intensities must be strictly increasing; "
                    f"index {i} ({x}) does not exceed its predecessor",
                )

    @classmethod
    def from_point_masses(
        cls,
        event_type_id: str,
        area_id: str,
        grid: IntensityGrid,
        occurrence: tuple[float, ...],
    ) -> "HazardCurve":
        """Build a curve whose entries sit exactly at the grid values."""
        if len(occurrence) != len(grid.values):
            raise ValidationError(
                "hazard_length_mismatch",
                f"expected one occurrence value per grid value "
                f"({len(grid.values)}), got {len(occurrence)}",
            )
        return cls(
            event_type_id=event_type_id,
            area_id=area_id,
            grid=grid,
            occurrence=tuple(occurrence),
            bin_intensities=tuple(grid.values),
        )

    def to_exceedance_values(self) -> tuple[float, ...]:
        """Annual exceedance probability at each bin (inclusive suffix sums)."""
        out = [0.0] * len(self.occurrence)
        acc = 0.0
        for i in range(len(self.occurrence) - 1, -1, -1):
            acc = self.occurrence[i] + acc
            out[i] = acc
        return tuple(out)


@dataclass(frozen=True)
class BackPeriod:
    """Chosen return period in years; events rarer than 1/years are excluded."""

    years: float

    def __post_init__(self):
        if not math.isfinite(self.years) or self.years <= 0:
            raise ValidationError(
                "back_period_invalid",
                f"back period must be a positive number of years, got {self.years!r}",
            )

    @property
    def threshold(self) -> float:
        return 1.0 / self.years


@dataclass(frozen=True)
class Truncated:
    """Result of a back-period truncation.

    ``emptied`` is the degenerate-result warning flag: every bin fell
    below the threshold and the returned curve carries zero probability.
    """

    curve: "HazardCurve | ExceedanceCurve"
    emptied: bool
    dropped_bins: int


def exceedance_to_occurrence(curve: ExceedanceCurve) -> HazardCurve:
    """Convert an exceedance curve to per-bin occurrence probabilities.

    Interior bin k gets exceedance[k] - exceedance[k+1] with the midpoint
    of its two grid values as representative intensity; the last grid
    value keeps its full residual exceedance as a tail bin represented by
    that value itself. The occurrence entries therefore sum back to
    exceedance[0].
    """
    values = curve.grid.values
    exc = curve.exceedance
    n = len(values)
    occurrence = [exc[k] - exc[k + 1] for k in range(n - 1)]
    occurrence.append(exc[n - 1])
    bins = [(values[k] + values[k + 1]) / 2.0 for k in range(n - 1)]
    bins.append(values[n - 1])
    return HazardCurve(
        event_type_id=curve.event_type_id,
        area_id=curve.area_id,
        grid=curve.grid,
        occurrence=tuple(occurrence),
        bin_intensities=tuple(bins),
    )


def truncate_by_back_period(curve, bp: BackPeriod) -> Truncated:
    """Drop intensity bins whose annual exceedance falls below 1/bp.years.

    Accepts either curve form and returns the same form. Exceedance
    entries below the threshold are zeroed; for an occurrence curve the
    affected suffix of bins is zeroed and the last surviving bin keeps
    its exceedance (the bins rarer than the back period are removed from
    the analysis). Applying the operation twice with the same back
    period returns a bit-identical result.
    """
    threshold = bp.threshold
    if isinstance(curve, ExceedanceCurve):
        kept = tuple(p if p >= threshold else 0.0 for p in curve.exceedance)
        dropped = sum(1 for p in curve.exceedance if p < threshold)
        if dropped == 0:
            return Truncated(curve=curve, emptied=False, dropped_bins=0)
        emptied = all(p == 0.0 for p in kept)
        return Truncated(
            curve=replace(curve, exceedance=kept),
            emptied=emptied,
            dropped_bins=dropped,
        )
    if isinstance(curve, HazardCurve):
        exceedance = curve.to_exceedance_values()
        n = len(exceedance)
        cut = n
        for i, p in enumerate(exceedance):
            if p < threshold:
                cut = i
                break
        if cut == n:
            return Truncated(curve=curve, emptied=False, dropped_bins=0)
        occurrence = list(curve.occurrence)
        if cut == 0:
            occurrence = [0.0] * n
        else:
            # The last surviving bin absorbs the truncated tail exceedance
            # so that surviving exceedance values are preserved exactly.
            occurrence[cut - 1] = min(exceedance[cut - 1], 1.0)
            for i in range(cut, n):
                occurrence[i] = 0.0
        emptied = cut == 0
        return Truncated(
            curve=replace(curve, occurrence=tuple(occurrence)),
            emptied=emptied,
            dropped_bins=n - cut,
        )
    raise TypeError(f"expected HazardCurve or ExceedanceCurve, got {type(curve)!r}")
