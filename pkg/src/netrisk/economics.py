"""Failure cost models: direct repair cost plus indirect interruption cost.

The direct cost is the investment needed to repair or rebuild a failed
component. The indirect cost captures the loss caused by the service
interruption and is given either as a lump sum or as a recovery profile:
a piecewise-linear loss rate (money per day) integrated over the
downtime. Before the first profile point and after the last one the
rate is extended flat, so the integral is a plain sum of trapezoids.

All monetary values are in millions of euros (M EUR), the reporting
currency of the engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class RecoveryFunction:
    """Loss rate over the repair downtime, in M EUR per day."""

    downtime_days: float
    loss_rate_points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not math.isfinite(self.downtime_days) or self.downtime_days <= 0:
            raise ValidationError(
                "recovery_downtime_invalid",
                f"downtime must be > 0 days, got {self.downtime_days!r}",
            )
        if not self.loss_rate_points:
            raise ValidationError(
                "recovery_points_empty",
                "recovery function needs at least one loss-rate point",
            )
        for i, (t, rate) in enumerate(self.loss_rate_points):
            if not math.isfinite(t) or t < 0 or t > self.downtime_days:
                raise ValidationError(
                    "recovery_time_out_of_range",
                    f"loss-rate time at index {i} must lie in "
                    f"[0, {self.downtime_days}], got {t!r}",
                )
            if not math.isfinite(rate) or rate < 0:
                raise ValidationError(
                    "recovery_rate_negative",
                    f"loss rate at index {i} must be >= 0, got {rate!r}",
                )
        for i in range(1, len(self.loss_rate_points)):
            if self.loss_rate_points[i][0] <= self.loss_rate_points[i - 1][0]:
                raise ValidationError(
                    "recovery_times_not_increasing",
                    f"loss-rate times must be strictly increasing; index {i} "
                    f"({self.loss_rate_points[i][0]}) does not exceed its "
                    f"predecessor",
                )


@dataclass(frozen=True)
class CostModel:
    """Direct cost plus either a lump indirect cost or a recovery profile."""

    id: str
    direct_cost: float
    indirect: float | RecoveryFunction

    def __post_init__(self):
        if not math.isfinite(self.direct_cost) or self.direct_cost < 0:
            raise ValidationError(
                "cost_direct_negative",
                f"direct cost must be >= 0, got {self.direct_cost!r}",
            )
        if isinstance(self.indirect, (int, float)):
            if not math.isfinite(self.indirect) or self.indirect < 0:
                raise ValidationError(
                    "cost_lump_negative",
                    f"lump indirect cost must be >= 0, got {self.indirect!r}",
                )


@dataclass(frozen=True)
class FailureCost:
    component_id: str
    direct: float
    indirect: float
    total: float


def indirect_cost(rf: RecoveryFunction) -> float:
    """Integral of the loss rate over [0, downtime], in M EUR.

    The piecewise-linear rate is extended flat before the first point and
    after the last one, so each segment contributes a trapezoid.
    """
    knots = list(rf.loss_rate_points)
    if knots[0][0] > 0.0:
        knots.insert(0, (0.0, knots[0][1]))
    if knots[-1][0] < rf.downtime_days:
        knots.append((rf.downtime_days, knots[-1][1]))
    return math.fsum(
        0.5 * (knots[i][1] + knots[i + 1][1]) * (knots[i + 1][0] - knots[i][0])
        for i in range(len(knots) - 1)
    )


def total_failure_cost(cm: CostModel) -> FailureCost:
    """Direct plus indirect failure cost of one cost model."""
    if isinstance(cm.indirect, RecoveryFunction):
        ind = indirect_cost(cm.indirect)
    else:
        ind = float(cm.indirect)
    return FailureCost(
        component_id=cm.id,
        direct=cm.direct_cost,
        indirect=ind,
        total=cm.direct_cost + ind,
    )
