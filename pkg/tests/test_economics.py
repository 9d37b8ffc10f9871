import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import riemann_indirect_cost

from netrisk.economics import (
    CostModel,
    RecoveryFunction,
    indirect_cost,
    total_failure_cost,
)
from netrisk.errors import ValidationError


def rate_at(points, t):
    """Flat-extended piecewise-linear lookup, for building split profiles."""
    if t <= points[0][0]:
        return points[0][1]
    if t >= points[-1][0]:
        return points[-1][1]
    for i in range(1, len(points)):
        x1, r1 = points[i]
        if t <= x1:
            x0, r0 = points[i - 1]
            return r0 + (t - x0) / (x1 - x0) * (r1 - r0)
    return points[-1][1]


class TestIndirectCost:
    def test_constant_rate_is_rectangle_area(self):
        rf = RecoveryFunction(
            downtime_days=30.0, loss_rate_points=((0.0, 0.1), (30.0, 0.1))
        )
        assert indirect_cost(rf) == pytest.approx(3.0, abs=1e-12)

    def test_single_point_extends_flat(self):
        rf = RecoveryFunction(downtime_days=30.0, loss_rate_points=((5.0, 0.1),))
        assert indirect_cost(rf) == pytest.approx(3.0, abs=1e-12)

    def test_linear_decay_is_triangle_area(self):
        rf = RecoveryFunction(
            downtime_days=20.0, loss_rate_points=((0.0, 0.2), (20.0, 0.0))
        )
        assert indirect_cost(rf) == pytest.approx(2.0, abs=1e-12)

    def test_three_segment_profile_matches_riemann_oracle(self):
        points = [(0.0, 0.25), (5.0, 0.25), (12.0, 0.08), (30.0, 0.02)]
        rf = RecoveryFunction(downtime_days=45.0, loss_rate_points=tuple(points))
        oracle = riemann_indirect_cost(45.0, points)
        assert indirect_cost(rf) == pytest.approx(oracle, abs=1e-9)

    def test_additive_over_downtime_split(self):
        points = [(0.0, 0.25), (5.0, 0.25), (12.0, 0.08), (30.0, 0.02)]
        full = RecoveryFunction(downtime_days=45.0, loss_rate_points=tuple(points))
        for split in (3.0, 12.0, 17.5, 40.0):
            left_points = [p for p in points if p[0] < split] + [
                (split, rate_at(points, split))
            ]
            right_points = [(0.0, rate_at(points, split))] + [
                (t - split, r) for t, r in points if t > split
            ]
            left = RecoveryFunction(
                downtime_days=split, loss_rate_points=tuple(left_points)
            )
            right = RecoveryFunction(
                downtime_days=45.0 - split, loss_rate_points=tuple(right_points)
            )
            assert indirect_cost(left) + indirect_cost(right) == pytest.approx(
                indirect_cost(full), abs=1e-12
            )

    def test_scaling_rates_scales_cost(self):
        points = ((0.0, 0.25), (5.0, 0.25), (12.0, 0.08), (30.0, 0.02))
        base = indirect_cost(
            RecoveryFunction(downtime_days=45.0, loss_rate_points=points)
        )
        for lam in (2.0, 0.5):
            scaled = indirect_cost(
                RecoveryFunction(
                    downtime_days=45.0,
                    loss_rate_points=tuple((t, lam * r) for t, r in points),
                )
            )
            assert scaled == lam * base
        scaled = indirect_cost(
            RecoveryFunction(
                downtime_days=45.0,
                loss_rate_points=tuple((t, 1.7 * r) for t, r in points),
            )
        )
        assert scaled == pytest.approx(1.7 * base, rel=1e-12)

    @given(
        st.floats(min_value=1.0, max_value=100.0),
        st.floats(min_value=1.0, max_value=200.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_non_decreasing_in_downtime(self, downtime, extension):
        points = ((0.0, 0.3), (1.0, 0.1))
        shorter = RecoveryFunction(downtime_days=downtime, loss_rate_points=points)
        longer = RecoveryFunction(
            downtime_days=downtime + extension, loss_rate_points=points
        )
        assert indirect_cost(longer) >= indirect_cost(shorter)


class TestRecoveryValidation:
    def test_rejects_zero_downtime(self):
        with pytest.raises(ValidationError) as err:
            RecoveryFunction(downtime_days=0.0, loss_rate_points=((0.0, 0.1),))
        assert err.value.code == "recovery_downtime_invalid"

    def test_rejects_empty_points(self):
        with pytest.raises(ValidationError) as err:
            RecoveryFunction(downtime_days=10.0, loss_rate_points=())
        assert err.value.code == "recovery_points_empty"

    def test_rejects_point_after_downtime(self):
        with pytest.raises(ValidationError) as err:
            RecoveryFunction(
                downtime_days=10.0, loss_rate_points=((0.0, 0.1), (11.0, 0.1))
            )
        assert err.value.code == "recovery_time_out_of_range"

    def test_rejects_negative_rate(self):
        with pytest.raises(ValidationError) as err:
            RecoveryFunction(downtime_days=10.0, loss_rate_points=((0.0, -0.1),))
        assert err.value.code == "recovery_rate_negative"

    def test_rejects_unsorted_times(self):
        with pytest.raises(ValidationError) as err:
            RecoveryFunction(
                downtime_days=10.0, loss_rate_points=((5.0, 0.1), (2.0, 0.2))
            )
        assert err.value.code == "recovery_times_not_increasing"


class TestTotalFailureCost:
    @pytest.mark.parametrize(
        "direct, indirect, total",
        [
            (1.56, 6.13, 7.69),
            (1.24, 2.46, 3.70),
            (1.72, 5.13, 6.85),
            (1.05, 9.75, 10.80),
            (1.35, 3.52, 4.87),
        ],
    )
    def test_lump_sum_bridge_costs(self, direct, indirect, total):
        cost = total_failure_cost(
            CostModel(id="cm", direct_cost=direct, indirect=indirect)
        )
        assert cost.total == pytest.approx(total, abs=1e-9)
        assert cost.direct == direct
        assert cost.indirect == indirect

    def test_zero_cost_model(self):
        cost = total_failure_cost(CostModel(id="cm", direct_cost=0.0, indirect=0.0))
        assert cost.total == 0.0

    def test_recovery_function_feeds_total(self):
        cm = CostModel(
            id="cm",
            direct_cost=1.35,
            indirect=RecoveryFunction(
                downtime_days=32.0, loss_rate_points=((0.0, 0.11), (32.0, 0.11))
            ),
        )
        cost = total_failure_cost(cm)
        assert cost.indirect == pytest.approx(3.52, abs=1e-12)
        assert cost.total == pytest.approx(4.87, abs=1e-12)

    def test_rejects_negative_direct(self):
        with pytest.raises(ValidationError) as err:
            CostModel(id="cm", direct_cost=-1.0, indirect=0.0)
        assert err.value.code == "cost_direct_negative"

    def test_rejects_negative_lump(self):
        with pytest.raises(ValidationError) as err:
            CostModel(id="cm", direct_cost=1.0, indirect=-2.0)
        assert err.value.code == "cost_lump_negative"
