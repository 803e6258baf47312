from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import instances, schedules_for
from rightsize.model import (
    CapacityExceeded,
    EmptyInstance,
    InefficientType,
    InfeasibleLoad,
    Instance,
    InvalidInstance,
    ScheduleX,
    ScheduleY,
    ServerType,
    UnsortedLanes,
    is_feasible,
    lane_cost,
    lane_cost_sum,
    normalize_instance,
    total_cost,
    x_to_y,
    y_to_x,
)
from rightsize.oracle import check_no_lane_switching

# Reference example: three types, m = (2, 2, 1), slots 1..11 plus the zero boundary.
REF_M = (2, 2, 1)
REF_LAM = (1, 3, 0, 0, 2, 1, 4, 0, 3, 1, 1)
REF_X = tuple(
    (a, b, c)
    for a, b, c in zip(
        [0, 2, 0, 0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 1, 2, 2, 2, 0, 0],
        [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    )
)


def reference_instance():
    return Instance(REF_M, (1, 2, 3), (3, 2, 1), REF_LAM)


class TestNormalize:
    def test_single_type_unchanged(self):
        inst = normalize_instance([(2, 5, 3)], [1, 2])
        assert inst == Instance((2,), (5,), (3,), (1, 2))

    def test_sorts_by_operating_cost(self):
        inst = normalize_instance([ServerType(1, 4, 1), ServerType(2, 2, 3)])
        assert inst.m == (2, 1)
        assert inst.l == (3, 1)
        assert inst.beta == (2, 4)

    def test_equal_operating_cost_is_inefficient(self):
        with pytest.raises(InefficientType) as exc:
            normalize_instance([(1, 2, 3), (1, 5, 3)])
        assert {exc.value.j, exc.value.j2} == {1, 2}

    def test_dominated_type(self):
        with pytest.raises(InefficientType) as exc:
            normalize_instance([(1, 2, 1), (1, 3, 2)])
        assert (exc.value.j, exc.value.j2) == (2, 1)

    def test_duplicates_merge(self):
        inst = normalize_instance([(1, 2, 3), (2, "2", "3"), (1, 9, 1)])
        assert inst.m == (3, 1)
        assert inst.d == 2

    def test_empty(self):
        with pytest.raises(EmptyInstance):
            normalize_instance([])

    def test_overload(self):
        with pytest.raises(InfeasibleLoad) as exc:
            normalize_instance([(1, 2, 3)], [1, 2])
        assert exc.value.t == 2

    @pytest.mark.parametrize("triple", [(0, 1, 1), (1, 0, 1), (1, 1, -1)])
    def test_bad_values(self, triple):
        with pytest.raises(InvalidInstance):
            normalize_instance([triple])

    def test_rational_tokens(self):
        inst = normalize_instance([(1, "3/2", "1/4")])
        assert inst.beta == (Fraction(3, 2),)
        assert inst.l == (Fraction(1, 4),)

    def test_float_rejected(self):
        with pytest.raises(InvalidInstance):
            normalize_instance([(1, 0.5, 1)])


class TestLaneConversion:
    def test_reference_slot_two(self):
        inst = reference_instance()
        y = x_to_y(ScheduleX((REF_X[1],)), inst)
        assert y.rows[0] == (3, 1, 1, 0, 0)

    def test_empty_row(self):
        inst = reference_instance()
        assert x_to_y(ScheduleX(((0, 0, 0),)), inst).rows[0] == (0,) * 5

    def test_middle_type(self):
        inst = Instance((1, 1), (1, 2), (2, 1))
        assert x_to_y(ScheduleX(((0, 1),)), inst).rows[0] == (2, 0)
        inst3 = Instance((1, 1, 1), (1, 2, 3), (3, 2, 1))
        assert x_to_y(ScheduleX(((0, 1, 0),)), inst3).rows[0] == (2, 0, 0)

    def test_inverse_examples(self):
        inst = reference_instance()
        assert y_to_x(ScheduleY(((3, 1, 1, 0, 0),)), inst).rows[0] == (2, 0, 1)
        assert y_to_x(ScheduleY(((0, 0, 0, 0, 0),)), inst).rows[0] == (0, 0, 0)
        two = Instance((1, 2), (1, 2), (2, 1))
        assert y_to_x(ScheduleY(((2, 2, 1),)), two).rows[0] == (1, 2)

    def test_capacity_exceeded(self):
        two = Instance((1, 2), (1, 2), (2, 1))
        with pytest.raises(CapacityExceeded) as exc:
            y_to_x(ScheduleY(((1, 1, 0),)), two)
        assert (exc.value.t, exc.value.j) == (1, 1)

    def test_unsorted_rejected(self):
        with pytest.raises(UnsortedLanes):
            ScheduleY(((1, 2),))

    @settings(max_examples=150, deadline=None)
    @given(st.data())
    def test_round_trip(self, data):
        inst = data.draw(instances())
        rows = data.draw(schedules_for(inst, feasible=False))
        x = ScheduleX(tuple(rows))
        assert y_to_x(x_to_y(x, inst), inst) == x


class TestFeasibility:
    def test_examples(self):
        two = Instance((1, 1), (1, 2), (2, 1), (1,))
        assert is_feasible(ScheduleX(((1, 0),)), two)
        assert not is_feasible(ScheduleX(((1, 0),)), Instance((1, 1), (1, 2), (2, 1), (2,)))
        over = Instance((1, 1), (1, 2), (2, 1), (0, 1))
        assert not is_feasible(ScheduleX(((0, 0), (0, 2))), over)


class TestCost:
    def test_empty_horizon(self):
        c = total_cost(ScheduleX(()), Instance((1,), (1,), (1,)))
        assert (c.operating, c.switching, c.total) == (0, 0, 0)

    def test_single_slot(self):
        c = total_cost(ScheduleX(((1,),)), Instance((1,), (5,), (2,), (1,)))
        assert (c.operating, c.switching, c.total) == (2, 5, 7)

    def test_power_cycle(self):
        inst = Instance((1,), (3,), (1,), (1, 0, 1))
        assert total_cost(ScheduleX(((1,), (0,), (1,))), inst).total == 8

    def test_reference_cost(self):
        inst = reference_instance()
        x = ScheduleX(REF_X)
        assert is_feasible(x, inst)
        # hand sum: operating 3*3 + 2*8 + 1*11, switching 1*3 + 2*2 + 3*1
        c = total_cost(x, inst)
        assert c.operating == 36
        assert c.switching == 10

    @settings(max_examples=150, deadline=None)
    @given(st.data())
    def test_trailing_idle_slot_is_free(self, data):
        inst = data.draw(instances())
        rows = data.draw(schedules_for(inst))
        longer = inst.with_load(inst.lam + (0,))
        a = total_cost(ScheduleX(tuple(rows)), inst)
        b = total_cost(ScheduleX(tuple(rows) + ((0,) * inst.d,)), longer)
        assert a == b

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_integer_instances_cost_integers(self, data):
        inst = data.draw(instances())
        inst = Instance(inst.m, [b * 6 for b in inst.beta], [c * 6 for c in inst.l], inst.lam)
        rows = data.draw(schedules_for(inst))
        assert total_cost(ScheduleX(tuple(rows)), inst).total.denominator == 1


class TestLaneCost:
    inst = Instance((1, 1), (3, 4), (2, 1))

    def test_cases(self):
        y = ScheduleY(((0, 0), (2, 0), (2, 0), (0, 0)))
        assert lane_cost(y, self.inst, 2, 1) == 5
        assert lane_cost(y, self.inst, 3, 1) == 1
        assert lane_cost(y, self.inst, 4, 1) == 0

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_lane_sum_vs_total(self, data):
        inst = data.draw(instances())
        x = ScheduleX(tuple(data.draw(schedules_for(inst, feasible=False))))
        y = x_to_y(x, inst)
        lanes = lane_cost_sum(y, inst)
        total = total_cost(x, inst).total
        if check_no_lane_switching(y).passed:
            assert lanes == total
        else:
            assert lanes >= total
