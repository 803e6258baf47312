from fractions import Fraction

import pytest

from rightsize.model import Instance, ScheduleX, ScheduleY
from rightsize.oracle import (
    SearchSpaceTooLarge,
    ZeroOptimum,
    brute_force_opt,
    check_feasible,
    check_hold_monotone,
    check_lane_identity,
    check_no_immediate_change,
    check_no_lane_switching,
    check_power_events,
    check_sorted,
    empirical_ratio,
)

from test_model import REF_X, reference_instance
from rightsize.model import x_to_y


class TestBruteForce:
    def test_gap_example(self):
        x, cost = brute_force_opt(Instance((1,), (3,), (1,), (1, 0, 1)))
        assert cost == 6
        assert x.rows == ((1,), (1,), (1,))

    def test_empty_load(self):
        assert brute_force_opt(Instance((1, 1), (1, 2), (2, 1), (0, 0)))[1] == 0

    def test_one_slot_two_types(self):
        # per type (beta, l): (1, 4) and (2, 1)
        x, cost = brute_force_opt(Instance((1, 1), (1, 2), (4, 1), (1,)))
        assert cost == 3
        assert x.rows == ((0, 1),)

    def test_cap(self):
        inst = Instance((2, 2, 2), (1, 2, 3), (3, 2, 1), (1,) * 8)
        with pytest.raises(SearchSpaceTooLarge):
            brute_force_opt(inst)


class TestLaneSwitching:
    def test_reference_schedule_passes(self):
        assert check_no_lane_switching(x_to_y(ScheduleX(REF_X), reference_instance())).passed

    def test_unchanged_rows(self):
        assert check_no_lane_switching(ScheduleY(((2, 1), (2, 1)))).passed

    def test_type_moves_down_a_lane(self):
        report = check_no_lane_switching(ScheduleY(((2, 1), (1, 0))))
        assert not report.passed
        assert (report.violations[0].t, report.violations[0].k) == (2, 2)


class TestPowerEvents:
    inst = Instance((1,), (3,), (1,), (1, 0))

    def test_lingering_server(self):
        report = check_power_events(ScheduleY(((1,), (1,))), self.inst)
        assert not report.passed

    def test_exact_cover(self):
        assert check_power_events(ScheduleY(((1,), (0,))), self.inst).passed

    def test_empty(self):
        inst = Instance((1,), (3,), (1,), (0, 0))
        assert check_power_events(ScheduleY(((0,), (0,))), inst).passed


class TestImmediateChange:
    def test_cases(self):
        assert check_no_immediate_change(ScheduleY(((1,), (2,), (2,), (0,)))).violations[0].t == 2
        assert check_no_immediate_change(ScheduleY(((2,), (2,)))).passed
        assert not check_no_immediate_change(ScheduleY(((2,), (1,)))).passed
        assert check_no_immediate_change(ScheduleY(((2,), (0,), (1,)))).passed


class TestOtherCheckers:
    def test_sorted(self):
        assert check_sorted([(2, 1), (1, 1)]).passed
        assert not check_sorted([(1, 2)]).passed

    def test_feasible(self):
        inst = Instance((1, 1), (1, 2), (2, 1), (2,))
        assert check_feasible(ScheduleX(((1, 1),)), inst).passed
        assert not check_feasible(ScheduleX(((1, 0),)), inst).passed
        assert not check_feasible(ScheduleX(((2, 0),)), inst).passed

    def test_hold_monotone(self):
        assert check_hold_monotone([1, 2, None]).passed
        assert not check_hold_monotone([3, 2]).passed
        assert not check_hold_monotone([None, 4]).passed

    def test_identity(self):
        inst = Instance((1, 1), (1, 2), (2, 1), (1, 1))
        assert check_lane_identity(ScheduleX(((1, 1), (1, 0))), inst).passed

    def test_report_summary(self):
        report = check_sorted([(1, 2)])
        assert report.summary().startswith("SORTED: FAIL")


class TestRatio:
    inst = Instance((1,), (3,), (1,), (1,))

    def test_values(self):
        assert empirical_ratio(Fraction(8), self.inst, opt_cost=Fraction(4)) == 2
        assert empirical_ratio(Fraction(4), self.inst) == 1

    def test_zero_optimum(self):
        with pytest.raises(ZeroOptimum):
            empirical_ratio(Fraction(0), Instance((1,), (3,), (1,), (0, 0)))
