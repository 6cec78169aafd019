from fractions import Fraction

import pytest

from rtcycle import *


class TestProductBounds:

    def test_general_product(self, sys1, offset_pair, mixed_periods, late_pair):
        assert general_product_bound(sys1) == 16
        assert general_product_bound(offset_pair) == 8
        assert general_product_bound(mixed_periods) == 48
        assert general_product_bound(late_pair) == 16

    def test_sync_product(self, sys1):
        assert sync_product_bound(sys1) == 16

    def test_sync_product_needs_synchronous_releases(self, offset_pair):
        with pytest.raises(BoundNotApplicable) as info:
            sync_product_bound(offset_pair)
        assert info.value.bound == 'sync_product'

        assert sync_product_bound(synchronize(offset_pair)) == 8

    def test_product_overflow(self):
        # H fits in a tick, H times the lateness factor does not
        system = TaskSystem([Task(1, 0, 1, 2 ** 40, 2 ** 40 + 2 ** 30)])

        with pytest.raises(ArithmeticOverflow) as info:
            general_product_bound(system)
        assert 'product bound factor' in str(info.value)

    def test_leung(self, offset_pair, mixed_periods):
        assert leung_bound(offset_pair) == 17
        assert leung_bound(mixed_periods) == 49


class TestPriorityBounds:

    def test_sn_with_offsets(self):
        system = TaskSystem([Task(1, 3, 1, 5, 5), Task(2, 1, 1, 4, 4)])
        assert sn_bound(system, [1, 2]) == 5

    def test_sn_without_offsets(self, offset_pair):
        assert sn_bound(synchronize(offset_pair), [2, 1]) == 0

    def test_sn_needs_constrained_deadlines(self, mixed_periods):
        with pytest.raises(BoundNotApplicable):
            sn_bound(mixed_periods, [1, 2])

    def test_sn_hat(self, offset_pair, mixed_periods):
        assert sn_hat_bound(offset_pair, [1, 2]) == 16
        assert sn_hat_bound(mixed_periods, [1, 2]) == 32

    def test_order_must_be_a_permutation(self, offset_pair):
        with pytest.raises(ConfigurationError):
            sn_bound(offset_pair, [1])


class TestBoundsReport:

    def test_equal_periods(self, offset_pair):
        report = bounds_report(offset_pair)

        assert report.hyperperiod == 8
        assert report.general_product_end == 8
        assert report.sync_product_end == 8
        assert (report.sn, report.sn_interval_end) == (8, 16)
        assert (report.sn_hat, report.sn_hat_interval_end) == (16, 24)
        assert report.leung == 17
        assert (report.best, report.best_label) == (8, 'general_product')
        assert report.priority_order == (1, 2)
        assert report.applicable == BOUND_LABELS[:4]
        assert 'reference only' in report.notes['leung']

    def test_mixed_periods(self, mixed_periods):
        report = bounds_report(mixed_periods)

        assert report.general_product_end == 48
        assert report.sn is None
        assert 'D=9 > T=8' in report.notes['sn']
        assert report.sn_hat_interval_end == 56
        assert report.leung == 49
        assert (report.best, report.best_label) == (48, 'general_product')
        assert 'sn' not in report.applicable

    def test_mixed_periods_flags_the_quoted_figures(self, mixed_periods):
        report = bounds_report(mixed_periods)

        assert report.notes['general_product'].startswith('H=24 x 1 * 2 = 48')
        assert 'quoted figure 96' in report.notes['general_product']
        assert 'quoted figure 24' in report.notes['sn_hat']
        assert 'erratum' not in report.notes['sync_product']

    def test_no_erratum_for_other_systems(self, offset_pair):
        notes = bounds_report(offset_pair).notes
        assert not [label for label in notes if 'erratum' in notes[label]]

    def test_leung_needs_a_uniprocessor_fixed_priority_or_edf_scheduler(self, offset_pair):
        for spec in (edf(), fixed_priority('deadline_monotonic')):
            report = bounds_report(offset_pair, scheduler=spec)
            assert report.applicable == BOUND_LABELS
            assert spec.label in report.notes['leung']

        report = bounds_report(offset_pair, scheduler=lrptf())
        assert 'leung' not in report.applicable
        assert 'not for lrptf' in report.notes['leung']

    def test_leung_is_never_best_for_arbitrary_schedules(self):
        # an idling memoryless schedule of this system first cycles past O^max + 2H
        system = TaskSystem([Task(1, 1, 1, 3, 5), Task(2, 1, 1, 2, 3)], processors=1)
        report = bounds_report(system)

        assert report.leung == 13
        assert 'leung' not in report.applicable
        assert (report.best, report.best_label) == (72, 'general_product')
        assert 'D > T' in bounds_report(system, scheduler=edf()).notes['leung']

        sg = build_graph(system, default_horizon(system))
        assert not verify_bound(sg, report.leung)
        assert verify_bound(sg, report.best)

    def test_without_priorities(self, sys1):
        report = bounds_report(sys1)

        assert report.utilization == Fraction(7, 4)
        assert report.sn is None and report.sn_hat is None
        assert report.applicable == ('general_product', 'sync_product')
        assert report.best == 16
        assert 'leung' in report.notes

    def test_explicit_order(self, sys1):
        report = bounds_report(sys1, priority_order=[1, 2, 3])

        assert report.sn is None
        assert (report.sn_hat, report.sn_hat_interval_end) == (8, 12)
        assert (report.best, report.best_label) == (12, 'sn_hat')

    def test_constraints_limit_the_priority_bounds(self, offset_pair):
        system = TaskSystem(offset_pair.tasks, 1, [StructuralConstraint.non_preemptive(2)])
        report = bounds_report(system)

        assert report.applicable == ('general_product', 'sync_product')
        assert 'independent tasks only' in report.notes['sn']

    def test_value_lookup(self, offset_pair):
        report = bounds_report(offset_pair)
        assert [report.value(label) for label in BOUND_LABELS] == [8, 8, 16, 24, 17]


class TestBoundProperties:

    def test_small_cases(self, sys1, sys2):
        assert sync_product_bound(sys2) == 8
        assert leung_bound(sys1) == 8
        assert sn_hat_bound(TaskSystem([Task(1, 0, 1, 5, 5)]), [1]) == 0

    def test_general_is_sync_of_the_synchronized_system(self, rng):
        for _ in range(200):
            system = random_system(rng)
            assert general_product_bound(system) == sync_product_bound(synchronize(system))

    def test_general_is_at_least_one_hyperperiod(self, rng):
        for _ in range(200):
            system = random_system(rng)
            h = hyperperiod(system)
            tight = all(task.offset + task.deadline <= task.period for task in system.tasks)

            assert general_product_bound(system) >= h
            assert (general_product_bound(system) == h) == tight
