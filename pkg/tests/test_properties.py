import pytest

from rtcycle import *

from conftest import BUILTIN_SCHEDULERS, can_avoid_misses, demand_window

pytestmark = pytest.mark.slow

SYSTEMS = 1000


def random_runs(rng, count=SYSTEMS, **kw):
    for _ in range(count):
        system = random_system(rng, **kw)
        for spec in BUILTIN_SCHEDULERS:
            trace, report = run(system, spec)
            yield system, spec, trace, report


def test_feasible_runs_settle_within_the_general_bound(rng):
    for system, spec, trace, report in random_runs(rng):
        if not report.feasible:
            continue

        bound = general_product_bound(system)
        assert report.transient_len <= bound, (system, spec.label)
        assert report.transient_len + report.period_len <= bound + hyperperiod(system)
        assert report.period_len % hyperperiod(system) == 0


def test_feasible_traces_replay_on_the_synchronized_system(rng):
    for system, spec, trace, report in random_runs(rng):
        if not report.feasible:
            continue

        synced = synchronize(system)
        replayed = replay(synced, trace.assignment)

        assert check_deadlines(synced, replayed) is None, (system, spec.label)


def test_fixed_priorities_settle_by_sn(rng):
    for system, spec, trace, report in random_runs(rng, count=SYSTEMS // 4):
        if not report.feasible or not system.constrained or spec.kind != 'fixed_task_priority':
            continue

        ranks = priority_ranks(spec, system)
        order = sorted(ranks, key=ranks.get)

        assert report.transient_len <= sn_bound(system, order), (system, spec.label)


def test_feasible_cycles_leave_the_expected_idle_time(rng):
    for system, spec, trace, report in random_runs(rng, count=SYSTEMS // 4):
        if report.feasible:
            steady_idle_count(trace, report, system.processors)


def test_decisions_are_memoryless(rng):
    for system, spec, trace, report in random_runs(rng, count=SYSTEMS // 4):
        chosen = {}

        for t, task_ids in enumerate(trace.assignment):
            key = trace.states[t].key()
            assert chosen.setdefault(key, task_ids) == task_ids


def test_every_simulated_schedule_is_a_graph_path(rng):
    for _ in range(50):
        system = random_system(rng, n_max=2, m_max=1, period_max=4, wcet_max=2, offset_max=2)
        sg = build_graph(system, default_horizon(system))

        for spec in BUILTIN_SCHEDULERS:
            trace, report = run(system, spec)

            if report.feasible:
                assert trace_path(sg, trace) == (report.transient_len, report.period_len)
            else:
                assert trace_path(sg, trace) is None


def test_general_bound_holds_for_every_schedule(rng):
    for _ in range(50):
        system = random_system(rng, n_max=2, m_max=1, period_max=4, wcet_max=2, offset_max=2)
        sg = build_graph(system, default_horizon(system))

        assert verify_bound(sg, general_product_bound(system)), system


def test_constrained_systems(rng):
    for _ in range(200):
        system = random_system(rng, n_max=3, m_max=2, period_max=4, wcet_max=3,
                                offset_max=2, constraints=2)

        for spec in BUILTIN_SCHEDULERS:
            trace, report = run(system, spec)

            if report.feasible:
                assert check_deadlines(system, trace) is None
                replayed = replay(system, trace.assignment)
                assert replayed.states == trace.states

                synced = synchronize(system)
                moved = replay(synced, trace.assignment)
                assert check_deadlines(synced, moved) is None, (system, spec.label)


def test_demand_pruning_is_sound(rng):
    for _ in range(50):
        system = random_system(rng, n_max=2, m_max=1, period_max=4, wcet_max=2, offset_max=2)
        sg = build_graph(system, default_horizon(system))
        window = demand_window(system)
        memo = {}

        pruned = sorted(key for key, reason in sg.pruned.items()
                        if reason != 'every continuation is infeasible')

        for key in rng.sample(pruned, min(len(pruned), 20)):
            assert not can_avoid_misses(system, sg.state(key), window, memo), (system, sg.pruned[key])
