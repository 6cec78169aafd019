# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
import random

import pytest

from rtcycle import *

def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: property suites over 1000 random systems')

@pytest.fixture
def sys1():
    """Two unit tasks and one long-deadline task on two processors."""
    return TaskSystem([
        Task(1, 0, 1, 2, 2),
        Task(2, 0, 1, 2, 2),
        Task(3, 0, 3, 4, 7),
    ], processors=2)

@pytest.fixture
def sys2():
    return TaskSystem([
        Task(1, 0, 2, 4, 5, priority=2),
        Task(2, 0, 1, 4, 4, priority=1),
    ], processors=1)

@pytest.fixture
def offset_pair():
    """Task 1 released late with the higher priority, equal periods."""
    return TaskSystem([
        Task(1, 1, 2, 8, 7, priority=1),
        Task(2, 0, 3, 8, 8, priority=2),
    ], processors=1)

@pytest.fixture
def mixed_periods():
    return TaskSystem([
        Task(1, 1, 3, 12, 7, priority=1),
        Task(2, 0, 2, 8, 9, priority=2),
    ], processors=1)

@pytest.fixture
def late_pair():
    """Both deadlines one tick past the period."""
    return TaskSystem([
        Task(1, 0, 1, 4, 5),
        Task(2, 0, 1, 4, 5),
    ], processors=1)

@pytest.fixture
def rng():
    return random.Random(20260317)

# every built-in scheduler usable without explicit priorities
BUILTIN_SCHEDULERS = [
    edf(),
    lrptf(),
    fixed_priority('rate_monotonic'),
    fixed_priority('deadline_monotonic'),
]

@pytest.fixture(params=BUILTIN_SCHEDULERS, ids=lambda spec: spec.label)
def scheduler(request):
    return request.param

# a hand-built schedule of sys1 that leaves task 3 one tick more behind each
# hyperperiod until it carries three ticks over, then repeats
ADVERSARY_SYS1 = [
    (1, 2), (3,), (1, 2), (3,),
    (1, 2), (3,), (1, 2), (3,),
    (1, 2), (3,), (1, 3), (2,),
    (1, 3), (2, 3), (1, 3), (2,),
]

@pytest.fixture
def adversary_sys1():
    return ScheduleTrace(2, list(ADVERSARY_SYS1))

def missed(system, state):
    return any(r > 0 and c >= 0 and relative_deadline(system, state, task.id) <= 0
               for task, r, c in zip(system.tasks, state.remaining, state.clocks))

def can_avoid_misses(system, state, ticks, memo=None):
    """Whether some sequence of valid decisions runs `ticks` ticks without a miss."""
    memo = {} if memo is None else memo

    if missed(system, state):
        return False
    if ticks == 0:
        return True

    key = (state.key(), ticks)
    if key not in memo:
        memo[key] = any(can_avoid_misses(system, tick(system, state, decision, check=False),
                                         ticks - 1, memo)
                        for decision in valid_decisions(system, state))
    return memo[key]

def demand_window(system):
    """Ticks within which a state that fails the demand test must miss."""
    return max_offset(system) + max(task.deadline + task.period for task in system.tasks)
