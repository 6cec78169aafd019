# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
"""Random tiny task systems for property tests and benchmarks."""
import itertools

from .utl import *
from .tsk import *

__all__ = ['random_system', 'random_constraints']

def _random_task(rng, task_id, period_max, wcet_max, offset_max):
    period = rng.randint(1, period_max)
    wcet = rng.randint(1, min(wcet_max, period))
    deadline = rng.randint(wcet, 2 * period)

    return Task(task_id, rng.randint(0, offset_max), wcet, period, deadline)

def random_constraints(rng, tasks, count):
    """Up to `count` valid constraints over `tasks`, at most one per kind and task pair."""
    candidates = []

    for a, b in itertools.permutations(tasks, 2):
        if a.period == b.period:
            candidates.append(StructuralConstraint.precedes(a.id, b.id))
        if a.id < b.id:
            candidates.append(StructuralConstraint.excludes(a.id, b.id))

    for task in tasks:
        candidates.append(StructuralConstraint.non_preemptive(task.id))
        if task.wcet > 1:
            candidates.append(StructuralConstraint.suspends(task.id,
                        rng.randint(1, task.wcet - 1), rng.randint(1, 2)))

    rng.shuffle(candidates)
    chosen = []

    for c in candidates[:count]:
        # never ordered both ways round
        if c.kind == 'precedes' and any(o.kind == 'precedes' and set(o.tasks) == set(c.tasks)
                                                                            for o in chosen):
            continue
        chosen.append(c)

    return chosen

def random_system(rng, n_max=3, m_max=2, period_max=6, wcet_max=4, offset_max=3,
                    constraints=0, attempts=1000):
    """
    A valid system with U <= m drawn from `rng` (a random.Random). Deadlines
    range up to twice the period so unconstrained systems show up too.
    """
    for _ in range(attempts):
        n = rng.randint(1, n_max)
        m = rng.randint(1, m_max)
        tasks = [_random_task(rng, i + 1, period_max, wcet_max, offset_max) for i in range(n)]

        system = TaskSystem(tasks, m, random_constraints(rng, tasks, constraints)
                                                        if constraints else ())

        if utilization(system) > m:
            continue

        if any(d.level == 'error' for d in validate(system)):
            continue

        return system

    raise ConfigurationError('no system with U <= m after %d attempts' % attempts)
