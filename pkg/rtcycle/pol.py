# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
"""
Deterministic memoryless schedulers. A decision is a function of the system
and the observed state only; the tick is passed through for error messages.
"""
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .utl import *
from .tsk import *
from .sim import *

__all__ = [
    'SchedulerSpec', 'SCHEDULER_KINDS', 'PRIORITY_RULES', 'edf', 'lrptf',
    'fixed_priority', 'table_driven', 'priority_ranks', 'decide',
    'make_adversary_table',
]

SCHEDULER_KINDS = ('fixed_task_priority', 'global_edf', 'lrptf', 'table_driven')
PRIORITY_RULES = ('explicit', 'rate_monotonic', 'deadline_monotonic')

@dataclass(frozen=True, eq=True)
class SchedulerSpec(object):
    kind: str
    rule: Optional[str] = None          # fixed_task_priority only
    order: Tuple[int, ...] = ()         # explicit order, highest first
    table: Dict[bytes, Tuple[int, ...]] = field(default_factory=dict, hash=False)
    fallback: Optional['SchedulerSpec'] = None

    @property
    def label(self):
        if self.kind == 'fixed_task_priority':
            return 'fpp:' + {'explicit': 'explicit', 'rate_monotonic': 'rm',
                            'deadline_monotonic': 'dm'}[self.rule]
        if self.kind == 'global_edf': return 'edf'
        if self.kind == 'lrptf': return 'lrptf'

        return 'table'

def edf():
    return SchedulerSpec('global_edf')

def lrptf():
    return SchedulerSpec('lrptf')

def fixed_priority(rule, order=()):
    if rule not in PRIORITY_RULES:
        raise ConfigurationError('unknown priority rule "%s"' % rule)

    return SchedulerSpec('fixed_task_priority', rule, tuple(order))

def table_driven(table, fallback=None):
    return SchedulerSpec('table_driven', table=dict(table), fallback=fallback or edf())

def priority_ranks(spec, system):
    """task id -> rank, 0 being the highest priority."""
    if spec.rule == 'rate_monotonic':
        order = [task.id for task in sorted(system.tasks, key=lambda task: (task.period, task.id))]

    elif spec.rule == 'deadline_monotonic':
        order = [task.id for task in sorted(system.tasks, key=lambda task: (task.deadline, task.id))]

    elif spec.order:
        order = list(spec.order)

        if sorted(order) != [task.id for task in system.tasks]:
            raise ConfigurationError('priority order %r is not a permutation of the '
                                                    'task ids' % (order,))
    else:
        order = priority_order(system)

    return dict((task_id, rank) for rank, task_id in enumerate(order))

# ==============================================================================
# ~ [ decisions ]
# ==============================================================================

def _sort_key(spec, system, state):
    if spec.kind == 'global_edf':
        return lambda task_id: relative_deadline(system, state, task_id)

    if spec.kind == 'lrptf':
        return lambda task_id: -head_remaining(system, state, task_id)

    if spec.kind == 'fixed_task_priority':
        ranks = priority_ranks(spec, system)
        return lambda task_id: ranks[task_id]

    raise ConfigurationError('unknown scheduler kind "%s"' % spec.kind)

def _greedy(system, state, eligible, key):
    # started non-preemptive jobs first, then by policy key, ties to the lower id
    mandatory = set(mandatory_tasks(system, state, eligible))
    ordered = sorted(eligible, key=lambda job: (job.task not in mandatory, key(job.task), job.task))

    chosen = []
    picked = set()

    for job in ordered:
        if len(chosen) == system.processors:
            break

        if compatible(system, state, picked, job.task):
            chosen.append(job)
            picked.add(job.task)

    return chosen

def decide(spec, system, state, t, eligible):
    if spec.kind == 'table_driven':
        task_ids = spec.table.get(state.key())

        if task_ids is None:
            return decide(spec.fallback, system, state, t, eligible)

        heads = dict((job.task, job) for job in eligible)
        missing = [task_id for task_id in task_ids if task_id not in heads]

        if missing:
            raise InvalidDecision('ineligible', 'table entry runs blocked tasks %r' % missing, t)

        return [heads[task_id] for task_id in task_ids]

    return _greedy(system, state, eligible, _sort_key(spec, system, state))

# ==============================================================================
# ~ [ adversary tables ]
# ==============================================================================

@profile("pol.py", "make_adversary_table")
def make_adversary_table(system, target_trace, fallback=None):
    """
    Build the table-driven scheduler that reproduces `target_trace`. Every
    tick is replayed through the state machine, so an invalid decision raises
    InvalidDecision, and a state decided two different ways raises
    MemorylessnessViolation naming both ticks.
    """
    replayed = replay(system, target_trace.assignment)

    miss = check_deadlines(system, replayed)
    if miss is not None:
        raise ConfigurationError('target trace is infeasible: task %d job %d misses '
                                'its deadline at t=%d' % (miss.task, miss.job, miss.tick))

    table = {}
    first_seen = {}

    for t, task_ids in enumerate(replayed.assignment):
        key = replayed.states[t].key()

        if key in table and table[key] != task_ids:
            raise MemorylessnessViolation(first_seen[key], t, table[key], task_ids)

        table.setdefault(key, task_ids)
        first_seen.setdefault(key, t)

    log('SIM', 'adversary table: %d states from %d ticks' % (len(table), replayed.horizon))
    return table_driven(table, fallback)
