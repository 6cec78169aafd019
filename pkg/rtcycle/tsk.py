# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
"""
Task systems: concrete periodic tasks on m identical processors, plus the
structural constraints between them. Everything here is immutable.
"""
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Tuple
import warnings

from .utl import *

__all__ = [
    'Task', 'TaskSystem', 'JobId', 'StructuralConstraint', 'Diagnostic',
    'CONSTRAINT_KINDS', 'hyperperiod', 'utilization', 'max_offset',
    'synchronize', 'validate', 'ensure_valid', 'priority_order',
]

CONSTRAINT_KINDS = ('precedes', 'excludes', 'suspends', 'non_preemptive')

@dataclass(frozen=True)
class Task(object):
    id: int
    offset: int
    wcet: int
    period: int
    deadline: int
    priority: Optional[int] = None

    def release(self, j):
        return self.offset + j * self.period

    def absolute_deadline(self, j):
        return self.release(j) + self.deadline

@dataclass(frozen=True)
class StructuralConstraint(object):
    """
    precedes(producer, consumer): job k of the consumer starts only after job
        k of the producer completed.
    excludes(a, b): a job of a and a job of b are never in progress together.
    suspends(task, after, delay): each job, once it executed `after` ticks,
        is ineligible for the next `delay` ticks.
    non_preemptive(task): a started job runs every tick until it completes
        unless it is suspended.
    """
    kind: str
    tasks: Tuple[int, ...]
    after: int = 0
    delay: int = 0

    @classmethod
    def precedes(cls, producer, consumer):
        return cls('precedes', (producer, consumer))

    @classmethod
    def excludes(cls, a, b):
        return cls('excludes', (a, b))

    @classmethod
    def suspends(cls, task, after, delay):
        return cls('suspends', (task,), after, delay)

    @classmethod
    def non_preemptive(cls, task):
        return cls('non_preemptive', (task,))

    def to_dict(self):
        if self.kind == 'precedes':
            return {'kind': self.kind, 'producer': self.tasks[0], 'consumer': self.tasks[1]}
        if self.kind == 'excludes':
            return {'kind': self.kind, 'a': self.tasks[0], 'b': self.tasks[1]}
        if self.kind == 'suspends':
            return {'kind': self.kind, 'task': self.tasks[0],
                    'after': self.after, 'delay': self.delay}

        return {'kind': self.kind, 'task': self.tasks[0]}

@dataclass(frozen=True)
class TaskSystem(object):
    tasks: Tuple[Task, ...]
    processors: int = 1
    constraints: Tuple[StructuralConstraint, ...] = ()

    def __post_init__(self):
        # tuples keep systems hashable; id order makes task(id) an index
        object.__setattr__(self, 'tasks', tuple(sorted(self.tasks, key=lambda task: task.id)))
        object.__setattr__(self, 'constraints', tuple(self.constraints))

    @property
    def n(self):
        return len(self.tasks)

    def task(self, task_id):
        return self.tasks[task_id - 1]

    def of_kind(self, kind):
        return [c for c in self.constraints if c.kind == kind]

    @property
    def synchronous(self):
        return all(task.offset == 0 for task in self.tasks)

    @property
    def constrained(self):
        return all(task.deadline <= task.period for task in self.tasks)

@dataclass(frozen=True)
class JobId(object):
    task: int
    index: int

    def release(self, system):
        return system.task(self.task).release(self.index)

    def deadline(self, system):
        return system.task(self.task).absolute_deadline(self.index)

@dataclass(frozen=True)
class Diagnostic(object):
    level: str # "error" or "warning"
    message: str
    field: Optional[str] = None

    def __str__(self):
        if self.field: return '%s: %s: %s' % (self.level, self.field, self.message)
        return '%s: %s' % (self.level, self.message)

# ==============================================================================
# ~ [ derived quantities ]
# ==============================================================================

def hyperperiod(system):
    h = 1
    for task in system.tasks:
        h = checked_lcm(h, task.period, 'hyperperiod: lcm(%d, T%d=%d)' % (h, task.id, task.period))
    return h

def utilization(system):
    return sum((Fraction(task.wcet, task.period) for task in system.tasks), Fraction(0))

def max_offset(system):
    return max(task.offset for task in system.tasks)

def synchronize(system):
    """Move every release to 0 while keeping absolute deadlines: O'=0, D'=D+O."""
    return replace(system, tasks=tuple(replace(task, offset=0,
            deadline=task.deadline + task.offset) for task in system.tasks))

def priority_order(system):
    """Task ids from highest to lowest explicit priority (lower value wins)."""
    missing = [task.id for task in system.tasks if task.priority is None]
    if missing:
        raise ConfigurationError('tasks %s have no priority' % missing)

    values = [task.priority for task in system.tasks]
    if len(set(values)) != len(values):
        raise ConfigurationError('task priorities are not unique: %s' % values)

    return [task.id for task in sorted(system.tasks, key=lambda task: task.priority)]

# ==============================================================================
# ~ [ validation ]
# ==============================================================================

def _validate_constraint(system, i, c):
    name = 'constraints[%d]' % i
    ids = set(task.id for task in system.tasks)

    if c.kind not in CONSTRAINT_KINDS:
        yield Diagnostic('error', 'unknown constraint kind "%s"' % c.kind, name)
        return

    for task_id in c.tasks:
        if task_id not in ids:
            yield Diagnostic('error', 'references unknown task %r' % task_id, name)
            return

    if c.kind in ('precedes', 'excludes'):
        a, b = c.tasks
        if a == b:
            yield Diagnostic('error', '%s relates task %d to itself' % (c.kind, a), name)

        elif c.kind == 'precedes' and system.task(a).period != system.task(b).period:
            yield Diagnostic('error', 'precedes needs equal periods (T%d=%d, T%d=%d)'
                    % (a, system.task(a).period, b, system.task(b).period), name)

    elif c.kind == 'suspends':
        task = system.task(c.tasks[0])

        if not 1 <= c.after < task.wcet:
            yield Diagnostic('error', 'suspends after=%d must lie in [1, wcet=%d)'
                                        % (c.after, task.wcet), name)
        if c.delay < 1:
            yield Diagnostic('error', 'suspends delay must be >= 1', name)

def validate(system):
    diagnostics = []

    if system.processors < 1:
        diagnostics.append(Diagnostic('error', 'need at least one processor', 'processors'))

    if not system.tasks:
        diagnostics.append(Diagnostic('error', 'need at least one task', 'tasks'))

    seen = set()
    for i, task in enumerate(system.tasks):
        name = 'tasks[%d]' % i

        if task.id in seen:
            diagnostics.append(Diagnostic('error', 'duplicate task id %d' % task.id, name))
        seen.add(task.id)

        if task.offset < 0:
            diagnostics.append(Diagnostic('error', 'offset must be >= 0', name + '.offset'))

        for attr in ('wcet', 'period', 'deadline'):
            if getattr(task, attr) < 1:
                diagnostics.append(Diagnostic('error', '%s must be >= 1' % attr,
                                                        '%s.%s' % (name, attr)))

        if task.wcet > task.deadline >= 1:
            diagnostics.append(Diagnostic('warning', 'task %d has wcet %d > deadline %d'
                            % (task.id, task.wcet, task.deadline), name))

    if seen != set(range(1, len(system.tasks) + 1)) and len(seen) == len(system.tasks):
        diagnostics.append(Diagnostic('error', 'task ids must be 1..%d' % len(system.tasks), 'tasks'))

    # the remaining checks index tasks by id
    if any(d.level == 'error' for d in diagnostics):
        return diagnostics

    suspended = set()
    for i, c in enumerate(system.constraints):
        diagnostics.extend(_validate_constraint(system, i, c))

        if c.kind == 'suspends':
            if c.tasks[0] in suspended:
                diagnostics.append(Diagnostic('error', 'task %d has two suspends '
                        'constraints' % c.tasks[0], 'constraints[%d]' % i))
            suspended.add(c.tasks[0])

    u = utilization(system)
    if u > system.processors:
        diagnostics.append(Diagnostic('warning', 'U=%s > m=%d' % (u, system.processors)))

    return diagnostics

def ensure_valid(system):
    """Raise on the first error, turn warnings into warnings.warn calls."""
    diagnostics = validate(system)

    for d in diagnostics:
        if d.level == 'error':
            raise ConfigurationError(str(d))

    for d in diagnostics:
        warnings.warn(str(d))

    return system
