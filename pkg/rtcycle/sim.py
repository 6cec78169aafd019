# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
"""
The unit-tick scheduling state machine.

A state holds, per task, the whole backlog of released unfinished work and a
local clock (ticks since the latest release, or the negative countdown to the
first one), plus the runtime facts of the structural constraints: one timer
per suspends constraint and one completion lead per precedes constraint. The
state at tick t is observed after the releases of t were added; the pre-state
is the same snapshot with those releases taken back out.

Jobs of a task run in release order and share one wcet, so the backlog splits
into whole jobs plus a partially executed head and needs no per-job storage.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple
import collections
import functools
import json

from .utl import *
from .tsk import *

__all__ = [
    'SystemState', 'PreState', 'Event', 'MissRecord', 'PendingJob',
    'ScheduleTrace', 'TraceBuilder', 'initial_state', 'pre_state',
    'head_remaining', 'in_progress', 'relative_deadline', 'pending_jobs',
    'eligible_jobs', 'mandatory_tasks', 'compatible', 'check_decision',
    'tick', 'replay', 'check_deadlines', 'releases_at', 'misses_at',
]

# ==============================================================================
# ~ [ states ]
# ==============================================================================

@dataclass(frozen=True)
class SystemState(object):
    remaining: Tuple[int, ...]
    clocks: Tuple[int, ...]
    suspended: Tuple[int, ...] = () # one timer per suspends constraint
    leads: Tuple[int, ...] = ()     # one lead per precedes constraint

    def as_dict(self):
        return {'remaining': list(self.remaining), 'clocks': list(self.clocks),
                'suspended': list(self.suspended), 'leads': list(self.leads)}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d['remaining']), tuple(d['clocks']),
                tuple(d.get('suspended', ())), tuple(d.get('leads', ())))

    def key(self):
        return json.dumps(self.as_dict(), sort_keys=True, separators=(',', ':')).encode('ascii')

    def label(self):
        text = '%s | %s' % (','.join(map(str, self.remaining)), ','.join(map(str, self.clocks)))
        if self.suspended: text += ' | s ' + ','.join(map(str, self.suspended))
        if self.leads: text += ' | p ' + ','.join(map(str, self.leads))
        return text

@dataclass(frozen=True)
class PreState(object):
    remaining: Tuple[int, ...]
    clocks: Tuple[int, ...]
    suspended: Tuple[int, ...] = ()
    leads: Tuple[int, ...] = ()

    def key(self):
        return SystemState.key(self)

    as_dict = SystemState.as_dict

_Layout = collections.namedtuple('_Layout', 'precedes suspends excludes non_preemptive')

@functools.lru_cache(maxsize=64)
def _layout(system):
    return _Layout(
        [c.tasks for c in system.of_kind('precedes')],
        [(c.tasks[0], c.after, c.delay) for c in system.of_kind('suspends')],
        [c.tasks for c in system.of_kind('excludes')],
        frozenset(c.tasks[0] for c in system.of_kind('non_preemptive')),
    )

def initial_state(system):
    layout = _layout(system)

    return SystemState(
        tuple(task.wcet if task.offset == 0 else 0 for task in system.tasks),
        tuple(-task.offset for task in system.tasks),
        (0,) * len(layout.suspends),
        (0,) * len(layout.precedes),
    )

def pre_state(system, state):
    return PreState(
        tuple(r - task.wcet if c == 0 else r for task, r, c in
                        zip(system.tasks, state.remaining, state.clocks)),
        state.clocks, state.suspended, state.leads)

# ==============================================================================
# ~ [ job bookkeeping ]
# ==============================================================================

def head_remaining(system, state, task_id):
    task = system.task(task_id)
    r = state.remaining[task_id - 1]

    return r - (ceil_div(r, task.wcet) - 1) * task.wcet if r > 0 else 0

def in_progress(system, state, task_id):
    return 0 < head_remaining(system, state, task_id) < system.task(task_id).wcet

def relative_deadline(system, state, task_id, k=0):
    """Ticks from now to the deadline of the k-th oldest pending job."""
    task = system.task(task_id)
    q = ceil_div(state.remaining[task_id - 1], task.wcet)

    return task.deadline - state.clocks[task_id - 1] - (q - 1 - k) * task.period

@dataclass(frozen=True)
class PendingJob(object):
    job: JobId
    release: int
    deadline: int
    remaining: int

def pending_jobs(system, state, t, task_id):
    """Pending jobs of one task, oldest first."""
    task = system.task(task_id)
    r, c = state.remaining[task_id - 1], state.clocks[task_id - 1]
    if r <= 0 or c < 0:
        return []

    q = ceil_div(r, task.wcet)
    newest = (t - task.offset - c) // task.period
    head = r - (q - 1) * task.wcet
    jobs = []

    for k in range(q):
        j = newest - (q - 1 - k)
        jobs.append(PendingJob(JobId(task_id, j), task.release(j),
                task.absolute_deadline(j), head if k == 0 else task.wcet))

    return jobs

def releases_at(system, state, t):
    return [JobId(task.id, (t - task.offset) // task.period)
            for task, c in zip(system.tasks, state.clocks) if c == 0]

def misses_at(system, state, t):
    misses = []

    for task in system.tasks:
        for pending in pending_jobs(system, state, t, task.id):
            if pending.deadline == t:
                misses.append(pending.job)

    return misses

# ==============================================================================
# ~ [ eligibility and decision rules ]
# ==============================================================================

def eligible_jobs(system, state, t):
    """FIFO head of every task that may run now, by ascending task id."""
    layout = _layout(system)
    blocked = set()

    for timer, (task_id, _, _) in zip(state.suspended, layout.suspends):
        if timer > 0: blocked.add(task_id)

    for lead, (_, consumer) in zip(state.leads, layout.precedes):
        if lead < 1: blocked.add(consumer)

    eligible = []
    for task in system.tasks:
        if state.remaining[task.id - 1] > 0 and task.id not in blocked:
            c = state.clocks[task.id - 1]
            q = ceil_div(state.remaining[task.id - 1], task.wcet)
            j = (t - task.offset - c) // task.period - (q - 1)
            eligible.append(JobId(task.id, j))

    return eligible

def mandatory_tasks(system, state, eligible):
    """Eligible non-preemptive jobs that already started."""
    layout = _layout(system)

    return [job.task for job in eligible if job.task in layout.non_preemptive
                            and in_progress(system, state, job.task)]

def compatible(system, state, chosen, task_id):
    """Whether task_id may join the tasks in `chosen` under excludes."""
    for a, b in _layout(system).excludes:
        if task_id == a: other = b
        elif task_id == b: other = a
        else: continue

        if other in chosen or in_progress(system, state, other):
            return False

    return True

def check_decision(system, state, decision, t=None, eligible=None):
    if eligible is None:
        eligible = eligible_jobs(system, state, t if t is not None else 0)

    tasks = [job.task for job in decision]

    if len(set(tasks)) != len(tasks):
        raise InvalidDecision('duplicate', 'a task runs on two processors: %r' % tasks, t)

    if len(decision) > system.processors:
        raise InvalidDecision('overcommit', '%d jobs on %d processors'
                                % (len(decision), system.processors), t)

    if t is None:
        allowed = set(job.task for job in eligible)
        bad = [job for job in decision if job.task not in allowed]
    else:
        allowed = set(eligible)
        bad = [job for job in decision if job not in allowed]

    if bad:
        raise InvalidDecision('ineligible', 'not eligible: %r' % bad, t)

    chosen = set()
    for task_id in tasks:
        if not compatible(system, state, chosen, task_id):
            raise InvalidDecision('excludes', 'task %d conflicts with %r' % (task_id, sorted(chosen)), t)
        chosen.add(task_id)

    mandatory = mandatory_tasks(system, state, eligible)
    if len(mandatory) <= system.processors:
        ok = set(mandatory) <= chosen
    else:
        # more started jobs than processors: any m of them, nothing else
        ok = len(chosen) == system.processors and chosen <= set(mandatory)

    if not ok:
        raise InvalidDecision('non_preemptive', 'started non-preemptive jobs must '
                        'keep running: %r' % sorted(mandatory), t)

# ==============================================================================
# ~ [ transition ]
# ==============================================================================

def tick(system, state, decision, t=None, check=True):
    """Run `decision` over [t, t+1) and return the state observed at t+1."""
    if check: check_decision(system, state, decision, t)

    layout = _layout(system)
    remaining = list(state.remaining)
    timers = [x - 1 if x > 0 else 0 for x in state.suspended]
    leads = list(state.leads)

    for job in decision:
        task = system.task(job.task)
        head = head_remaining(system, state, job.task)
        remaining[job.task - 1] -= 1

        if head == 1:
            for j, (producer, consumer) in enumerate(layout.precedes):
                if producer == job.task: leads[j] += 1
                if consumer == job.task: leads[j] -= 1
        else:
            progress = task.wcet - head + 1
            for j, (task_id, after, delay) in enumerate(layout.suspends):
                if task_id == job.task and progress == after:
                    timers[j] = delay

    clocks = []
    for task, c in zip(system.tasks, state.clocks):
        c = c + 1 if c < 0 else (c + 1) % task.period
        if c == 0: remaining[task.id - 1] += task.wcet
        clocks.append(c)

    return SystemState(tuple(remaining), tuple(clocks), tuple(timers), tuple(leads))

# ==============================================================================
# ~ [ traces ]
# ==============================================================================

@dataclass(frozen=True)
class Event(object):
    kind: str # release, completion or miss
    task: int
    job: int
    tick: int

@dataclass(frozen=True)
class MissRecord(object):
    task: int
    job: int
    tick: int

    @property
    def ordinal(self):
        return self.job + 1

@dataclass
class ScheduleTrace(object):
    processors: int
    assignment: List[Tuple[int, ...]] = field(default_factory=list)
    events: List[Event] = field(default_factory=list)
    utilization: Optional[Fraction] = None
    states: list = field(default_factory=list, compare=False, repr=False)

    @property
    def horizon(self):
        return len(self.assignment)

    def events_of(self, kind):
        return [e for e in self.events if e.kind == kind]

    def idle_at(self, t):
        return self.processors - len(self.assignment[t])

class TraceBuilder(object):
    """Records assignment, events and (optionally) the state seen at each tick."""

    def __init__(self, system, keep_states=True):
        self.system = system
        self.keep_states = keep_states
        self.trace = ScheduleTrace(system.processors, utilization=utilization(system))
        self.misses = []

    def observe(self, state, t):
        for job in releases_at(self.system, state, t):
            self.trace.events.append(Event('release', job.task, job.index, t))

        misses = misses_at(self.system, state, t)
        for job in misses:
            self.trace.events.append(Event('miss', job.task, job.index, t))
            self.misses.append(MissRecord(job.task, job.index, t))
            log('SIM', 't=%d: task %d job %d missed its deadline' % (t, job.task, job.index))

        return misses

    def execute(self, state, decision, t):
        if self.keep_states: self.trace.states.append(state)

        nxt = tick(self.system, state, decision, t)
        self.trace.assignment.append(tuple(sorted(job.task for job in decision)))

        for job in sorted(decision, key=lambda job: job.task):
            if head_remaining(self.system, state, job.task) == 1:
                self.trace.events.append(Event('completion', job.task, job.index, t + 1))

        return nxt

def replay(system, assignment):
    """Drive the state machine with a fixed per-tick list of task ids."""
    builder = TraceBuilder(system)
    state = initial_state(system)

    for t, task_ids in enumerate(assignment):
        builder.observe(state, t)
        heads = dict((job.task, job) for job in eligible_jobs(system, state, t))

        missing = [task_id for task_id in task_ids if task_id not in heads]
        if missing:
            raise InvalidDecision('ineligible', 'tasks %r cannot run' % missing, t)

        state = builder.execute(state, [heads[task_id] for task_id in task_ids], t)

    builder.observe(state, len(assignment))
    builder.trace.states.append(state)
    return builder.trace

def check_deadlines(system, trace):
    """Earliest job whose deadline passed before its work was all executed."""
    first = None

    for task in system.tasks:
        done = 0    # executed ticks of this task in [0, t)
        t = 0
        j = 0

        while True:
            d = task.absolute_deadline(j)
            if d > trace.horizon or (first is not None and d > first.tick):
                break

            while t < d:
                if task.id in trace.assignment[t]: done += 1
                t += 1

            if done < (j + 1) * task.wcet:
                if first is None or (d, task.id) < (first.tick, first.task):
                    first = MissRecord(task.id, j, d)
                break

            j += 1

    return first
