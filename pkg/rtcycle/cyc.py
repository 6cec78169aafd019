# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
"""
Simulate a scheduler until the state repeats. The first repeated state marks
the end of the transient phase; the distance to its repetition is the period.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .utl import *
from .tsk import *
from .sim import *
from .pol import *
from .bnd import general_product_bound

__all__ = [
    'CycleReport', 'VERDICTS', 'run', 'find_cycle', 'canonical_state_key',
    'prestate_cycle', 'steady_idle_count', 'idle_profile',
    'is_pseudo_work_conserving', 'default_horizon',
]

VERDICTS = ('cycle_found', 'miss_found', 'horizon_exhausted')

@dataclass(frozen=True)
class CycleReport(object):
    verdict: str
    feasible: bool
    transient_len: Optional[int]
    period_len: Optional[int]
    first_miss: Optional[MissRecord]
    bound_used: int
    scheduler: str = ''
    hyperperiod: int = 0
    prestate_cycle: Optional[Tuple[int, int]] = None

def canonical_state_key(state):
    return state.key()

def default_horizon(system):
    """General product bound plus one hyperperiod, so the revisit is observable."""
    return checked_add(general_product_bound(system), hyperperiod(system), 'default horizon')

def prestate_cycle(system, states, h):
    """
    First repetition among the pre-states observed at multiples of H, as
    (first tick, period), or None when `states` is too short to show one.
    """
    seen = {}

    for k in range(0, len(states), h):
        key = pre_state(system, states[k]).key()

        if key in seen:
            return (seen[key], k - seen[key])
        seen[key] = k

    return None

@profile("cyc.py", "run")
def run(system, spec, horizon=None, stop_on_miss=False, stop_on_cycle=True):
    h = hyperperiod(system)
    if horizon is None:
        horizon = default_horizon(system)

    builder = TraceBuilder(system)
    state = initial_state(system)
    seen = {}
    cycle = None
    t = 0

    while True:
        builder.observe(state, t)
        key = state.key()

        if cycle is None and key in seen:
            cycle = (seen[key], t - seen[key])
            log('CYCLE', 'state at t=%d repeats at t=%d' % (seen[key], t))

            if stop_on_cycle:
                break

        seen.setdefault(key, t)

        if (stop_on_miss and builder.misses) or t >= horizon:
            break

        decision = decide(spec, system, state, t, eligible_jobs(system, state, t))
        state = builder.execute(state, decision, t)
        t += 1

    trace = builder.trace
    trace.states.append(state)

    pre_cycle = None
    if cycle is not None and system.synchronous:
        pre_cycle = _cross_check(system, spec, trace.states, cycle, h)

    if builder.misses: verdict = 'miss_found'
    elif cycle is not None: verdict = 'cycle_found'
    else: verdict = 'horizon_exhausted'

    report = CycleReport(
        verdict,
        not builder.misses and cycle is not None,
        cycle[0] if cycle else None,
        cycle[1] if cycle else None,
        builder.misses[0] if builder.misses else None,
        horizon,
        spec.label,
        h,
        pre_cycle,
    )

    log('CYCLE', '%s: %s transient=%s period=%s' % (spec.label, verdict,
                                    report.transient_len, report.period_len))
    return trace, report

def _cross_check(system, spec, states, cycle, h):
    # full-state cycle (t1, p) must show up at the hyperperiod boundaries as
    # (ceil(t1 / H) * H, p) when every task is released at 0
    t1, p = cycle
    expected = (ceil_div(t1, h) * h, p)

    states = list(states)
    state = states[-1]

    for t in range(len(states) - 1, expected[0] + p):
        decision = decide(spec, system, state, t, eligible_jobs(system, state, t))
        state = tick(system, state, decision, t)
        states.append(state)

    found = prestate_cycle(system, states, h)

    if found != expected:
        raise InvariantViolation('pre-states at multiples of H=%d repeat as %r, '
                        'full states as %r (expected %r)' % (h, found, cycle, expected))
    return found

def find_cycle(system, spec, horizon=None):
    return run(system, spec, horizon)[1]

# ==============================================================================
# ~ [ idle accounting ]
# ==============================================================================

def steady_idle_count(trace, report, m, utilization=None):
    """Idle processor-ticks in one period; must equal period * (m - U)."""
    if report.transient_len is None or not report.feasible:
        raise ValueError('idle accounting needs a feasible run that found its cycle')

    u = trace.utilization if utilization is None else Fraction(utilization)
    start, length = report.transient_len, report.period_len

    idle = sum(m - len(trace.assignment[t]) for t in range(start, start + length))
    expected = length * (m - u)

    if idle != expected:
        raise InvariantViolation('%d idle processor-ticks in [%d, %d), expected %s'
                                    % (idle, start, start + length, expected))
    return idle

def idle_profile(trace, h):
    """Idle processor-ticks in each complete window [kH, (k+1)H) of the trace."""
    return [sum(trace.idle_at(t) for t in range(k, k + h))
            for k in range(0, trace.horizon - h + 1, h)]

def is_pseudo_work_conserving(trace, h, utilization=None):
    u = trace.utilization if utilization is None else Fraction(utilization)
    allowance = h * (trace.processors - u)

    return all(idle <= allowance for idle in idle_profile(trace, h))
