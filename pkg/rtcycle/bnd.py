# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
"""
Closed-form simulation interval bounds. Every value is an integer tick count
and every product goes through the checked helpers of utl.
"""
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .utl import *
from .tsk import *
from . import tsk

__all__ = [
    'BoundsReport', 'BOUND_LABELS', 'sn_bound', 'sn_hat_bound',
    'general_product_bound', 'sync_product_bound', 'leung_bound',
    'bounds_report',
]

# also the tie-break order when two applicable bounds are equal
BOUND_LABELS = ('general_product', 'sync_product', 'sn', 'sn_hat', 'leung')

@dataclass(frozen=True)
class BoundsReport(object):
    hyperperiod: int
    utilization: Fraction
    leung: int
    sn: Optional[int]
    sn_interval_end: Optional[int]
    sn_hat: Optional[int]
    sn_hat_interval_end: Optional[int]
    sync_product_end: int
    general_product_end: int
    best: int
    best_label: str
    applicable: Tuple[str, ...]
    notes: Dict[str, str] = field(default_factory=dict, hash=False)
    priority_order: Tuple[int, ...] = ()

    def value(self, label):
        return {
            'general_product': self.general_product_end,
            'sync_product': self.sync_product_end,
            'sn': self.sn_interval_end,
            'sn_hat': self.sn_hat_interval_end,
            'leung': self.leung,
        }[label]

def _ordered(system, order):
    order = list(order)

    if sorted(order) != [task.id for task in system.tasks]:
        raise ConfigurationError('priority order %r is not a permutation of the '
                                                'task ids' % (order,))
    return [system.task(task_id) for task_id in order]

def _step(prev, task):
    # max(O_i, O_i + ceil((S_{i-1} - O_i) / T_i) * T_i)
    jump = checked_mul(ceil_div(prev - task.offset, task.period), task.period, 'S_i step')
    return max(task.offset, checked_add(task.offset, jump, 'S_i step'))

def sn_bound(system, order):
    for task in system.tasks:
        if task.deadline > task.period:
            raise BoundNotApplicable('sn', 'task %d has D=%d > T=%d'
                                        % (task.id, task.deadline, task.period))

    tasks = _ordered(system, order)
    s = tasks[0].offset

    for task in tasks[1:]:
        s = _step(s, task)

    return s

def sn_hat_bound(system, order):
    tasks = _ordered(system, order)
    s = tasks[0].offset
    h = tasks[0].period

    for task in tasks[1:]:
        h = checked_lcm(h, task.period, 'H_i: lcm(%d, T%d=%d)' % (h, task.id, task.period))
        s = checked_add(_step(s, task), h, 'S^_i')

    return s

def _product(system, lateness):
    h = hyperperiod(system)
    value = h

    for task in system.tasks:
        value = checked_mul(value, clamp0(lateness(task)) + 1,
                            'product bound factor of task %d' % task.id)
    return value

def general_product_bound(system):
    return _product(system, lambda task: task.offset + task.deadline - task.period)

def sync_product_bound(system):
    late = [task.id for task in system.tasks if task.offset > 0]
    if late:
        raise BoundNotApplicable('sync_product', 'tasks %s have non-zero offsets' % late)

    return _product(system, lambda task: task.deadline - task.period)

def leung_bound(system):
    return checked_add(max_offset(system), checked_mul(2, hyperperiod(system)), 'O^max + 2H')

# (O, D, T) per task, in id order, to figures quoted for that system which the
# formulas here do not reproduce
QUOTED_FIGURES = {
    ((1, 7, 12), (0, 9, 8)): {'general_product': 96, 'sn_hat': 24},
}

def _erratum(system, label, value):
    quoted = QUOTED_FIGURES.get(tuple((task.offset, task.deadline, task.period)
                                        for task in system.tasks), {}).get(label)

    if quoted is None or quoted == value:
        return ''
    return '; the quoted figure %d for this system is a suspected erratum' % quoted

LEUNG_SCHEDULERS = ('fixed_task_priority', 'global_edf')

def _leung_restriction(system, scheduler):
    '''None when O^max + 2H covers every schedule of `scheduler` on `system`.'''

    if scheduler is None:
        return 'needs a fixed-priority or EDF scheduler'
    if scheduler.kind not in LEUNG_SCHEDULERS:
        return 'not for %s' % scheduler.label
    if system.processors != 1:
        return 'uniprocessor only'
    if system.constraints:
        return 'independent tasks only'

    late = [task.id for task in system.tasks if task.deadline > task.period]
    if late:
        return 'tasks %s have D > T' % late

    return None

def _factors(system, lateness):
    return ' * '.join('%d' % (clamp0(lateness(task)) + 1) for task in system.tasks)

@profile("bnd.py", "bounds_report")
def bounds_report(system, priority_order=None, scheduler=None):
    h = hyperperiod(system)
    notes = {}
    applicable = []

    general = general_product_bound(system)
    notes['general_product'] = 'H=%d x %s = %d' % (h, _factors(system,
                lambda task: task.offset + task.deadline - task.period), general)
    notes['general_product'] += _erratum(system, 'general_product', general)
    applicable.append('general_product')

    synced = synchronize(system)
    sync = sync_product_bound(synced)
    notes['sync_product'] = 'on the synchronized system: H=%d x %s = %d' % (h,
                _factors(synced, lambda task: task.deadline - task.period), sync)
    applicable.append('sync_product')

    if priority_order is None and all(task.priority is not None for task in system.tasks):
        priority_order = tsk.priority_order(system)

    sn = sn_end = sn_hat = sn_hat_end = None

    if priority_order is None:
        notes['sn'] = notes['sn_hat'] = 'needs a total priority order'
    else:
        try:
            sn = sn_bound(system, priority_order)
            sn_end = checked_add(sn, h, 'S_n + H')
        except BoundNotApplicable as e:
            notes['sn'] = e.reason
        else:
            if system.constraints:
                notes['sn'] = 'S_n=%d but holds for independent tasks only' % sn
            else:
                notes['sn'] = 'S_n=%d, interval [0, %d)' % (sn, sn_end)
                applicable.append('sn')

        sn_hat = sn_hat_bound(system, priority_order)
        sn_hat_end = checked_add(sn_hat, h, 'S^_n + H')

        if system.constraints:
            notes['sn_hat'] = 'S^_n=%d but holds for independent tasks only' % sn_hat
        else:
            notes['sn_hat'] = 'S^_n=%d, interval [0, %d]' % (sn_hat, sn_hat_end)
            notes['sn_hat'] += _erratum(system, 'sn_hat', sn_hat_end)
            applicable.append('sn_hat')

    leung = leung_bound(system)
    leung_note = _leung_restriction(system, scheduler)
    if leung_note is None:
        notes['leung'] = 'O^max + 2H = %d, for uniprocessor %s' % (leung, scheduler.label)
        applicable.append('leung')
    else:
        notes['leung'] = 'O^max + 2H = %d, reference only (%s)' % (leung, leung_note)

    report = BoundsReport(h, utilization(system), leung, sn, sn_end, sn_hat, sn_hat_end,
            sync, general, 0, '', tuple(applicable), notes,
            tuple(priority_order) if priority_order is not None else ())

    best_label = min(applicable, key=lambda label: (report.value(label), BOUND_LABELS.index(label)))
    log('BOUND', 'best bound %s = %d' % (best_label, report.value(best_label)))

    return replace(report, best=report.value(best_label), best_label=best_label)
