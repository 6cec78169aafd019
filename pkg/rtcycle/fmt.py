# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
"""
Reading and writing: task systems, scheduler tables and reports as JSON,
traces as CSV, Gantt charts as text or SVG.
"""
from fractions import Fraction
import csv
import io
import json
import os
import warnings

from .utl import *
from .tsk import *
from .sim import *
from .pol import *
from .bnd import BoundsReport
from .cyc import CycleReport

__all__ = [
    'REPORT_SCHEMA', 'parse_system', 'emit_system', 'emit_report',
    'parse_report', 'write_trace_csv', 'read_trace_csv', 'write_events_csv',
    'read_events_csv', 'emit_table', 'parse_table', 'scheduler_from_string',
    'render_gantt', 'render_gantt_svg', 'render_bounds',
]

REPORT_SCHEMA = 1

TASK_FIELDS = ('id', 'offset', 'wcet', 'period', 'deadline')
CONSTRAINT_FIELDS = {
    'precedes': ('producer', 'consumer'),
    'excludes': ('a', 'b'),
    'suspends': ('task', 'after', 'delay'),
    'non_preemptive': ('task',),
}

# ==============================================================================
# ~ [ task systems ]
# ==============================================================================

def _int(obj, key, where):
    if key not in obj:
        raise SchemaError('missing', '%s.%s' % (where, key) if where else key)

    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError('expected an integer, got %r' % (value,),
                            '%s.%s' % (where, key) if where else key)
    return value

def _keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise SchemaError('expected an object', where)

    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise SchemaError('unknown key "%s"' % unknown[0], '%s.%s' % (where, unknown[0])
                                                                    if where else unknown[0])

def _task(obj, where):
    _keys(obj, TASK_FIELDS + ('priority',), where)
    values = [_int(obj, key, where) for key in TASK_FIELDS]
    priority = _int(obj, 'priority', where) if 'priority' in obj else None

    return Task(*values, priority=priority)

def _constraint(obj, where):
    if not isinstance(obj, dict) or 'kind' not in obj:
        raise SchemaError('missing', where + '.kind')

    kind = obj['kind']
    if kind not in CONSTRAINT_FIELDS:
        raise SchemaError('unknown constraint kind %r' % (kind,), where + '.kind')

    _keys(obj, ('kind',) + CONSTRAINT_FIELDS[kind], where)
    args = [_int(obj, key, where) for key in CONSTRAINT_FIELDS[kind]]

    if kind == 'suspends':
        return StructuralConstraint.suspends(*args)

    return getattr(StructuralConstraint, kind)(*args)

def parse_system(text):
    if isinstance(text, bytes):
        text = text.decode('utf-8')

    try:
        doc = json.loads(text)
    except ValueError as e:
        raise SchemaError('malformed JSON: %s' % getattr(e, 'msg', e), line=getattr(e, 'lineno', None))

    _keys(doc, ('processors', 'tasks', 'constraints'), '')
    processors = _int(doc, 'processors', '')

    if not isinstance(doc.get('tasks'), list):
        raise SchemaError('expected a list of tasks', 'tasks')

    tasks = [_task(obj, 'tasks[%d]' % i) for i, obj in enumerate(doc['tasks'])]
    constraints = [_constraint(obj, 'constraints[%d]' % i)
                    for i, obj in enumerate(doc.get('constraints', []))]

    system = TaskSystem(tasks, processors, constraints)

    for d in validate(system):
        if d.level == 'error':
            raise SchemaError(d.message, d.field)

        warnings.warn(str(d))

    log('IO', 'parsed %d tasks on %d processors' % (system.n, system.processors))
    return system

def emit_system(system):
    tasks = []
    for task in system.tasks:
        obj = dict((key, getattr(task, key)) for key in TASK_FIELDS)
        if task.priority is not None: obj['priority'] = task.priority
        tasks.append(obj)

    doc = {'processors': system.processors, 'tasks': tasks,
           'constraints': [c.to_dict() for c in system.constraints]}

    return json.dumps(doc, indent=2, sort_keys=True) + '\n'

# ==============================================================================
# ~ [ reports ]
# ==============================================================================

def _report_dict(report):
    if isinstance(report, CycleReport):
        miss = report.first_miss

        return {
            'type': 'cycle', 'verdict': report.verdict, 'feasible': report.feasible,
            'transient_len': report.transient_len, 'period_len': report.period_len,
            'first_miss': None if miss is None else {'task': miss.task, 'job': miss.job,
                                        'ordinal': miss.ordinal, 'tick': miss.tick},
            'bound_used': report.bound_used, 'scheduler': report.scheduler,
            'hyperperiod': report.hyperperiod,
            'prestate_cycle': None if report.prestate_cycle is None else list(report.prestate_cycle),
        }

    if isinstance(report, BoundsReport):
        return {
            'type': 'bounds', 'hyperperiod': report.hyperperiod,
            'utilization': str(report.utilization), 'leung': report.leung,
            'sn': report.sn, 'sn_interval_end': report.sn_interval_end,
            'sn_hat': report.sn_hat, 'sn_hat_interval_end': report.sn_hat_interval_end,
            'sync_product_end': report.sync_product_end,
            'general_product_end': report.general_product_end,
            'best': report.best, 'best_label': report.best_label,
            'applicable': list(report.applicable), 'notes': dict(report.notes),
            'priority_order': list(report.priority_order),
        }

    raise TypeError('cannot emit %r' % type(report).__name__)

def emit_report(report):
    doc = _report_dict(report)
    doc['schema'] = REPORT_SCHEMA

    return json.dumps(doc, indent=2, sort_keys=True) + '\n'

def parse_report(text):
    try:
        doc = json.loads(text)
    except ValueError as e:
        raise SchemaError('malformed JSON: %s' % getattr(e, 'msg', e), line=getattr(e, 'lineno', None))

    if not isinstance(doc, dict):
        raise SchemaError('a report is a JSON object')

    try:
        return _report(doc)
    except SchemaError:
        raise
    except KeyError as e:
        raise SchemaError('missing key', e.args[0])
    except (TypeError, ValueError) as e:
        raise SchemaError('malformed %s report: %s' % (doc.get('type'), e))

def _report(doc):
    if doc.get('schema') != REPORT_SCHEMA:
        raise SchemaError('unsupported report schema %r' % doc.get('schema'), 'schema')

    if doc['type'] == 'cycle':
        miss = doc['first_miss']
        pre = doc['prestate_cycle']

        return CycleReport(doc['verdict'], doc['feasible'], doc['transient_len'],
                doc['period_len'], None if miss is None else MissRecord(miss['task'],
                miss['job'], miss['tick']), doc['bound_used'], doc['scheduler'],
                doc['hyperperiod'], None if pre is None else tuple(pre))

    if doc['type'] == 'bounds':
        return BoundsReport(doc['hyperperiod'], Fraction(doc['utilization']),
                doc['leung'], doc['sn'], doc['sn_interval_end'], doc['sn_hat'],
                doc['sn_hat_interval_end'], doc['sync_product_end'],
                doc['general_product_end'], doc['best'], doc['best_label'],
                tuple(doc['applicable']), dict(doc['notes']), tuple(doc['priority_order']))

    raise SchemaError('unknown report type %r' % doc['type'], 'type')

def render_bounds(report):
    lines = ['H = %d, U = %s' % (report.hyperperiod, report.utilization)]

    for label in ('general_product', 'sync_product', 'sn', 'sn_hat', 'leung'):
        value = report.value(label)
        mark = '*' if label == report.best_label else ' '
        used = 'yes' if label in report.applicable else 'no'

        lines.append('%s %-16s %10s  applicable=%-3s  %s' % (mark, label,
                '-' if value is None else value, used, report.notes.get(label, '')))

    lines.append('best: %d (%s)' % (report.best, report.best_label))
    return '\n'.join(lines) + '\n'

# ==============================================================================
# ~ [ traces ]
# ==============================================================================

def write_trace_csv(trace):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(['tick'] + ['cpu%d' % k for k in range(trace.processors)])

    for t, task_ids in enumerate(trace.assignment):
        cells = [str(task_id) for task_id in task_ids]
        writer.writerow([t] + cells + ['-'] * (trace.processors - len(cells)))

    return out.getvalue()

def read_trace_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][:1] != ['tick']:
        raise SchemaError('trace CSV must start with a "tick,cpu0,..." header', line=1)

    trace = ScheduleTrace(len(rows[0]) - 1)

    for line, row in enumerate(rows[1:], 2):
        if len(row) != len(rows[0]) or row[0] != str(line - 2):
            raise SchemaError('expected tick %d with %d processors' % (line - 2,
                                            trace.processors), line=line)
        try:
            trace.assignment.append(tuple(sorted(int(cell) for cell in row[1:] if cell != '-')))
        except ValueError:
            raise SchemaError('cells are task ids or "-"', line=line)

    return trace

def write_events_csv(trace):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(['kind', 'task', 'job', 'tick'])

    for event in trace.events:
        writer.writerow([event.kind, event.task, event.job, event.tick])

    return out.getvalue()

def read_events_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    try:
        return [Event(row['kind'], int(row['task']), int(row['job']), int(row['tick'])) for row in rows]
    except (KeyError, ValueError) as e:
        raise SchemaError('bad events CSV: %s' % e)

# ==============================================================================
# ~ [ scheduler tables ]
# ==============================================================================

def emit_table(spec):
    rows = [{'state': json.loads(key.decode('ascii')), 'decision': list(task_ids)}
            for key, task_ids in sorted(spec.table.items())]

    return json.dumps(rows, indent=1, sort_keys=True) + '\n'

def parse_table(text):
    try:
        rows = json.loads(text)
    except ValueError as e:
        raise SchemaError('malformed JSON: %s' % getattr(e, 'msg', e), line=getattr(e, 'lineno', None))

    if not isinstance(rows, list):
        raise SchemaError('a scheduler table is a JSON array')

    table = {}
    for i, row in enumerate(rows):
        _keys(row, ('state', 'decision'), '[%d]' % i)
        try:
            key = SystemState.from_dict(row['state']).key()
        except (KeyError, TypeError):
            raise SchemaError('expected remaining/clocks lists', '[%d].state' % i)

        table[key] = tuple(sorted(row['decision']))

    return table

def scheduler_from_string(text):
    """edf | lrptf | fpp:rm | fpp:dm | fpp:explicit | table:<file>"""
    if text == 'edf': return edf()
    if text == 'lrptf': return lrptf()

    rules = {'fpp:rm': 'rate_monotonic', 'fpp:dm': 'deadline_monotonic',
             'fpp:explicit': 'explicit'}

    if text in rules:
        return fixed_priority(rules[text])

    if text.startswith('table:'):
        path = text[len('table:'):]
        if not os.path.isfile(path):
            raise ConfigurationError('no scheduler table at "%s"' % path)

        with open(path) as f:
            return table_driven(parse_table(f.read()))

    raise ConfigurationError('unknown scheduler "%s"' % text)

# ==============================================================================
# ~ [ gantt charts ]
# ==============================================================================

GLYPHS = '0123456789abcdefghijklmnopqrstuvwxyz'
LABEL = 10

def _glyph(task_id):
    return GLYPHS[task_id] if 0 <= task_id < len(GLYPHS) else '*'

def _deadline_ticks(system, horizon):
    ticks = {}

    for task in system.tasks:
        j = 0
        while task.absolute_deadline(j) < horizon:
            ticks.setdefault(task.id, set()).add(task.absolute_deadline(j))
            j += 1

    return ticks

def render_gantt(trace, report=None, system=None):
    horizon = trace.horizon
    lines = ['# processors=%d horizon=%d' % (trace.processors, horizon)]
    if horizon == 0:
        return lines[0] + '\n'

    lines.append(' ' * LABEL + ''.join(str(t // 10 % 10) if t % 10 == 0 else ' '
                                                for t in range(horizon)))
    lines.append('tick'.ljust(LABEL) + ''.join(str(t % 10) for t in range(horizon)))

    for k in range(trace.processors):
        lines.append(('cpu%d' % k).ljust(LABEL) + ''.join(_glyph(ids[k]) if k < len(ids)
                                    else '-' for ids in trace.assignment))

    releases, misses = {}, {}
    for event in trace.events:
        if event.kind == 'release': releases.setdefault(event.task, set()).add(event.tick)
        if event.kind == 'miss': misses.setdefault(event.task, set()).add(event.tick)

    deadlines = _deadline_ticks(system, horizon) if system is not None else {}

    if system is not None:
        task_ids = [task.id for task in system.tasks]
    else:
        task_ids = sorted(set(i for ids in trace.assignment for i in ids) | set(releases) | set(misses))

    for task_id in task_ids:
        row = []
        for t in range(horizon):
            released = t in releases.get(task_id, ())
            due = t in deadlines.get(task_id, ())

            if t in misses.get(task_id, ()): row.append('!')
            elif task_id in trace.assignment[t]: row.append('#')
            elif released and due: row.append('|')
            elif released: row.append('^')
            elif due: row.append('v')
            else: row.append('.')

        lines.append(('task%d' % task_id).ljust(LABEL) + ''.join(row))

    if report is not None and report.transient_len is not None:
        lines.append('phase'.ljust(LABEL) + ''.join('t' if t < report.transient_len else 's'
                                                            for t in range(horizon)))

    return '\n'.join(lines) + '\n'

def render_gantt_svg(trace, report=None, system=None):
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt

    # fixed ids and no timestamp, so the same trace gives the same bytes
    matplotlib.rcParams['svg.hashsalt'] = 'rtcycle'
    colors = plt.get_cmap('tab10').colors

    m = trace.processors
    fig, ax = plt.subplots(figsize=(max(6.0, 0.4 * trace.horizon), 1.0 + 0.6 * m))
    ax.set_xlabel('tick')
    ax.set_yticks(range(m))
    ax.set_yticklabels(['cpu%d' % k for k in range(m)])
    ax.set_xlim(0, max(trace.horizon, 1))
    ax.set_ylim(-0.5, m - 0.5)
    ax.invert_yaxis()

    for t, task_ids in enumerate(trace.assignment):
        for k, task_id in enumerate(task_ids):
            ax.broken_barh([(t, 1)], (k - 0.4, 0.8), facecolors=colors[task_id % len(colors)])
            ax.text(t + 0.5, k, str(task_id), ha='center', va='center', color='white')

    for event in trace.events_of('miss'):
        if event.tick <= trace.horizon:
            ax.axvline(event.tick, color='red', linewidth=1.5)
            ax.text(event.tick, -0.45, '!%d' % event.task, color='red', ha='center', va='bottom')

    if report is not None and report.transient_len is not None:
        start = report.transient_len
        ax.axvspan(start, min(start + report.period_len, trace.horizon), color='grey', alpha=0.15)
        ax.axvline(start, color='black', linestyle='--', linewidth=1)

    out = io.StringIO()
    fig.savefig(out, format='svg', metadata={'Date': None})
    plt.close(fig)

    return out.getvalue()
