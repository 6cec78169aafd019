# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
"""
cyclesim bounds    <system.json> [--priority-order 1,2,3] [--scheduler edf] [--json]
cyclesim simulate  <system.json> [--scheduler edf] [--horizon N] [--stop-on-miss]
                                 [--trace out.csv] [--events out.csv]
                                 [--report out.json] [--gantt out.txt] [--svg]
cyclesim enumerate <system.json> [--depth N] [--dot out.dot] [--verify-bound]
cyclesim gantt     <system.json> <trace.csv> [--report in.json] [--svg] [--out f]
cyclesim table     <system.json> <trace.csv> [--out table.json]
"""
from dataclasses import dataclass
from typing import Optional
import argparse
import logging
import os
import sys
import warnings

from rtcycle import *

DEFAULT_SCHEDULER = 'edf'

EXIT_OK = 0
EXIT_BOUND_EXCEEDED = 1
EXIT_MISS = 2
EXIT_HORIZON = 3
EXIT_INPUT = 4

@dataclass(frozen=True)
class RunConfig(object):
    command: str
    system_path: str
    scheduler: Optional[str] = DEFAULT_SCHEDULER
    horizon: Optional[int] = None
    depth: Optional[int] = None
    priority_order: Optional[tuple] = None
    trace_in: Optional[str] = None
    report_in: Optional[str] = None
    trace_out: Optional[str] = None
    events_out: Optional[str] = None
    report_out: Optional[str] = None
    gantt_out: Optional[str] = None
    dot_out: Optional[str] = None
    svg: bool = False
    stop_on_miss: bool = False
    verify_bound: bool = False
    json: bool = False

    def validate(self):
        outputs = [path for path in (self.trace_out, self.events_out, self.report_out,
                    self.gantt_out, self.dot_out) if path is not None]

        normalized = [os.path.abspath(path) for path in outputs]
        if len(set(normalized)) != len(normalized):
            raise ConfigurationError('output paths must be distinct: %s' % ', '.join(outputs))

        inputs = set(os.path.abspath(p) for p in (self.system_path, self.trace_in,
                                                self.report_in) if p is not None)
        if inputs & set(normalized):
            raise ConfigurationError('an output path would overwrite an input')

        for name in ('horizon', 'depth'):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ConfigurationError('--%s must be >= 0' % name)

        return self

# ==============================================================================
# ~ [ argument parsing ]
# ==============================================================================

def _id_list(text):
    try:
        return tuple(int(part) for part in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma-separated task ids, got "%s"' % text)

class _Parser(argparse.ArgumentParser):
    '''Usage errors are input errors, not exit status 2.'''

    def error(self, message):
        raise ConfigurationError('%s: %s' % (self.prog, message))

def make_parser():
    parser = _Parser(prog='cyclesim', description='Simulation intervals '
                'and cycles of deterministic memoryless multiprocessor schedules.')

    parser.add_argument('-v', '--verbose', action='store_true',
                        help='log every channel to stderr')
    parser.add_argument('--profile', action='store_true',
                        help='print call counts and timings of the hot paths')

    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser('bounds', help='evaluate every simulation interval bound')
    p.add_argument('system_path', metavar='system.json')
    p.add_argument('--priority-order', dest='priority_order', type=_id_list)
    p.add_argument('--scheduler', help='the scheduler the bounds are for; edf and fpp:* '
                    'admit O^max + 2H on one processor')
    p.add_argument('--json', action='store_true', help='emit the JSON report only')

    p = commands.add_parser('simulate', help='run a scheduler until its state repeats')
    p.add_argument('system_path', metavar='system.json')
    p.add_argument('--scheduler', default=DEFAULT_SCHEDULER,
                    help='edf | lrptf | fpp:rm | fpp:dm | fpp:explicit | table:<file>')
    p.add_argument('--horizon', type=int)
    p.add_argument('--stop-on-miss', dest='stop_on_miss', action='store_true')
    p.add_argument('--trace', dest='trace_out')
    p.add_argument('--events', dest='events_out')
    p.add_argument('--report', dest='report_out')
    p.add_argument('--gantt', dest='gantt_out')
    p.add_argument('--svg', action='store_true', help='write the Gantt chart as SVG')

    p = commands.add_parser('enumerate', help='build the feasible schedule graph')
    p.add_argument('system_path', metavar='system.json')
    p.add_argument('--depth', type=int)
    p.add_argument('--dot', dest='dot_out')
    p.add_argument('--verify-bound', dest='verify_bound', action='store_true',
                    help='check the general product bound against every schedule')

    p = commands.add_parser('gantt', help='render a saved trace')
    p.add_argument('system_path', metavar='system.json')
    p.add_argument('trace_in', metavar='trace.csv')
    p.add_argument('--report', dest='report_in')
    p.add_argument('--svg', action='store_true')
    p.add_argument('--out', dest='gantt_out')

    p = commands.add_parser('table', help='turn a saved trace into a scheduler table')
    p.add_argument('system_path', metavar='system.json')
    p.add_argument('trace_in', metavar='trace.csv')
    p.add_argument('--out', dest='report_out')

    return parser

def parse_config(argv):
    args = make_parser().parse_args(argv)
    fields = dict((name, value) for name, value in vars(args).items()
                    if name in RunConfig.__dataclass_fields__)

    return args, RunConfig(**fields).validate()

# ==============================================================================
# ~ [ commands ]
# ==============================================================================

def _read(path):
    with open(path) as f:
        return f.read()

def _write(path, text, out):
    if path is None:
        out.write(text)
    else:
        with open(path, 'w') as f:
            f.write(text)

        log('CLI', 'wrote %s' % path)

def cmd_bounds(config, system, out):
    spec = scheduler_from_string(config.scheduler) if config.scheduler else None
    report = bounds_report(system, config.priority_order, spec)

    if not config.json:
        out.write(render_bounds(report))

    out.write(emit_report(report))
    return EXIT_OK

def cmd_simulate(config, system, out):
    spec = scheduler_from_string(config.scheduler)
    trace, report = run(system, spec, config.horizon, config.stop_on_miss)

    if config.trace_out: _write(config.trace_out, write_trace_csv(trace), out)
    if config.events_out: _write(config.events_out, write_events_csv(trace), out)

    if config.gantt_out:
        chart = (render_gantt_svg if config.svg else render_gantt)(trace, report, system)
        _write(config.gantt_out, chart, out)

    _write(config.report_out, emit_report(report), out)

    if report.verdict == 'miss_found': return EXIT_MISS
    if report.verdict == 'horizon_exhausted': return EXIT_HORIZON

    return EXIT_OK

def cmd_enumerate(config, system, out):
    bound = general_product_bound(system)
    need = checked_add(bound, hyperperiod(system), 'default depth')
    depth = need if config.depth is None else config.depth

    if config.verify_bound and depth < need:
        raise ConfigurationError('--depth %d is below bound + H = %d, too shallow to '
                                    'verify the bound' % (depth, need))

    sg = build_graph(system, depth)
    extremes = extremal_cycles(sg)

    out.write('vertices %d, edges %d, pruned %d, depth %d\n' % (sg.graph.number_of_nodes(),
                            sg.graph.number_of_edges(), len(sg.pruned), depth))
    out.write('max cycle %s, max transient %s\n' % (extremes.max_cycle_len,
                                                    extremes.max_transient_len))
    if not extremes.complete:
        out.write('schedules past depth %d were not explored\n' % depth)

    if config.dot_out:
        _write(config.dot_out, export_graph(sg), out)

    if config.verify_bound:
        check = verify_bound(sg, bound)

        if not check:
            lasso = check.counterexample
            out.write('bound %d exceeded: transient %d, period %d, decisions %s\n'
                        % (bound, lasso.transient, lasso.period, lasso.decisions(sg)))
            return EXIT_BOUND_EXCEEDED

        out.write('bound %d holds\n' % bound)

    return EXIT_OK

def cmd_gantt(config, system, out):
    saved = read_trace_csv(_read(config.trace_in))
    trace = replay(system, saved.assignment)
    report = parse_report(_read(config.report_in)) if config.report_in else None

    chart = (render_gantt_svg if config.svg else render_gantt)(trace, report, system)
    _write(config.gantt_out, chart, out)

    return EXIT_OK

def cmd_table(config, system, out):
    saved = read_trace_csv(_read(config.trace_in))
    spec = make_adversary_table(system, saved)

    _write(config.report_out, emit_table(spec), out)
    return EXIT_OK

COMMANDS = {
    'bounds': cmd_bounds,
    'simulate': cmd_simulate,
    'enumerate': cmd_enumerate,
    'gantt': cmd_gantt,
    'table': cmd_table,
}

def main(argv=None, out=None):
    out = out or sys.stdout
    args, config = None, None

    try:
        args, config = parse_config(argv)
    except ConfigurationError as e:
        sys.stderr.write('cyclesim: %s\n' % e)
        return EXIT_INPUT

    if args.verbose:
        log.enable(logging.DEBUG)

    warnings.simplefilter('default')

    try:
        system = parse_system(_read(config.system_path))
    except (OSError, CycleSimError) as e:
        sys.stderr.write('cyclesim: %s: %s\n' % (config.system_path, e))
        return EXIT_INPUT

    log('CLI', '%s on %s' % (config.command, config.system_path), logging.INFO)

    try:
        status = COMMANDS[config.command](config, system, out)
    except (OSError, CycleSimError) as e:
        sys.stderr.write('cyclesim: %s\n' % e)
        return EXIT_INPUT
    finally:
        if args.profile:
            sys.stderr.write(profile_report() + '\n')

    return status

def main_entry():
    sys.exit(main(sys.argv[1:]))
