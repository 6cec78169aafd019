import io
import json
import os
import runpy
import sys

import pytest

from rtcycle import *
from cyclesim import cli


@pytest.fixture
def sys1_path(tmp_path, sys1):
    path = tmp_path / 'sys1.json'
    path.write_text(emit_system(sys1))
    return str(path)


@pytest.fixture
def sys2_path(tmp_path, sys2):
    path = tmp_path / 'sys2.json'
    path.write_text(emit_system(sys2))
    return str(path)


def main(*argv):
    out = io.StringIO()
    status = cli.main(list(argv), out=out)
    return status, out.getvalue()


class TestConfig:

    def test_defaults(self, sys1_path):
        _, config = cli.parse_config(['simulate', sys1_path])

        assert config.scheduler == cli.DEFAULT_SCHEDULER
        assert config.horizon is None and not config.stop_on_miss

    def test_priority_order(self, sys1_path):
        _, config = cli.parse_config(['bounds', sys1_path, '--priority-order', '3,1,2'])
        assert config.priority_order == (3, 1, 2)

    def test_outputs_must_be_distinct(self, sys1_path, tmp_path):
        out = str(tmp_path / 'out.txt')

        with pytest.raises(ConfigurationError):
            cli.parse_config(['simulate', sys1_path, '--trace', out, '--report', out])

        with pytest.raises(ConfigurationError):
            cli.parse_config(['simulate', sys1_path, '--report', sys1_path])

    def test_negative_horizon(self, sys1_path):
        with pytest.raises(ConfigurationError):
            cli.parse_config(['simulate', sys1_path, '--horizon', '-1'])


class TestExitStatus:

    def test_cycle_found(self, sys1_path):
        status, out = main('simulate', sys1_path)
        report = parse_report(out)

        assert status == cli.EXIT_OK
        assert (report.transient_len, report.period_len) == (8, 4)

    def test_miss(self, sys1_path):
        status, out = main('simulate', sys1_path, '--scheduler', 'fpp:dm')

        assert status == cli.EXIT_MISS
        assert parse_report(out).first_miss == MissRecord(3, 1, 11)

    def test_horizon_exhausted(self, sys1_path):
        assert main('simulate', sys1_path, '--horizon', '5')[0] == cli.EXIT_HORIZON

    def test_usage_error(self, sys1_path):
        assert main('simulate', sys1_path, '--no-such-flag')[0] == cli.EXIT_INPUT
        assert main()[0] == cli.EXIT_INPUT

    def test_unknown_scheduler(self, sys1_path):
        assert main('simulate', sys1_path, '--scheduler', 'llf')[0] == cli.EXIT_INPUT

    def test_bad_system(self, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text('{"processors": 1, "tasks": [{"id": 1}]}')

        assert main('bounds', str(path))[0] == cli.EXIT_INPUT
        assert main('bounds', str(tmp_path / 'missing.json'))[0] == cli.EXIT_INPUT

    def test_empty_system(self, tmp_path):
        path = tmp_path / 'empty.json'
        path.write_text('{"processors": 1, "tasks": []}')

        assert main('bounds', str(path))[0] == cli.EXIT_INPUT
        assert main('simulate', str(path))[0] == cli.EXIT_INPUT

    def test_shallow_verification_is_refused(self, sys2_path):
        status, out = main('enumerate', sys2_path, '--depth', '2', '--verify-bound')

        assert status == cli.EXIT_INPUT
        assert 'holds' not in out

    def test_shallow_enumeration_says_so(self, sys2_path):
        status, out = main('enumerate', sys2_path, '--depth', '2')

        assert status == cli.EXIT_OK
        assert 'schedules past depth 2 were not explored' in out

    def test_malformed_report(self, sys1_path, tmp_path):
        trace = str(tmp_path / 'trace.csv')
        report = tmp_path / 'bad.json'
        main('simulate', sys1_path, '--trace', trace)

        report.write_text('{"schema": 1, "type": ')
        assert main('gantt', sys1_path, trace, '--report', str(report))[0] == cli.EXIT_INPUT

        report.write_text('{"schema": 1, "type": "cycle"}')
        assert main('gantt', sys1_path, trace, '--report', str(report))[0] == cli.EXIT_INPUT

    def test_main_script_runs_outside_the_package(self, monkeypatch):
        script = os.path.join(os.path.dirname(cli.__file__), '__main__.py')
        monkeypatch.setattr(sys, 'argv', [script])

        with pytest.raises(SystemExit) as info:
            runpy.run_path(script, run_name='__main__')
        assert info.value.code == cli.EXIT_INPUT


class TestCommands:

    def test_bounds(self, sys1_path):
        status, out = main('bounds', sys1_path, '--json')
        doc = json.loads(out)

        assert status == cli.EXIT_OK
        assert (doc['type'], doc['best'], doc['best_label']) == ('bounds', 16, 'general_product')

    def test_bounds_for_a_scheduler(self, tmp_path, offset_pair):
        path = tmp_path / 'offset_pair.json'
        path.write_text(emit_system(offset_pair))

        _, out = main('bounds', str(path), '--json')
        assert 'leung' not in json.loads(out)['applicable']

        _, out = main('bounds', str(path), '--json', '--scheduler', 'fpp:dm')
        assert 'leung' in json.loads(out)['applicable']

        assert main('bounds', str(path), '--scheduler', 'llf')[0] == cli.EXIT_INPUT

    def test_bounds_table(self, sys1_path):
        _, out = main('bounds', sys1_path, '--priority-order', '1,2,3')
        assert 'best: 12 (sn_hat)' in out

    def test_simulate_outputs(self, sys1_path, tmp_path):
        paths = dict((name, str(tmp_path / name)) for name in
                        ('trace.csv', 'events.csv', 'report.json', 'gantt.txt'))

        status, out = main('simulate', sys1_path, '--trace', paths['trace.csv'],
                            '--events', paths['events.csv'], '--report', paths['report.json'],
                            '--gantt', paths['gantt.txt'])

        assert status == cli.EXIT_OK
        assert out == ''

        with open(paths['trace.csv']) as f:
            assert read_trace_csv(f.read()).horizon == 12
        with open(paths['gantt.txt']) as f:
            assert f.readline() == '# processors=2 horizon=12\n'
        with open(paths['report.json']) as f:
            assert parse_report(f.read()).verdict == 'cycle_found'

    def test_gantt_replays_a_saved_trace(self, sys1_path, tmp_path):
        trace = str(tmp_path / 'trace.csv')
        chart = str(tmp_path / 'chart.txt')
        main('simulate', sys1_path, '--trace', trace)

        assert main('gantt', sys1_path, trace, '--out', chart)[0] == cli.EXIT_OK
        with open(chart) as f:
            assert 'task3     ^#.#^#.#^###' in f.read()

    def test_table_round_trip(self, sys1_path, tmp_path, adversary_sys1):
        trace = tmp_path / 'adversary.csv'
        trace.write_text(write_trace_csv(adversary_sys1))
        table = str(tmp_path / 'table.json')

        assert main('table', sys1_path, str(trace), '--out', table)[0] == cli.EXIT_OK

        status, out = main('simulate', sys1_path, '--scheduler', 'table:' + table)
        report = parse_report(out)

        assert status == cli.EXIT_OK
        assert (report.transient_len, report.period_len, report.scheduler) == (10, 4, 'table')

    def test_enumerate(self, sys2_path, tmp_path):
        dot = str(tmp_path / 'graph.dot')
        status, out = main('enumerate', sys2_path, '--verify-bound', '--dot', dot)

        assert status == cli.EXIT_OK
        assert 'max cycle 8, max transient 4' in out
        assert 'bound 8 holds' in out

        with open(dot) as f:
            assert f.readline() == 'digraph schedule {\n'
