# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
"""
Shared plumbing: channel logging, the profiling decorator, error types and
checked tick arithmetic.
"""
import functools
import logging
import math
import sys
import time

__all__ = [
    'TICK_MAX', 'log', 'profile', 'profile_report', 'PROFILE',
    'CycleSimError', 'ArithmeticOverflow', 'ConfigurationError', 'SchemaError',
    'InvalidDecision', 'MemorylessnessViolation', 'InvariantViolation',
    'BoundNotApplicable', 'StateSpaceTooLarge',
    'checked_add', 'checked_mul', 'checked_lcm', 'ceil_div', 'clamp0',
]

# ticks are 64-bit signed on every platform we care about
TICK_MAX = 2 ** 63 - 1

# ==============================================================================
# ~ [ logging ]
# ==============================================================================

class _ChannelLog(object):
    """Callable logger: log("SIM", "t=%d" % t) goes to rtcycle.sim at DEBUG."""

    def __init__(self, root='rtcycle'):
        self.root = root
        self.handler = None

    def __call__(self, channel, msg, level=logging.DEBUG):
        logger = logging.getLogger('%s.%s' % (self.root, channel.lower()))

        if logger.isEnabledFor(level):
            logger.log(level, msg)

    def enable(self, level=logging.DEBUG, stream=None):
        logger = logging.getLogger(self.root)
        logger.setLevel(level)

        # only ever attach one handler, even if the cli runs twice in-process
        if self.handler is None:
            self.handler = logging.StreamHandler(stream or sys.stderr)
            self.handler.setFormatter(logging.Formatter(
                                    '%(name)s: %(levelname)s: %(message)s'))
            logger.addHandler(self.handler)

    def disable(self):
        logger = logging.getLogger(self.root)

        if self.handler is not None:
            logger.removeHandler(self.handler)
            self.handler = None

        logger.setLevel(logging.NOTSET)

log = _ChannelLog()

# ==============================================================================
# ~ [ profiling ]
# ==============================================================================

PROFILE = {} # (filename, funcname) -> [calls, seconds]

def profile(filename, funcname):
    def decorator(func):
        key = (filename, funcname)

        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                entry = PROFILE.setdefault(key, [0, 0.0])
                entry[0] += 1
                entry[1] += time.perf_counter() - start

        return wrapper
    return decorator

def profile_report():
    lines = ['%-10s %-28s %8s %10s' % ('file', 'function', 'calls', 'seconds')]

    for (filename, funcname), (calls, seconds) in sorted(PROFILE.items(),
                                            key=lambda kv: -kv[1][1]):
        lines.append('%-10s %-28s %8d %10.4f' % (filename, funcname, calls, seconds))

    return '\n'.join(lines)

# ==============================================================================
# ~ [ errors ]
# ==============================================================================

class CycleSimError(Exception):
    pass

class ArithmeticOverflow(CycleSimError, OverflowError):
    def __init__(self, what, value=None):
        self.what = what
        self.value = value

        CycleSimError.__init__(self, 'tick overflow in %s (exceeds %d)' % (what, TICK_MAX))

class ConfigurationError(CycleSimError, ValueError):
    pass

class SchemaError(ConfigurationError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line

        where = []
        if line is not None: where.append('line %d' % line)
        if field is not None: where.append('field "%s"' % field)

        if where: message = '%s: %s' % (', '.join(where), message)
        ConfigurationError.__init__(self, message)

class InvalidDecision(CycleSimError):
    def __init__(self, rule, message, t=None):
        self.rule = rule
        self.t = t

        if t is not None: message = 't=%d: %s' % (t, message)
        CycleSimError.__init__(self, '%s (%s)' % (message, rule))

class MemorylessnessViolation(CycleSimError):
    def __init__(self, first_tick, second_tick, first, second):
        self.ticks = (first_tick, second_tick)
        self.decisions = (first, second)

        CycleSimError.__init__(self, 'state at t=%d and t=%d decided %r then %r'
                                % (first_tick, second_tick, first, second))

class InvariantViolation(CycleSimError, AssertionError):
    pass

class BoundNotApplicable(CycleSimError):
    def __init__(self, bound, reason):
        self.bound = bound
        self.reason = reason

        CycleSimError.__init__(self, '%s not applicable: %s' % (bound, reason))

class StateSpaceTooLarge(CycleSimError):
    def __init__(self, cap):
        self.cap = cap

        CycleSimError.__init__(self, 'schedule graph exceeds %d vertices; try '
                'fewer tasks, smaller periods or a lower depth' % cap)

# ==============================================================================
# ~ [ checked arithmetic ]
# ==============================================================================

def _check(value, what):
    if value > TICK_MAX or value < -TICK_MAX - 1:
        raise ArithmeticOverflow(what, value)
    return value

def checked_add(a, b, what='add'):
    return _check(a + b, what)

def checked_mul(a, b, what='mul'):
    return _check(a * b, what)

def checked_lcm(a, b, what='lcm'):
    return _check(a * b // math.gcd(a, b), what)

def ceil_div(a, b):
    """Mathematical ceiling of a/b for b > 0 (ceil_div(-1, 8) == 0)."""
    return -(-a // b)

def clamp0(a):
    return a if a > 0 else 0
