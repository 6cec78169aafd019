# ------------------------------------------------------------------------------
# Copyright (c) 2026 the rtcycle developers, all rights reserved.
# Distributed under the BSD license v2 (opensource.org/licenses/BSD-3-Clause)
# ------------------------------------------------------------------------------
"""
Exhaustive schedule graphs for tiny systems.

Vertices are states (merged by canonical key), edges are every valid decision
including deliberate idling. States that already missed a deadline, or that
fail a necessary feasibility condition, are pruned and never expanded; an
expanded vertex whose successors are all pruned is pruned in turn.

A deterministic memoryless scheduler run from the initial state is a lasso
in this graph: a simple path closed by one edge back onto itself. Searching
lassos over surviving vertices gives the longest achievable transient and
period, and a counterexample whenever a bound is exceeded.
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple
import collections
import itertools

import networkx as nx

from .utl import *
from .tsk import *
from .sim import *

__all__ = [
    'DEFAULT_VERTEX_CAP', 'ScheduleGraph', 'Lasso', 'Extremes', 'BoundCheck',
    'build_graph', 'infeasibility', 'valid_decisions', 'lassos',
    'extremal_cycles', 'boundary_graph', 'verify_bound', 'trace_path',
    'export_graph',
]

DEFAULT_VERTEX_CAP = 10 ** 6

@dataclass
class ScheduleGraph(object):
    system: TaskSystem
    graph: nx.DiGraph
    root: Optional[bytes]
    depth: int
    hyperperiod: int
    pruned: dict = field(default_factory=dict) # key -> reason

    def survives(self, key):
        return key not in self.pruned

    def expanded(self, key):
        return self.graph.nodes[key]['expanded']

    def state(self, key):
        return self.graph.nodes[key]['state']

    def successors(self, key):
        return sorted(succ for succ in self.graph.successors(key) if succ not in self.pruned)

    def find(self, state):
        key = state.key()
        return key if key in self.graph else None

    @property
    def complete(self):
        """Every surviving vertex is expanded, so no schedule is cut off at depth."""
        return all(self.expanded(key) for key in self.graph if key not in self.pruned)

# ==============================================================================
# ~ [ construction ]
# ==============================================================================

def _deadlines(system, state):
    """(relative deadline, remaining work, task id) of pending and future jobs."""
    horizon = max_offset(system) + max(task.deadline + task.period for task in system.tasks)
    jobs = []

    for task in system.tasks:
        r, c = state.remaining[task.id - 1], state.clocks[task.id - 1]

        if c >= 0:
            q = ceil_div(r, task.wcet) if r > 0 else 0
            for k in range(q):
                work = r - (q - 1) * task.wcet if k == 0 else task.wcet
                jobs.append((relative_deadline(system, state, task.id, k), work, task.id))

            release = task.period - c
        else:
            release = -c

        while release + task.deadline <= horizon:
            jobs.append((release + task.deadline, task.wcet, task.id))
            release += task.period

    return sorted(jobs)

def infeasibility(system, state):
    """Why no feasible schedule can continue from `state`, or None."""
    jobs = _deadlines(system, state)
    if jobs and jobs[0][0] <= 0:
        return 'deadline missed'

    per_task = collections.Counter()
    total = 0

    for i, (deadline, work, task_id) in enumerate(jobs):
        per_task[task_id] += work
        total += work

        # a task runs on one processor at a time
        if per_task[task_id] > deadline:
            return 'task %d cannot finish its work due in %d ticks' % (task_id, deadline)

        last = i + 1 == len(jobs) or jobs[i + 1][0] != deadline
        if last and total > system.processors * deadline:
            return 'demand %d exceeds capacity %d within %d ticks' % (total,
                                    system.processors * deadline, deadline)

    return None

def valid_decisions(system, state, t=0):
    eligible = eligible_jobs(system, state, t)
    decisions = []

    for size in range(min(len(eligible), system.processors) + 1):
        for decision in itertools.combinations(eligible, size):
            try:
                check_decision(system, state, decision, t, eligible)
            except InvalidDecision:
                continue
            decisions.append(list(decision))

    return decisions

@profile("enm.py", "build_graph")
def build_graph(system, depth, cap=DEFAULT_VERTEX_CAP):
    h = hyperperiod(system)
    graph = nx.DiGraph()
    sg = ScheduleGraph(system, graph, None, depth, h)

    root = initial_state(system)
    sg.root = root.key()
    graph.add_node(sg.root, state=root, depth=0, phase=0, expanded=False)

    frontier = collections.deque([sg.root])

    while frontier:
        key = frontier.popleft()
        node = graph.nodes[key]
        state, d = node['state'], node['depth']

        reason = infeasibility(system, state)
        if reason is not None:
            sg.pruned[key] = reason
            continue

        if d >= depth:
            continue

        node['expanded'] = True

        for decision in valid_decisions(system, state, d):
            nxt = tick(system, state, decision, d, check=False)
            nkey = nxt.key()

            if nkey not in graph:
                if graph.number_of_nodes() >= cap:
                    raise StateSpaceTooLarge(cap)

                graph.add_node(nkey, state=nxt, depth=d + 1, phase=(d + 1) % h, expanded=False)
                frontier.append(nkey)

            graph.add_edge(key, nkey, decision=tuple(sorted(job.task for job in decision)))

    _prune_dead_ends(sg)

    for key, reason in sg.pruned.items():
        graph.nodes[key]['pruned'] = reason

    log('ENUM', '%d vertices, %d edges, %d pruned at depth %d' % (graph.number_of_nodes(),
                                graph.number_of_edges(), len(sg.pruned), depth))
    return sg

def _prune_dead_ends(sg):
    graph = sg.graph
    alive = {}

    for key in graph.nodes:
        if sg.expanded(key) and key not in sg.pruned:
            alive[key] = sum(1 for succ in graph.successors(key) if succ not in sg.pruned)

    queue = [key for key, count in alive.items() if count == 0]

    while queue:
        key = queue.pop()
        if key in sg.pruned:
            continue

        sg.pruned[key] = 'every continuation is infeasible'

        for pred in graph.predecessors(key):
            if pred in alive and pred not in sg.pruned:
                alive[pred] -= 1
                if alive[pred] == 0: queue.append(pred)

# ==============================================================================
# ~ [ lasso search ]
# ==============================================================================

@dataclass(frozen=True)
class Lasso(object):
    path: Tuple[bytes, ...] # distinct vertices visited at ticks 0..len-1
    start: int              # the last vertex steps back to path[start]

    @property
    def transient(self):
        return self.start

    @property
    def period(self):
        return len(self.path) - self.start

    def decisions(self, sg):
        keys = self.path + (self.path[self.start],)
        return [sg.graph.edges[a, b]['decision'] for a, b in zip(keys, keys[1:])]

def lassos(sg):
    """Every simple path from the root closed by an edge back onto it."""
    if sg.root is None or not sg.survives(sg.root) or not sg.expanded(sg.root):
        return

    path = [sg.root]
    index = {sg.root: 0}
    stack = [iter(sg.successors(sg.root))]

    while stack:
        nxt = next(stack[-1], None)

        if nxt is None:
            stack.pop()
            del index[path.pop()]

        elif nxt in index:
            yield Lasso(tuple(path), index[nxt])

        elif sg.expanded(nxt):
            index[nxt] = len(path)
            path.append(nxt)
            stack.append(iter(sg.successors(nxt)))

@dataclass(frozen=True)
class Extremes(object):
    max_cycle_len: Optional[int]
    max_transient_len: Optional[int]
    cycle_witness: Optional[Lasso]
    transient_witness: Optional[Lasso]
    complete: bool # false when lassos past the graph depth may be missing

@profile("enm.py", "extremal_cycles")
def extremal_cycles(sg):
    longest = None
    latest = None

    for lasso in lassos(sg):
        if longest is None or lasso.period > longest.period:
            longest = lasso
        if latest is None or lasso.transient > latest.transient:
            latest = lasso

    if longest is None:
        return Extremes(None, None, None, None, sg.complete)

    log('ENUM', 'longest period %d, longest transient %d' % (longest.period, latest.transient))
    return Extremes(longest.period, latest.transient, longest, latest, sg.complete)

# ==============================================================================
# ~ [ bound verification ]
# ==============================================================================

@dataclass(frozen=True)
class BoundCheck(object):
    holds: bool
    counterexample: Optional[Lasso] = None

    def __bool__(self):
        return self.holds

def boundary_graph(sg):
    """Surviving phase-0 vertices, linked when H ticks of survivors join them."""
    h = sg.hyperperiod
    bg = nx.DiGraph()

    nodes = [key for key, phase in sg.graph.nodes(data='phase')
                        if phase == 0 and sg.survives(key)]
    bg.add_nodes_from(nodes)

    for key in nodes:
        reach = {key}

        for _ in range(h):
            reach = set(succ for v in reach if sg.expanded(v) for succ in sg.successors(v))

        bg.add_edges_from((key, v) for v in reach if v in bg)

    return bg

def _has_simple_path(bg, root, edges):
    if root not in bg:
        return False

    path = {root}

    def walk(v, left):
        if left == 0:
            return True

        for succ in bg.successors(v):
            if succ not in path:
                path.add(succ)
                if walk(succ, left - 1): return True
                path.discard(succ)

        return False

    return walk(root, edges)

@profile("enm.py", "verify_bound")
def verify_bound(sg, bound, measure='transient'):
    """
    Whether every feasible memoryless schedule reaches its cycle by `bound`
    (measure="transient", the tick where the repeated state first occurs)
    or shows the repetition itself by `bound` (measure="revisit").
    The graph must reach depth bound + H unless it is complete.
    """
    if measure == 'transient':
        value = lambda lasso: lasso.transient
        edges = (bound + 1) // sg.hyperperiod
    elif measure == 'revisit':
        value = lambda lasso: len(lasso.path)
        edges = bound // sg.hyperperiod
    else:
        raise ConfigurationError('unknown measure "%s"' % measure)

    need = checked_add(bound, sg.hyperperiod, 'bound + H')
    if sg.depth < need and not sg.complete:
        raise ConfigurationError('graph depth %d is below bound + H = %d' % (sg.depth, need))

    # a counterexample visits edges + 1 distinct phase-0 vertices
    if not _has_simple_path(boundary_graph(sg), sg.root, edges):
        log('ENUM', 'bound %d holds by boundary counting' % bound)
        return BoundCheck(True)

    for lasso in lassos(sg):
        if value(lasso) > bound:
            log('ENUM', 'bound %d exceeded: transient %d period %d' % (bound,
                                            lasso.transient, lasso.period))
            return BoundCheck(False, lasso)

    return BoundCheck(True)

def trace_path(sg, trace):
    """
    Follow a schedule through the graph. Returns the (transient, period) of
    its first repeated state, or None when the schedule leaves the surviving
    graph or never repeats.
    """
    replayed = replay(sg.system, trace.assignment)
    keys = [state.key() for state in replayed.states]
    first = {}

    for t, key in enumerate(keys):
        if key not in sg.graph or not sg.survives(key):
            return None

        if key in first:
            return (first[key], t - first[key])
        first[key] = t

        if t + 1 < len(keys):
            edge = sg.graph.edges.get((key, keys[t + 1]))
            if edge is None or edge['decision'] != trace.assignment[t]:
                return None

    return None

# ==============================================================================
# ~ [ export ]
# ==============================================================================

def _quote(text):
    return '"%s"' % text.replace('\\', '\\\\').replace('"', '\\"').replace('\n', '\\n')

def export_graph(sg):
    lines = ['digraph schedule {']
    names = {}

    for i, (key, data) in enumerate(sg.graph.nodes(data=True)):
        names[key] = 'n%d' % i
        attrs = ['label=%s' % _quote('(%s)\nt=%d' % (data['state'].label(), data['depth']))]

        if key in sg.pruned:
            attrs.append('style=dotted')
        if key == sg.root:
            attrs.append('shape=box')

        lines.append('  %s [%s];' % (names[key], ', '.join(attrs)))

    for a, b, decision in sg.graph.edges(data='decision'):
        attrs = ['label=%s' % _quote(','.join(map(str, decision)) or 'idle')]

        # an edge onto a vertex first seen no later closes a cycle
        if sg.graph.nodes[b]['depth'] <= sg.graph.nodes[a]['depth']:
            attrs.append('style=dashed')

        lines.append('  %s -> %s [%s];' % (names[a], names[b], ', '.join(attrs)))

    lines.append('}')
    return '\n'.join(lines) + '\n'
