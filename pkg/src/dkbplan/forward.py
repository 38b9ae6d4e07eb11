"""Forward planning over a DKB's transition system.

The search keeps a frontier ``R`` and a visited set ``V``.  A popped state
that is inconsistent is counted, and the edges that produced it are dropped
from the planning graph.  A popped goal state is recorded but not expanded.
Any other state contributes its successor triples ``⟨A, a, ϑ⟩`` to the graph.
"""
from __future__ import annotations

import time
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .dkb import PlanningProblem, Transition, next_transitions
from .kb import ABox
from .query import format_subst

FIFO, LIFO = "fifo", "lifo"
ALL, FIRST = "all", "first"


@dataclass(frozen=True)
class SearchConfig:
    strategy: str = FIFO
    mode: str = ALL
    timeout_s: float | None = None
    max_states: int | None = None

    def __post_init__(self):
        if self.strategy not in (FIFO, LIFO):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.mode not in (ALL, FIRST):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class RunMetrics:
    edges: int
    visited: int
    inconsistent: int
    time_s: float
    timed_out: bool = False

    def row(self):
        return (self.edges, self.visited, self.inconsistent)


@dataclass(frozen=True)
class Edge:
    source: ABox
    action: str
    subst: tuple

    def label(self) -> str:
        return f"{self.action}{format_subst(self.subst)}"


@dataclass(frozen=True)
class Step:
    action: str
    subst: tuple

    def __str__(self):
        return f"{self.action}{format_subst(self.subst)}"


Plan = tuple


def format_plan(plan) -> str:
    return " ; ".join(map(str, plan))


@dataclass
class PlanningGraph:
    root: ABox
    actions: dict
    edges: set = field(default_factory=set)
    visited: set = field(default_factory=set)
    inconsistent: set = field(default_factory=set)
    goals: set = field(default_factory=set)

    def target(self, edge: Edge) -> ABox:
        return edge.source.add(self.actions[edge.action].instantiate(dict(edge.subst)))

    def states(self) -> set:
        """States touched by an edge, plus the root."""
        out = {self.root}
        for e in self.edges:
            out.add(e.source)
            out.add(self.target(e))
        return out

    def successors(self) -> dict:
        succ = defaultdict(list)
        for e in sorted(self.edges, key=_edge_key):
            succ[e.source].append((e, self.target(e)))
        return succ

    def triples(self) -> set:
        return {(e.source, e.action, e.subst) for e in self.edges}


def _edge_key(e: Edge):
    return (len(e.source), sorted(map(str, e.source)), e.action, e.subst)


def edges_to(p: PlanningGraph, gamma: Iterable, a: ABox) -> set:
    """Edges of ``p`` whose target is ``a``."""
    acts = {x.name: x for x in gamma}
    return {e for e in p.edges if e.source.add(acts[e.action].instantiate(dict(e.subst))) == a}


def search(
    problem: PlanningProblem,
    expand: Callable[[ABox], list],
    cfg: SearchConfig,
    reasoner,
) -> tuple:
    """The loop shared by forward planning and forward plan instantiation."""
    start = time.perf_counter()
    deadline = start + cfg.timeout_s if cfg.timeout_s is not None else None
    root = problem.initial
    graph = PlanningGraph(root, {x.name: x for x in problem.actions})
    incoming = defaultdict(set)
    frontier = deque([root])
    queued = {root}
    pop = frontier.popleft if cfg.strategy == FIFO else frontier.pop
    timed_out = False

    while frontier:
        if deadline is not None and time.perf_counter() > deadline:
            timed_out = True
            break
        if cfg.max_states is not None and len(graph.visited) >= cfg.max_states:
            timed_out = True
            break
        a = pop()
        queued.discard(a)
        graph.visited.add(a)
        if not reasoner.consistent(a):
            graph.inconsistent.add(a)
            graph.edges -= incoming.pop(a, set())
            continue
        if reasoner.entails(problem.goal, a):
            graph.goals.add(a)
            if cfg.mode == FIRST:
                break
            continue
        for tr in expand(a):
            b = tr.target
            # an already-present effect leads back to the same state
            if b == a or b in graph.inconsistent:
                continue
            edge = Edge(a, tr.action.name, tr.subst)
            graph.edges.add(edge)
            incoming[b].add(edge)
            if b not in graph.visited and b not in queued:
                frontier.append(b)
                queued.add(b)

    metrics = RunMetrics(
        edges=len(graph.edges),
        visited=len(graph.visited),
        inconsistent=len(graph.inconsistent),
        time_s=time.perf_counter() - start,
        timed_out=timed_out,
    )
    return graph, metrics


def forward_plan(problem: PlanningProblem, cfg: SearchConfig = SearchConfig(), reasoner=None):
    """Build the planning graph of ``problem``; returns ``(graph, metrics)``."""
    reasoner = reasoner or problem.reasoner()
    acts = problem.actions

    def expand(a):
        return next_transitions(problem.tbox, a, acts, reasoner)

    return search(problem, expand, cfg, reasoner)


# ---------------------------------------------------------------------------
# Plans


def _walk(graph, max_len):
    succ = graph.successors()
    path, on_path = [], {graph.root}

    def rec(state):
        if state in graph.goals and path:
            yield tuple(path)
            return
        if max_len is not None and len(path) >= max_len:
            return
        for e, b in succ.get(state, ()):
            if b in on_path:
                continue
            path.append(Step(e.action, e.subst))
            on_path.add(b)
            yield from rec(b)
            on_path.discard(b)
            path.pop()

    yield from rec(graph.root)


def iter_plans(graph: PlanningGraph, max_len: int | None = None):
    return _walk(graph, max_len)


def extract_plans(graph: PlanningGraph, problem: PlanningProblem | None = None, max_len: int | None = None) -> set:
    """All goal-reaching simple paths from the root, as plans."""
    return set(_walk(graph, max_len))


def count_plans(graph: PlanningGraph) -> int:
    """Number of plans; states only grow along edges, so the graph is acyclic."""
    succ = graph.successors()
    memo = {}

    def count(state):
        if state in memo:
            return memo[state]
        if state in graph.goals:
            memo[state] = 1
            return 1
        memo[state] = sum(count(b) for _, b in succ.get(state, ()))
        return memo[state]

    if graph.root in graph.goals:
        return 0
    return count(graph.root)


def _is_subsequence(short, long) -> bool:
    it = iter(long)
    return all(any(x == y for y in it) for x in short)


def redundant(plan, plans) -> bool:
    """True iff a proper subsequence of ``plan`` is itself among ``plans``."""
    return any(len(p) < len(plan) and _is_subsequence(p, plan) for p in plans)


def goal_path(graph: PlanningGraph):
    """A shortest plan in the graph, or None."""
    succ = graph.successors()
    prev = {graph.root: None}
    queue = deque([graph.root])
    while queue:
        s = queue.popleft()
        if s in graph.goals and s != graph.root:
            steps = []
            while prev[s] is not None:
                e, s = prev[s]
                steps.append(Step(e.action, e.subst))
            return tuple(reversed(steps))
        for e, b in succ.get(s, ()):
            if b not in prev:
                prev[b] = (e, s)
                queue.append(b)
    return None


__all__ = [
    "ALL",
    "Edge",
    "FIFO",
    "FIRST",
    "LIFO",
    "PlanningGraph",
    "RunMetrics",
    "SearchConfig",
    "Step",
    "Transition",
    "count_plans",
    "edges_to",
    "extract_plans",
    "format_plan",
    "forward_plan",
    "goal_path",
    "iter_plans",
    "redundant",
    "search",
]
