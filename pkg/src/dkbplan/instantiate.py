"""Forward plan instantiation: forward search restricted by an abstract planning graph."""
from __future__ import annotations

import time
from dataclasses import dataclass

from .backward import AbstractPlanningGraph, abstract_backward_plan
from .dkb import PlanningProblem, Transition, apply_action
from .errors import InconsistentState
from .forward import RunMetrics, SearchConfig, search
from .kb import ABox, is_var
from .query import freeze


def next_a(problem: PlanningProblem, a: ABox, abstract: AbstractPlanningGraph, reasoner=None) -> list:
    """Transitions allowed by some pair ⟨σ, act, link⟩ whose σ holds in ``a``.

    σ embeds the action guard through the link, so one evaluation of σ gives
    both the membership test and the parameter bindings.
    """
    reasoner = reasoner or problem.reasoner()
    if not reasoner.consistent(a):
        raise InconsistentState(f"cannot expand an inconsistent state: {a}")
    acts = {x.name: x for x in problem.actions}
    seen = set()
    out = []
    for pair in sorted(abstract.pairs, key=lambda p: (p.action, str(p.state), p.link)):
        act = acts[pair.action]
        link = dict(pair.link)
        wanted = {t for t in link.values() if is_var(t)}
        for ans in reasoner.answers(pair.state, a, project=wanted):
            theta = freeze({p: ans.get(t, t) for p, t in link.items()})
            if (act.name, theta) in seen:
                continue
            seen.add((act.name, theta))
            out.append(Transition(act, theta, apply_action(act, dict(theta), a)))
    out.sort(key=lambda tr: (tr.action.name, tr.subst))
    return out


def fpi(problem: PlanningProblem, abstract: AbstractPlanningGraph, cfg: SearchConfig = SearchConfig(), reasoner=None):
    """Forward search using ``next_a``; returns ``(graph, metrics)``."""
    reasoner = reasoner or problem.reasoner()

    def expand(a):
        return next_a(problem, a, abstract, reasoner)

    return search(problem, expand, cfg, reasoner)


@dataclass(frozen=True)
class ComposedMetrics:
    abstract_states: int
    abstract_pairs: int
    abp_time_s: float
    fpi: RunMetrics
    total_time_s: float


def abp_fpi(problem: PlanningProblem, cfg: SearchConfig = SearchConfig(), reasoner=None, **abp_kw):
    """Run both phases; returns ``(abstract_graph, graph, metrics)``.

    State counts in ``metrics`` cover the instantiation phase only; its time
    is the total of both phases.  Per-phase figures are in ``graph.composed``.
    """
    reasoner = reasoner or problem.reasoner()
    t0 = time.perf_counter()
    abstract = abstract_backward_plan(problem, reasoner, **abp_kw)
    t1 = time.perf_counter()
    remaining = None if cfg.timeout_s is None else max(cfg.timeout_s - (t1 - t0), 0.0)
    run_cfg = SearchConfig(cfg.strategy, cfg.mode, remaining, cfg.max_states)
    graph, m = fpi(problem, abstract, run_cfg, reasoner)
    total = time.perf_counter() - t0
    metrics = RunMetrics(m.edges, m.visited, m.inconsistent, total, m.timed_out)
    graph.composed = ComposedMetrics(len(abstract.states), len(abstract.pairs), t1 - t0, m, total)
    return abstract, graph, metrics
