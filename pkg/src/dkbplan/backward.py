"""Abstract backward planning.

Abstract states are conjunctive queries.  Starting from the goal, atoms that
are simple-join conclusions are first resolved away with the join axioms;
the resulting queries are then regressed through every action whose effect
unifies with one of their atoms, replacing that atom by the action's guard.
The output is a flat set of ⟨state, action, link⟩ constraints, where the
link records which term of the state each action parameter was bound to.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .dkb import Action, PlanningProblem
from .kb import SimpleJoin
from .query import (
    ConjunctiveQuery,
    apply,
    canonical_renaming,
    format_subst,
    rename_apart,
    unify,
)


@dataclass(frozen=True)
class AbstractState:
    query: ConjunctiveQuery
    initial_satisfied: bool = False

    @property
    def key(self) -> ConjunctiveQuery:
        return self.query

    def __str__(self):
        return str(self.query)


@dataclass(frozen=True)
class Pair:
    state: ConjunctiveQuery
    action: str
    link: tuple

    def label(self, params=None) -> str:
        return f"{self.action}{format_subst(self.link)}"


@dataclass
class AbstractPlanningGraph:
    goal_states: list = field(default_factory=list)
    states: dict = field(default_factory=dict)       # canonical query -> AbstractState
    order: list = field(default_factory=list)        # discovery order of canonical queries
    pairs: set = field(default_factory=set)
    edges: list = field(default_factory=list)        # (src, dst, label, kind)
    truncated: int = 0

    def add_state(self, q: ConjunctiveQuery, satisfied: bool):
        if q not in self.states:
            self.states[q] = AbstractState(q, satisfied)
            self.order.append(q)

    def add_edge(self, src, dst, label, kind):
        e = (src, dst, label, kind)
        if e not in self.edges:
            self.edges.append(e)

    def initial_states(self) -> list:
        return [q for q in self.order if self.states[q].initial_satisfied]

    def sj_edges(self) -> list:
        return [e for e in self.edges if e[3] == "sj"]

    def action_edges(self) -> list:
        return [e for e in self.edges if e[3] == "action"]

    def state_names(self) -> dict:
        return {q: f"S{i + 1}" for i, q in enumerate(self.order)}


def resolve_with_mgu(sigma: ConjunctiveQuery, premise: ConjunctiveQuery, conclusion) -> list:
    """One-step resolvents of ``sigma`` against the clause ``premise → conclusion``.

    Each atom of ``sigma`` that unifies with ``conclusion`` is replaced in
    place by ``premise``, and the unifier is applied to the whole query.
    Results are paired with their unifier: ``[(resolvent, mgu), ...]``.
    """
    out = []
    atoms = list(sigma.atoms)
    for i, atom in enumerate(atoms):
        mgu = unify(conclusion, atom)
        if mgu is None:
            continue
        new = atoms[:i] + list(premise.atoms) + atoms[i + 1:]
        out.append((apply(mgu, ConjunctiveQuery(tuple(new))).dedup(), mgu))
    return out


def resolve(sigma: ConjunctiveQuery, premise: ConjunctiveQuery, conclusion) -> list:
    """Resolvents only, one per (atom position, unifier)."""
    return [q for q, _ in resolve_with_mgu(sigma, premise, conclusion)]


def _sj_clause(ax: SimpleJoin, avoid):
    premise = ConjunctiveQuery(ax.premise)
    renamed, (concl,), _ = rename_apart(premise, avoid, (ax.conclusion,))
    return renamed, concl


def fully_resolve(sigma: ConjunctiveQuery, sj) -> list:
    """Resolve every simple-join conclusion atom of ``sigma``, branching over the axioms."""
    by_role = {}
    for ax in sorted(sj, key=str):
        by_role.setdefault(ax.role, []).append(ax)
    if not any(a.pred in by_role for a in sigma):
        return [sigma]
    results, seen = [], set()
    todo = [sigma]
    while todo:
        q = todo.pop(0)
        idx = next((i for i, a in enumerate(q.atoms) if a.pred in by_role), None)
        if idx is None:
            key = canonical_renaming(q)[0]
            if key not in seen:
                seen.add(key)
                results.append(q)
            continue
        target = q.atoms[idx]
        for ax in by_role[target.pred]:
            premise, concl = _sj_clause(ax, q.variables())
            mgu = unify(concl, target)
            new = q.atoms[:idx] + premise.atoms + q.atoms[idx + 1:]
            todo.append(apply(mgu, ConjunctiveQuery(new)).dedup())
    return results


def act_prev_a(sigma: ConjunctiveQuery, act: Action) -> list:
    """Regress ``sigma`` through ``act``: ``[(query, link), ...]``."""
    guard, extra, renaming = rename_apart(act.guard, sigma.variables(), (act.effect,))
    (effect,) = extra
    out = []
    for resolvent, mgu in resolve_with_mgu(sigma, guard, effect):
        link = {p: mgu.get(renaming.get(p, p), renaming.get(p, p)) for p in act.params}
        out.append((resolvent, link))
    return out


def prev_a(sigma: ConjunctiveQuery, gamma) -> list:
    """``[(query, action name, link), ...]`` over every action of ``gamma``."""
    out = []
    for act in sorted(gamma, key=lambda x: x.name):
        out.extend((q, act.name, link) for q, link in act_prev_a(sigma, act))
    return out


def default_max_atoms(problem: PlanningProblem) -> int:
    goal = max(len(q) for q in problem.goal)
    growth = sum(max(len(a.guard) - 1, 0) for a in problem.actions)
    return goal + growth + len(problem.tbox.sj)


def abstract_backward_plan(
    problem: PlanningProblem,
    reasoner=None,
    prune_satisfied: bool = False,
    max_atoms: int | None = None,
    max_states: int | None = None,
) -> AbstractPlanningGraph:
    """Regress the goal to a flat set of abstract ⟨state, action, link⟩ pairs.

    States already satisfied by the initial ABox are flagged; with
    ``prune_satisfied`` they are also not regressed further.  Resolvents with
    more than ``max_atoms`` atoms are dropped and counted in ``truncated``.
    """
    reasoner = reasoner or problem.reasoner()
    a0 = problem.initial
    sj = problem.tbox.sj
    gamma = problem.actions
    limit = max_atoms if max_atoms is not None else default_max_atoms(problem)
    graph = AbstractPlanningGraph()
    visited = set()

    def register(q):
        canon, renaming = canonical_renaming(q)
        if canon not in graph.states:
            graph.add_state(canon, reasoner.entails(canon, a0))
        return canon, renaming

    for disjunct in problem.goal:
        g, _ = register(disjunct)
        graph.goal_states.append(g)
        if g in visited:
            continue
        frontier = deque([g])
        queued = {g}
        while frontier:
            if max_states is not None and len(graph.states) >= max_states:
                graph.truncated += len(frontier)
                break
            sigma = frontier.popleft()
            queued.discard(sigma)
            visited.add(sigma)
            if prune_satisfied and graph.states[sigma].initial_satisfied:
                continue
            for resolved in fully_resolve(sigma, sj):
                target, _ = register(resolved)
                if target != sigma:
                    graph.add_edge(sigma, target, "SJ axiom", "sj")
                for q, name, link in prev_a(target, gamma):
                    if len(q) > limit:
                        graph.truncated += 1
                        continue
                    canon, renaming = register(q)
                    link = tuple(sorted((p, renaming.get(t, t)) for p, t in link.items()))
                    graph.pairs.add(Pair(canon, name, link))
                    graph.add_edge(canon, target, _edge_label(name, link), "action")
                    if canon not in visited and canon not in queued:
                        frontier.append(canon)
                        queued.add(canon)
    return graph


def _edge_label(name, link) -> str:
    binding = ", ".join(f"{p[1:]} → {t[1:] if t.startswith('?') else t}" for p, t in link)
    return f"{name}[{binding}]"


def pairs_for(graph: AbstractPlanningGraph, action: str) -> list:
    return sorted((p for p in graph.pairs if p.action == action), key=lambda p: (str(p.state), p.link))


def same_up_to_renaming(q1: ConjunctiveQuery, q2: ConjunctiveQuery) -> bool:
    return canonical_renaming(q1)[0] == canonical_renaming(q2)[0]


__all__ = [
    "AbstractPlanningGraph",
    "AbstractState",
    "Pair",
    "abstract_backward_plan",
    "act_prev_a",
    "default_max_atoms",
    "fully_resolve",
    "pairs_for",
    "prev_a",
    "resolve",
    "resolve_with_mgu",
    "same_up_to_renaming",
]

