"""Dynamic knowledge bases: actions, transitions and planning problems."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable

from .errors import IllFormedAction, InconsistentState, NonGroundEffect, ValidationError
from .kb import ABox, Atom, TBox, alph, var
from .query import ConjunctiveQuery, UnionQuery, apply_atom, as_union, format_subst, freeze
from .reasoner import Reasoner, default_depth, first_violation


@dataclass(frozen=True)
class Action:
    """``name(params) : guard ⇝ effect``."""

    name: str
    params: tuple
    guard: ConjunctiveQuery
    effect: Atom

    def __post_init__(self):
        params = tuple(var(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if len(set(params)) != len(params):
            raise ValidationError(f"action {self.name}: repeated parameter")
        gv = set(self.guard.variables())
        if set(params) != gv:
            raise ValidationError(
                f"action {self.name}: parameters {list(params)} must be exactly the guard variables {sorted(gv)}"
            )
        free = set(self.effect.variables()) - gv
        if free:
            raise ValidationError(f"action {self.name}: effect variables {sorted(free)} do not occur in the guard")

    def instantiate(self, theta) -> Atom:
        eff = apply_atom(theta, self.effect)
        if not eff.is_ground:
            raise NonGroundEffect(f"{self.name}: substitution {format_subst(theta)} leaves {eff} non-ground")
        return eff

    def label(self, theta) -> str:
        args = ",".join(dict(theta).get(p, p) for p in self.params)
        return f"{self.name}({args})"

    def __str__(self):
        return f"{self.name}({','.join(self.params)}) : {self.guard} ⇝ {self.effect}"


def well_formed(act: Action, t: TBox) -> bool:
    return act.effect.pred not in t.sj_conclusions()


def apply_action(act: Action, theta, a: ABox) -> ABox:
    return a.add(act.instantiate(theta))


@dataclass(frozen=True)
class Transition:
    action: Action
    subst: tuple
    target: ABox


def next_transitions(t: TBox, a: ABox, gamma: Iterable[Action], reasoner: Reasoner | None = None) -> list:
    """All ⟨action, ϑ, A ∪ {eϑ}⟩ with ϑ a certain answer of the guard over ``a``.

    Successors are not checked for consistency here.
    """
    reasoner = reasoner or Reasoner(t, default_depth(t, [g.guard for g in gamma]))
    if not reasoner.consistent(a):
        raise InconsistentState(f"cannot expand an inconsistent state: {a}")
    out = []
    for act in sorted(gamma, key=lambda x: x.name):
        answers = sorted(freeze(s) for s in reasoner.answers(act.guard, a))
        for theta in answers:
            out.append(Transition(act, theta, apply_action(act, dict(theta), a)))
    return out


@dataclass(frozen=True)
class DKB:
    tbox: TBox
    initial: ABox
    actions: tuple

    def __post_init__(self):
        object.__setattr__(self, "initial", ABox(self.initial))
        acts = tuple(sorted(self.actions, key=lambda x: x.name))
        if len({x.name for x in acts}) != len(acts):
            raise ValidationError("action names must be unique")
        object.__setattr__(self, "actions", acts)
        for act in acts:
            if not well_formed(act, self.tbox):
                raise IllFormedAction(
                    f"action {act.name}: effect predicate {act.effect.pred} is a simple-join conclusion"
                )
        v = first_violation(self.initial, self.tbox, default_depth(self.tbox, [x.guard for x in acts]))
        if v is not None:
            raise InconsistentState(f"initial ABox is inconsistent: {v}")

    def action(self, name: str) -> Action:
        for act in self.actions:
            if act.name == name:
                return act
        raise KeyError(name)


@dataclass(frozen=True)
class PlanningProblem:
    dkb: DKB
    goal: UnionQuery
    name: str = field(default="problem", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "goal", as_union(self.goal))
        known = alph(self.tbox, self.initial) | {x.effect.pred for x in self.actions}
        known |= {p for x in self.actions for p in x.guard.predicates()}
        unknown = self.goal.predicates() - known
        if unknown:
            warnings.warn(f"goal mentions predicates outside the problem alphabet: {sorted(unknown)}", stacklevel=2)

    @property
    def tbox(self) -> TBox:
        return self.dkb.tbox

    @property
    def initial(self) -> ABox:
        return self.dkb.initial

    @property
    def actions(self) -> tuple:
        return self.dkb.actions

    def depth(self) -> int:
        qs = [x.guard for x in self.actions] + list(self.goal)
        return default_depth(self.tbox, qs)

    def reasoner(self) -> Reasoner:
        return Reasoner(self.tbox, self.depth())


@dataclass(frozen=True)
class ProblemSpec:
    """Parsed contents of a KB file; the goal may be absent."""

    tbox: TBox
    initial: ABox
    actions: tuple = ()
    goal: UnionQuery | None = None

    def dkb(self) -> DKB:
        return DKB(self.tbox, self.initial, self.actions)

    def problem(self, name="problem") -> PlanningProblem:
        if self.goal is None:
            raise ValidationError("no goal given")
        return PlanningProblem(self.dkb(), self.goal, name)


def make_problem(tbox, initial, actions, goal, name="problem") -> PlanningProblem:
    if isinstance(goal, Atom):
        goal = ConjunctiveQuery((goal,))
    return PlanningProblem(DKB(tbox, ABox(initial), tuple(actions)), as_union(goal), name)


__all__ = [
    "Action",
    "DKB",
    "PlanningProblem",
    "ProblemSpec",
    "Transition",
    "apply_action",
    "make_problem",
    "next_transitions",
    "well_formed",
]
