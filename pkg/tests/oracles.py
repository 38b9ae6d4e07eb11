"""Naive reference implementations used to cross-check the library.

Nothing here imports the reasoner, the planners or the canonicaliser; only
the plain data types are shared.
"""
from __future__ import annotations

import itertools
from collections import deque

from dkbplan.kb import Atom, Concept, ConceptInclusion, Functionality, RoleInclusion, is_var


def _holds_basic(facts, expr, term):
    if isinstance(expr, Concept):
        return (expr.name, (term,)) in facts
    r = expr.role
    for pred, args in facts:
        if pred != r.name or len(args) != 2:
            continue
        s, o = (args[1], args[0]) if r.inverted else args
        if s == term and (expr.filler is None or (expr.filler, (o,)) in facts):
            return True
    return False


def _terms(facts):
    return {t for _, args in facts for t in args}


def naive_chase(abox, tbox, depth):
    """Oblivious-style fixpoint: every rule is re-tried over every term each round."""
    facts = {(f.pred, f.args) for f in abox}
    gen = {}
    counter = itertools.count()
    changed = True
    while changed:
        changed = False
        new = set()
        terms = _terms(facts)
        for ax in tbox.dl:
            if isinstance(ax, ConceptInclusion) and not ax.negated:
                for t in terms:
                    if not _holds_basic(facts, ax.lhs, t):
                        continue
                    if isinstance(ax.rhs, Concept):
                        new.add((ax.rhs.name, (t,)))
                    elif not _holds_basic(facts | new, ax.rhs, t) and gen.get(t, 0) < depth:
                        n = f"_:o{next(counter)}"
                        gen[n] = gen.get(t, 0) + 1
                        r = ax.rhs.role
                        new.add((r.name, (n, t) if r.inverted else (t, n)))
                        if ax.rhs.filler:
                            new.add((ax.rhs.filler, (n,)))
            elif isinstance(ax, RoleInclusion) and not ax.negated:
                for pred, args in facts:
                    if len(args) == 2:
                        s, o = args
                        if ax.lhs.inverted:
                            s, o = o, s
                        if pred == ax.lhs.name:
                            new.add((ax.rhs.name, (o, s) if ax.rhs.inverted else (s, o)))
        for sj in tbox.sj:
            for x in terms:
                for y in terms:
                    if x.startswith("_:") or y.startswith("_:"):
                        continue
                    if (sj.left, (x,)) in facts and (sj.right, (y,)) in facts:
                        new.add((sj.role, (x, y)))
        if not new <= facts:
            facts |= new
            changed = True
    return facts


def naive_consistent(abox, tbox, depth):
    facts = naive_chase(abox, tbox, depth)
    terms = _terms(facts)
    for ax in tbox.dl:
        if isinstance(ax, ConceptInclusion) and ax.negated:
            if any(_holds_basic(facts, ax.lhs, t) and _holds_basic(facts, ax.rhs, t) for t in terms):
                return False
        elif isinstance(ax, RoleInclusion) and ax.negated:
            def pairs(role):
                out = set()
                for pred, args in facts:
                    if pred == role.name and len(args) == 2:
                        out.add(args[::-1] if role.inverted else args)
                return out

            if pairs(ax.lhs) & pairs(ax.rhs):
                return False
        elif isinstance(ax, Functionality):
            r = ax.role
            succ = {}
            for pred, args in facts:
                if pred == r.name and len(args) == 2:
                    s, o = args[::-1] if r.inverted else args
                    if not s.startswith("_:") and not o.startswith("_:"):
                        succ.setdefault(s, set()).add(o)
            if any(len(v) > 1 for v in succ.values()):
                return False
    return True


def naive_ans(cq, abox, tbox, depth):
    """Every substitution over adom whose instance is contained in the chase."""
    facts = naive_chase(abox, tbox, depth)
    adom = sorted({t for f in abox for t in f.args})
    vs = []
    for a in cq.atoms:
        for t in a.args:
            if is_var(t) and t not in vs:
                vs.append(t)
    out = set()
    for combo in itertools.product(adom, repeat=len(vs)):
        s = dict(zip(vs, combo))
        if all((a.pred, tuple(s.get(t, t) for t in a.args)) in facts for a in cq.atoms):
            out.add(tuple(sorted(s.items())))
    return out


def naive_ucq_ans(ucq, abox, tbox, depth):
    out = set()
    for cq in ucq:
        out |= naive_ans(cq, abox, tbox, depth)
    return out


def brute_reachability(problem, depth):
    """Breadth-first reachability from A0 that stops at goal and inconsistent states.

    Returns ``(consistent_states, goal_states, transitions)`` where transitions
    are ``(source, action, subst, target)`` between consistent states.
    """
    tbox = problem.tbox
    root = frozenset(problem.initial)
    seen = {root}
    queue = deque([root])
    consistent, goals, trans = set(), set(), set()
    while queue:
        a = queue.popleft()
        if not naive_consistent(a, tbox, depth):
            continue
        consistent.add(a)
        if naive_ucq_ans(problem.goal, a, tbox, depth):
            goals.add(a)
            continue
        for act in problem.actions:
            for s in naive_ans(act.guard, a, tbox, depth):
                sub = dict(s)
                eff = Atom(act.effect.pred, tuple(sub.get(t, t) for t in act.effect.args))
                b = a | {eff}
                if b == a:
                    continue
                trans.add((a, act.name, s, b))
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
    trans = {t for t in trans if naive_consistent(t[3], tbox, depth)}
    return consistent, goals, trans


def brute_plans(problem, depth):
    _, goals, trans = brute_reachability(problem, depth)
    succ = {}
    for s, act, sub, t in trans:
        succ.setdefault(s, []).append((act, sub, t))
    root = frozenset(problem.initial)
    plans = set()

    def rec(state, path):
        if state in goals:
            if path:
                plans.add(tuple(path))
            return
        for act, sub, t in succ.get(state, ()):
            rec(t, path + [(act, sub)])

    rec(root, [])
    return plans


def all_renamings(atoms, variables, names):
    """Every injective renaming of ``variables`` into ``names`` applied to ``atoms``, as atom sets."""
    out = set()
    for perm in itertools.permutations(names, len(variables)):
        m = dict(zip(variables, perm))
        out.add(frozenset(Atom(a.pred, tuple(m.get(t, t) for t in a.args)) for a in atoms))
    return out


def equal_up_to_renaming(q1, q2):
    v1 = list(dict.fromkeys(t for a in q1.atoms for t in a.args if is_var(t)))
    v2 = list(dict.fromkeys(t for a in q2.atoms for t in a.args if is_var(t)))
    if len(v1) != len(v2):
        return False
    return frozenset(q2.atoms) in all_renamings(q1.atoms, v1, v2)

