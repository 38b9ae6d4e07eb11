"""DL-Lite reasoning by restricted chase.

The chase builds a (depth-bounded) canonical model of ``⟨T, A⟩``: positive
concept and role inclusions are closed to a fixpoint, existential right-hand
sides introduce labelled nulls only when no witness exists, and simple joins
fire over named individuals.  Consistency is a scan of the result for
violated negative inclusions and functionality assertions; certain answers
are homomorphisms from the query into the named part of the model.
"""
from __future__ import annotations

import functools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InconsistentState
from .kb import (
    ABox,
    Atom,
    Concept,
    ConceptInclusion,
    Exists,
    Functionality,
    RoleInclusion,
    TBox,
    is_const,
    is_null,
    is_var,
    null,
)
from .query import ConjunctiveQuery, UnionQuery, as_union

DEFAULT_DEPTH = 2


def _basic_key(expr):
    if isinstance(expr, Concept):
        return ("c", expr.name)
    return ("e", expr.role.name, expr.role.inverted)


class CompiledTBox:
    """Index of a TBox's axioms by the fact kind that triggers them."""

    def __init__(self, tbox: TBox):
        self.tbox = tbox
        self.concept_rules = defaultdict(list)   # basic key -> [rhs]
        self.role_rules = defaultdict(list)      # role name -> [(role name, flip)]
        self.sj_left = defaultdict(list)         # concept -> [(right concept, role)]
        self.sj_right = defaultdict(list)        # concept -> [(left concept, role)]
        self.negative_concepts = []              # [(axiom, lhs key, rhs key)]
        self.negative_roles = []                 # [(axiom, lhs role, rhs role)]
        self.functional = []                     # [(axiom, role)]
        self.n_existential = 0
        for ax in tbox.axioms():
            if isinstance(ax, ConceptInclusion):
                if ax.negated:
                    self.negative_concepts.append((ax, _basic_key(ax.lhs), _basic_key(ax.rhs)))
                else:
                    self.concept_rules[_basic_key(ax.lhs)].append(ax.rhs)
                    if isinstance(ax.rhs, Exists):
                        self.n_existential += 1
            elif isinstance(ax, RoleInclusion):
                if ax.negated:
                    self.negative_roles.append((ax, ax.lhs, ax.rhs))
                else:
                    self.role_rules[ax.lhs.name].append((ax.rhs.name, ax.rhs.inverted))
            elif isinstance(ax, Functionality):
                self.functional.append((ax, ax.role))
        for ax in sorted(tbox.sj, key=str):
            self.sj_left[ax.left].append((ax.right, ax.role))
            self.sj_right[ax.right].append((ax.left, ax.role))


@functools.lru_cache(maxsize=64)
def compile_tbox(tbox: TBox) -> CompiledTBox:
    return CompiledTBox(tbox)


@dataclass
class ChasedABox:
    """Result of saturating an ABox; the base facts are kept apart from derived ones."""

    base: ABox
    depth_bound: int
    members: dict = field(default_factory=lambda: defaultdict(set))     # concept -> terms
    concepts: dict = field(default_factory=lambda: defaultdict(set))    # term -> concepts
    out: dict = field(default_factory=lambda: defaultdict(lambda: defaultdict(set)))
    inn: dict = field(default_factory=lambda: defaultdict(lambda: defaultdict(set)))
    generation: dict = field(default_factory=dict)                      # null -> generation
    null_count: int = 0

    def has_concept(self, name, term) -> bool:
        return name in self.concepts.get(term, ())

    def has_role(self, name, subj, obj) -> bool:
        return obj in self.out[name].get(subj, ())

    def facts(self) -> set:
        res = {Atom(c, (t,)) for c, ts in self.members.items() for t in ts}
        for r, succ in self.out.items():
            res.update(Atom(r, (s, o)) for s, objs in succ.items() for o in objs)
        return res

    @property
    def derived(self) -> set:
        return self.facts() - set(self.base)

    def named_facts(self) -> set:
        return {f for f in self.facts() if not any(is_null(t) for t in f.args)}

    def nulls(self) -> list:
        return sorted(self.generation, key=lambda n: int(n[3:]))

    def terms_with(self, key) -> set:
        if key[0] == "c":
            return self.members.get(key[1], set())
        _, role, inverted = key
        side = self.inn if inverted else self.out
        return {t for t, objs in side[role].items() if objs}

    def __contains__(self, fact: Atom) -> bool:
        if fact.is_concept:
            return self.has_concept(fact.pred, fact.args[0])
        return self.has_role(fact.pred, *fact.args)


class _Chase:
    def __init__(self, ct: CompiledTBox, result: ChasedABox):
        self.ct = ct
        self.r = result
        self.queue = deque()
        self.pending = deque()

    def gen(self, term):
        return self.r.generation.get(term, 0)

    def add_concept(self, name, term):
        r = self.r
        if name in r.concepts[term]:
            return
        r.concepts[term].add(name)
        r.members[name].add(term)
        self.queue.append(("c", name, term))

    def add_role(self, name, subj, obj):
        r = self.r
        objs = r.out[name][subj]
        if obj in objs:
            return
        first_out = not objs
        first_in = not r.inn[name][obj]
        objs.add(obj)
        r.inn[name][obj].add(subj)
        self.queue.append(("r", name, subj, obj, first_out, first_in))

    def fire(self, key, term):
        for rhs in self.ct.concept_rules.get(key, ()):
            if isinstance(rhs, Concept):
                self.add_concept(rhs.name, term)
            else:
                self.pending.append((term, rhs))

    def has_witness(self, term, rhs: Exists) -> bool:
        side = self.r.inn if rhs.role.inverted else self.r.out
        objs = side[rhs.role.name].get(term, ())
        if rhs.filler is None:
            return bool(objs)
        return any(rhs.filler in self.r.concepts.get(o, ()) for o in objs)

    def process(self, item):
        if item[0] == "c":
            _, name, term = item
            self.fire(("c", name), term)
            if is_const(term):
                for right, role in self.ct.sj_left.get(name, ()):
                    for y in list(self.r.members.get(right, ())):
                        if is_const(y):
                            self.add_role(role, term, y)
                for left, role in self.ct.sj_right.get(name, ()):
                    for x in list(self.r.members.get(left, ())):
                        if is_const(x):
                            self.add_role(role, x, term)
        else:
            _, name, subj, obj, first_out, first_in = item
            if first_out:
                self.fire(("e", name, False), subj)
            if first_in:
                self.fire(("e", name, True), obj)
            for target, flip in self.ct.role_rules.get(name, ()):
                if flip:
                    self.add_role(target, obj, subj)
                else:
                    self.add_role(target, subj, obj)

    def run(self):
        while self.queue or self.pending:
            while self.queue:
                self.process(self.queue.popleft())
            # existentials are handled once the datalog part is closed, so a
            # witness derived later in the round is still found
            while self.pending and not self.queue:
                term, rhs = self.pending.popleft()
                if self.has_witness(term, rhs):
                    continue
                g = self.gen(term) + 1
                if g > self.r.depth_bound:
                    continue
                n = null(self.r.null_count)
                self.r.null_count += 1
                self.r.generation[n] = g
                if rhs.role.inverted:
                    self.add_role(rhs.role.name, n, term)
                else:
                    self.add_role(rhs.role.name, term, n)
                if rhs.filler:
                    self.add_concept(rhs.filler, n)


def saturate(a: Iterable[Atom], t: TBox, depth_bound: int = DEFAULT_DEPTH) -> ChasedABox:
    """Chase ``a`` with the positive part of ``t``.

    Null chains stop after ``depth_bound`` generations; facts over named
    constants are always closed to a fixpoint.
    """
    if depth_bound < 1:
        raise ValueError("depth_bound must be at least 1")
    a = a if isinstance(a, ABox) else ABox(a)
    result = ChasedABox(base=a, depth_bound=depth_bound)
    chase = _Chase(compile_tbox(t), result)
    for fact in sorted(a):
        if fact.is_concept:
            chase.add_concept(fact.pred, fact.args[0])
        else:
            chase.add_role(fact.pred, *fact.args)
    chase.run()
    return result


# ---------------------------------------------------------------------------
# Consistency


@dataclass(frozen=True)
class Violation:
    axiom: object
    terms: tuple

    def __str__(self):
        return f"{self.axiom} at {', '.join(self.terms)}"


def _role_pairs(chased, role):
    side = chased.inn if role.inverted else chased.out
    return {(s, o) for s, objs in side[role.name].items() for o in objs}


def violations(chased: ChasedABox, t: TBox):
    """Yield violated negative inclusions and functionality assertions."""
    ct = compile_tbox(t)
    for ax, lhs, rhs in ct.negative_concepts:
        clash = chased.terms_with(lhs) & chased.terms_with(rhs)
        for term in sorted(clash, key=lambda x: (is_null(x), x)):
            yield Violation(ax, (term,))
    for ax, lhs, rhs in ct.negative_roles:
        for pair in sorted(_role_pairs(chased, lhs) & _role_pairs(chased, rhs)):
            yield Violation(ax, pair)
    for ax, role in ct.functional:
        side = chased.inn if role.inverted else chased.out
        for subj, objs in sorted(side[role.name].items()):
            if not is_const(subj):
                continue
            named = sorted(o for o in objs if is_const(o))
            if len(named) > 1:
                yield Violation(ax, (subj, *named[:2]))


def first_violation(a, t: TBox, depth_bound: int | None = None) -> Violation | None:
    chased = _cached_saturate(_abox(a), t, depth_bound or default_depth(t))
    return next(violations(chased, t), None)


# ---------------------------------------------------------------------------
# Query answering


def _candidates(chased, atom, binding):
    """Yield extensions of ``binding`` that match ``atom`` against named facts."""
    args = [binding.get(x, x) if is_var(x) else x for x in atom.args]
    if len(args) == 1:
        (s,) = args
        if is_var(s):
            for term in chased.members.get(atom.pred, ()):
                if is_const(term):
                    yield {**binding, s: term}
        elif s in chased.concepts and atom.pred in chased.concepts[s]:
            yield binding
        return
    s, o = args
    out = chased.out.get(atom.pred, {})
    if not is_var(s):
        objs = out.get(s, ())
        if not is_var(o):
            if o in objs:
                yield binding
            return
        for obj in objs:
            if is_const(obj):
                yield {**binding, o: obj}
        return
    if not is_var(o):
        for subj in chased.inn.get(atom.pred, {}).get(o, ()):
            if is_const(subj):
                yield {**binding, s: subj}
        return
    for subj, objs in out.items():
        if not is_const(subj):
            continue
        for obj in objs:
            if not is_const(obj):
                continue
            if s == o:
                if subj == obj:
                    yield {**binding, s: subj}
            else:
                yield {**binding, s: subj, o: obj}


def _cost(chased, atom, binding):
    bound = sum(1 for x in atom.args if not is_var(x) or x in binding)
    if bound == len(atom.args):
        return 0
    if atom.is_concept:
        return len(chased.members.get(atom.pred, ()))
    if bound:
        return 1
    return 1 + sum(len(v) for v in chased.out.get(atom.pred, {}).values())


def _search(chased, atoms, binding):
    if not atoms:
        yield binding
        return
    i = min(range(len(atoms)), key=lambda k: _cost(chased, atoms[k], binding))
    rest = atoms[:i] + atoms[i + 1:]
    for ext in _candidates(chased, atoms[i], binding):
        yield from _search(chased, rest, ext)


def _components(atoms):
    """Split atoms into groups connected by shared variables."""
    groups = []
    for a in atoms:
        vs = set(a.variables())
        merged = [g for g in groups if g[0] & vs]
        for g in merged:
            groups.remove(g)
        groups.append((vs.union(*(g[0] for g in merged)), [x for g in merged for x in g[1]] + [a]))
    return groups


def evaluate(chased: ChasedABox, q: ConjunctiveQuery, project=None) -> list:
    """All answers of ``q`` over the named part of ``chased``.

    With ``project`` given, answers are restricted to those variables and
    components of the query not mentioning them are only checked for
    satisfiability.
    """
    variables = q.variables()
    keep = set(variables if project is None else project)
    parts = []
    for vs, atoms in _components(list(dict.fromkeys(q.atoms))):
        if vs & keep:
            parts.append(atoms)
        elif next(_search(chased, atoms, {}), None) is None:
            return []
    results = [{}]
    for atoms in parts:
        sols = {}
        for b in _search(chased, atoms, {}):
            proj = tuple(sorted((k, v) for k, v in b.items() if k in keep))
            sols[proj] = None
        results = [{**r, **dict(p)} for r in results for p in sols]
        if not results:
            return []
    unique = {tuple(sorted(r.items())): r for r in results}
    return list(unique.values())


def default_depth(t: TBox, queries: Iterable = ()) -> int:
    """Null depth: one more than the largest query, and enough to expose every existential."""
    sizes = [len(q) for q in queries]
    return max([DEFAULT_DEPTH, (max(sizes) + 1) if sizes else 0, compile_tbox(t).n_existential + 1])


def _abox(a) -> ABox:
    return a if isinstance(a, ABox) else ABox(a)


@functools.lru_cache(maxsize=4096)
def _cached_saturate(a: ABox, t: TBox, depth_bound: int) -> ChasedABox:
    return saturate(a, t, depth_bound)


def consistent(a, t: TBox, depth_bound: int | None = None) -> bool:
    return first_violation(a, t, depth_bound) is None


def ans(q, t: TBox, a, depth_bound: int | None = None) -> list:
    """Certain answers of a CQ or UCQ as a list of substitutions.

    Raises InconsistentState when ``a`` is inconsistent with ``t``.
    """
    a = _abox(a)
    u = as_union(q)
    depth = depth_bound or default_depth(t, u.disjuncts)
    chased = _cached_saturate(a, t, depth)
    if next(violations(chased, t), None) is not None:
        raise InconsistentState(f"ABox is inconsistent with the TBox: {a}")
    seen = {}
    for cq in u:
        for s in evaluate(chased, cq):
            seen.setdefault(tuple(sorted(s.items())), s)
    return list(seen.values())


def holds(sigma, t: TBox, a, depth_bound: int | None = None) -> bool:
    """Membership of ``a`` in the set of consistent ABoxes where ``sigma`` has an answer."""
    try:
        return bool(ans(sigma, t, a, depth_bound))
    except InconsistentState:
        return False


class Reasoner:
    """Per-run reasoning service with a private saturation cache."""

    def __init__(self, tbox: TBox, depth_bound: int | None = None):
        self.tbox = tbox
        self.depth_bound = depth_bound or default_depth(tbox)
        self._chased = {}
        self._consistent = {}
        self.saturations = 0

    def saturate(self, a: ABox) -> ChasedABox:
        c = self._chased.get(a)
        if c is None:
            c = saturate(a, self.tbox, self.depth_bound)
            self._chased[a] = c
            self.saturations += 1
        return c

    def consistent(self, a: ABox) -> bool:
        res = self._consistent.get(a)
        if res is None:
            res = next(violations(self.saturate(a), self.tbox), None) is None
            self._consistent[a] = res
        return res

    def answers(self, q, a: ABox, project=None) -> list:
        if not self.consistent(a):
            raise InconsistentState(f"ABox is inconsistent with the TBox: {a}")
        chased = self.saturate(a)
        if isinstance(q, UnionQuery):
            seen = {}
            for cq in q:
                for s in evaluate(chased, cq, project):
                    seen.setdefault(tuple(sorted(s.items())), s)
            return list(seen.values())
        return evaluate(chased, q, project)

    def entails(self, q, a: ABox) -> bool:
        """True iff ``a`` is consistent and ``q`` has a certain answer over it."""
        if not self.consistent(a):
            return False
        chased = self.saturate(a)
        for cq in as_union(q):
            if evaluate(chased, cq, project=()):
                return True
        return False

    def clear(self):
        self._chased.clear()
        self._consistent.clear()


__all__ = [
    "ChasedABox",
    "Reasoner",
    "Violation",
    "ans",
    "consistent",
    "default_depth",
    "evaluate",
    "first_violation",
    "holds",
    "saturate",
    "violations",
]

