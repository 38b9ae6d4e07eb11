"""Conjunctive queries, unions of them, substitutions and unification.

Substitutions are plain ``dict`` objects from variables to terms.  Where a
hashable form is needed (planning-graph edges, plans) they are frozen into a
sorted tuple of pairs with :func:`freeze`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .kb import Atom, is_const, is_null, is_var

Substitution = dict
FrozenSubst = tuple


def freeze(s: Mapping) -> FrozenSubst:
    return tuple(sorted(s.items()))


def format_subst(s) -> str:
    items = s if isinstance(s, tuple) else freeze(s)
    return "{" + ", ".join(f"{k}↦{v}" for k, v in items) + "}"


@dataclass(frozen=True)
class ConjunctiveQuery:
    atoms: tuple

    def __post_init__(self):
        for a in self.atoms:
            if any(is_null(t) for t in a.args):
                raise ValueError(f"labelled nulls are not allowed in queries: {a}")

    @classmethod
    def of(cls, *atoms: Atom) -> "ConjunctiveQuery":
        return cls(tuple(atoms))

    def variables(self) -> list:
        """Variables in order of first occurrence."""
        seen = {}
        for a in self.atoms:
            for t in a.args:
                if is_var(t):
                    seen.setdefault(t, None)
        return list(seen)

    def constants(self) -> set:
        return {t for a in self.atoms for t in a.args if is_const(t)}

    def predicates(self) -> set:
        return {a.pred for a in self.atoms}

    def dedup(self) -> "ConjunctiveQuery":
        return ConjunctiveQuery(tuple(dict.fromkeys(self.atoms)))

    def __and__(self, other: "ConjunctiveQuery") -> "ConjunctiveQuery":
        return ConjunctiveQuery(self.atoms + other.atoms).dedup()

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __str__(self):
        return " ∧ ".join(map(str, self.atoms)) if self.atoms else "⊤"

    __repr__ = __str__


CQ = ConjunctiveQuery


@dataclass(frozen=True)
class UnionQuery:
    disjuncts: tuple

    def __post_init__(self):
        if not self.disjuncts:
            raise ValueError("a union of conjunctive queries needs at least one disjunct")

    @classmethod
    def of(cls, *cqs) -> "UnionQuery":
        return cls(tuple(cqs))

    def predicates(self) -> set:
        return set().union(*(q.predicates() for q in self.disjuncts))

    def __iter__(self):
        return iter(self.disjuncts)

    def __str__(self):
        return " ∨ ".join(f"({q})" for q in self.disjuncts)


def as_union(q) -> UnionQuery:
    if isinstance(q, UnionQuery):
        return q
    if isinstance(q, Atom):
        q = ConjunctiveQuery((q,))
    return UnionQuery((q,))


# ---------------------------------------------------------------------------
# Substitutions


def _walk(t, s):
    while t in s:
        t = s[t]
    return t


def unify(a: Atom, b: Atom) -> Substitution | None:
    """Most general unifier of two atoms, or ``None``.

    When two variables meet, the variable from ``a`` is bound to the term of
    ``b``; resolution relies on this to keep the goal's variable names.
    """
    if a.pred != b.pred or len(a.args) != len(b.args):
        return None
    s = {}
    for u, v in zip(a.args, b.args):
        u, v = _walk(u, s), _walk(v, s)
        if u == v:
            continue
        if is_var(u):
            s[u] = v
        elif is_var(v):
            s[v] = u
        else:
            return None
    return {k: _walk(k, s) for k in s}


def compose(first: Mapping, second: Mapping) -> Substitution:
    """Substitution equivalent to applying ``first`` and then ``second``."""
    out = {k: second.get(v, v) for k, v in first.items()}
    for k, v in second.items():
        out.setdefault(k, v)
    return {k: v for k, v in out.items() if k != v}


def apply_atom(s: Mapping, a: Atom) -> Atom:
    return Atom(a.pred, tuple(s.get(t, t) for t in a.args))


def apply(s: Mapping, q):
    """Apply a substitution to an atom, a CQ or a UCQ."""
    if isinstance(q, Atom):
        return apply_atom(s, q)
    if isinstance(q, UnionQuery):
        return UnionQuery(tuple(apply(s, d) for d in q.disjuncts))
    return ConjunctiveQuery(tuple(apply_atom(s, a) for a in q.atoms))


def rename_apart(q: ConjunctiveQuery, avoid: Iterable[str], extra: Iterable[Atom] = ()):
    """Rename the variables of ``q`` (and of ``extra`` atoms) away from ``avoid``.

    Returns ``(renamed_query, renamed_extra, renaming)``; callers that only
    care about the query can use :func:`fresh_copy`.
    """
    extra = tuple(extra)
    avoid = set(avoid)
    names = ConjunctiveQuery(q.atoms + extra).variables()
    taken = avoid | set(names)
    renaming = {}
    for v in names:
        if v not in avoid:
            continue
        base = v.rstrip("0123456789")
        for i in itertools.count():
            cand = f"{base}{i}"
            if cand not in taken:
                break
        renaming[v] = cand
        taken.add(cand)
    return apply(renaming, q), tuple(apply_atom(renaming, a) for a in extra), renaming


def fresh_copy(q: ConjunctiveQuery, avoid: Iterable[str]) -> ConjunctiveQuery:
    return rename_apart(q, avoid)[0]


# ---------------------------------------------------------------------------
# Canonical forms


def _arg_key(t):
    # constants sort before variables
    return (1, int(t[2:])) if is_var(t) else (0, t)


def _atom_key(a: Atom):
    return (a.pred, tuple(_arg_key(t) for t in a.args))


def _colour_refine(atoms, variables):
    colour = {v: 0 for v in variables}
    for _ in range(len(variables) + 1):
        sig = {}
        for v in variables:
            occ = []
            for a in atoms:
                for pos, t in enumerate(a.args):
                    if t != v:
                        continue
                    others = tuple(
                        ("v", colour[u]) if is_var(u) else ("c", u)
                        for u in a.args
                    )
                    occ.append((a.pred, pos, others))
            sig[v] = (colour[v], tuple(sorted(occ)))
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: ranks[sig[v]] for v in variables}
        if len(set(new.values())) == len(set(colour.values())):
            return new
        colour = new
    return colour


def canonical_renaming(q: ConjunctiveQuery):
    """Return ``(canonical_query, renaming)`` with renaming mapping q's variables to ``?vN``."""
    atoms = list(dict.fromkeys(q.atoms))
    variables = ConjunctiveQuery(tuple(atoms)).variables()
    if not variables:
        return ConjunctiveQuery(tuple(sorted(atoms, key=_atom_key))), {}
    colour = _colour_refine(atoms, variables)
    classes = {}
    for v in sorted(variables, key=lambda v: colour[v]):
        classes.setdefault(colour[v], []).append(v)
    groups = [classes[c] for c in sorted(classes)]

    best = None
    for perms in itertools.product(*(itertools.permutations(g) for g in groups)):
        order = [v for p in perms for v in p]
        renaming = {v: f"?v{i}" for i, v in enumerate(order)}
        key = tuple(sorted((_atom_key(apply_atom(renaming, a)) for a in atoms)))
        if best is None or key < best[0]:
            best = (key, renaming)
    renaming = best[1]
    canon = tuple(sorted((apply_atom(renaming, a) for a in atoms), key=_atom_key))
    return ConjunctiveQuery(canon), renaming


def canonicalize(q: ConjunctiveQuery) -> ConjunctiveQuery:
    """Representative of q's class under variable renaming and atom reordering."""
    return canonical_renaming(q)[0]
