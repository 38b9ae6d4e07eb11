"""Term algebra and schema types for DL-Lite knowledge bases.

Terms are plain strings distinguished lexically:

* variables start with ``?`` (``?x``),
* labelled nulls start with ``_:`` (``_:n0``) and only ever live inside a
  chased ABox,
* everything else is a named constant (``e001``, ``reviewed``).

Atoms of arity one are concept atoms, atoms of arity two are role atoms.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .errors import MalformedAxiom

VAR_PREFIX = "?"
NULL_PREFIX = "_:"


def is_var(term: str) -> bool:
    return term.startswith(VAR_PREFIX)


def is_null(term: str) -> bool:
    return term.startswith(NULL_PREFIX)


def is_const(term: str) -> bool:
    return not (term.startswith(VAR_PREFIX) or term.startswith(NULL_PREFIX))


def var(name: str) -> str:
    """Mark ``name`` as a variable (idempotent)."""
    return name if name.startswith(VAR_PREFIX) else VAR_PREFIX + name


def null(index: int) -> str:
    return f"{NULL_PREFIX}n{index}"


@dataclass(frozen=True, order=True)
class Atom:
    pred: str
    args: tuple

    def __post_init__(self):
        if len(self.args) not in (1, 2):
            raise ValueError(f"atom {self.pred} must have arity 1 or 2, got {len(self.args)}")

    @property
    def is_concept(self) -> bool:
        return len(self.args) == 1

    @property
    def is_ground(self) -> bool:
        return not any(is_var(a) for a in self.args)

    def variables(self):
        return [a for a in self.args if is_var(a)]

    def __str__(self):
        return f"{self.pred}({','.join(self.args)})"

    __repr__ = __str__


def concept_atom(name: str, term: str) -> Atom:
    return Atom(name, (term,))


def role_atom(name: str, subj: str, obj: str, inverted: bool = False) -> Atom:
    """Build a role atom; inverse roles are stored in the atomic direction."""
    if inverted:
        subj, obj = obj, subj
    return Atom(name, (subj, obj))


# ---------------------------------------------------------------------------
# Concept and role expressions


@dataclass(frozen=True, order=True)
class Role:
    name: str
    inverted: bool = False

    def inverse(self) -> "Role":
        return Role(self.name, not self.inverted)

    def __str__(self):
        return self.name + ("⁻" if self.inverted else "")


@dataclass(frozen=True, order=True)
class Concept:
    """Atomic concept ``N``."""

    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, order=True)
class Exists:
    """Projection ``∃R`` or, with a filler, the qualified form ``∃R.C``."""

    role: Role
    filler: str | None = None

    def __str__(self):
        return f"∃{self.role}" + (f".{self.filler}" if self.filler else "")


@dataclass(frozen=True)
class Not:
    """Negated expression; only legal on the right-hand side of an inclusion."""

    expr: object

    def __str__(self):
        return f"¬{self.expr}"


BasicConcept = Union[Concept, Exists]


@dataclass(frozen=True, order=True)
class ConceptInclusion:
    lhs: BasicConcept
    rhs: BasicConcept
    negated: bool = False

    def __str__(self):
        return f"{self.lhs} ⊑ {'¬' if self.negated else ''}{self.rhs}"


@dataclass(frozen=True, order=True)
class RoleInclusion:
    lhs: Role
    rhs: Role
    negated: bool = False

    def normalized(self) -> "RoleInclusion":
        # R⁻ ⊑ S  is the same constraint as  R ⊑ S⁻
        if self.lhs.inverted:
            return RoleInclusion(self.lhs.inverse(), self.rhs.inverse(), self.negated)
        return self

    def __str__(self):
        return f"{self.lhs} ⊑ {'¬' if self.negated else ''}{self.rhs}"


@dataclass(frozen=True, order=True)
class Functionality:
    role: Role

    def __str__(self):
        return f"funct({self.role})"


Axiom = Union[ConceptInclusion, RoleInclusion, Functionality]


@dataclass(frozen=True, order=True)
class SimpleJoin:
    """``left(x) ∧ right(y) → role(x, y)``."""

    left: str
    right: str
    role: str

    @property
    def premise(self):
        return (concept_atom(self.left, "?x"), concept_atom(self.right, "?y"))

    @property
    def conclusion(self) -> Atom:
        return role_atom(self.role, "?x", "?y")

    def __str__(self):
        return f"{self.left}(x) ∧ {self.right}(y) → {self.role}(x,y)"


@dataclass(frozen=True)
class Rule:
    """Unvalidated rule as read from input; ``validate_tbox`` turns it into a SimpleJoin."""

    premise: tuple
    conclusion: Atom
    conclusion_inverted: bool = False


@dataclass(frozen=True)
class TBox:
    dl: frozenset = frozenset()
    sj: frozenset = frozenset()

    def axioms(self):
        """All DL axioms in a deterministic order."""
        return sorted(self.dl, key=str)

    def sj_conclusions(self) -> frozenset:
        return frozenset(ax.role for ax in self.sj)

    def predicates(self) -> set:
        preds = set()
        for ax in self.dl:
            preds |= _axiom_predicates(ax)
        for ax in self.sj:
            preds |= {ax.left, ax.right, ax.role}
        return preds

    def __len__(self):
        return len(self.dl) + len(self.sj)


def _expr_predicates(expr) -> set:
    if isinstance(expr, Concept):
        return {expr.name}
    if isinstance(expr, Exists):
        return {expr.role.name} | ({expr.filler} if expr.filler else set())
    if isinstance(expr, Role):
        return {expr.name}
    return set()


def _axiom_predicates(ax) -> set:
    if isinstance(ax, Functionality):
        return {ax.role.name}
    return _expr_predicates(ax.lhs) | _expr_predicates(ax.rhs)


def _check_basic(expr, where):
    if isinstance(expr, Not):
        raise MalformedAxiom(f"negation is not allowed on the {where}: {expr}")
    if not isinstance(expr, (Concept, Exists)):
        raise MalformedAxiom(f"expected a basic concept on the {where}, got {expr!r}")


def _validate_rule(rule: Rule) -> SimpleJoin:
    if len(rule.premise) != 2 or not all(a.is_concept for a in rule.premise):
        raise MalformedAxiom("simple join premise must be exactly two concept atoms")
    if rule.conclusion_inverted:
        raise MalformedAxiom("simple join conclusion must use an atomic role")
    if rule.conclusion.is_concept:
        raise MalformedAxiom("simple join conclusion must be a role atom")
    (p1, p2), concl = rule.premise, rule.conclusion
    x, y = p1.args[0], p2.args[0]
    if not (is_var(x) and is_var(y)) or x == y:
        raise MalformedAxiom("simple join premise must range over two distinct variables")
    if concl.args == (x, y):
        return SimpleJoin(p1.pred, p2.pred, concl.pred)
    if concl.args == (y, x):
        return SimpleJoin(p2.pred, p1.pred, concl.pred)
    raise MalformedAxiom(f"simple join conclusion {concl} does not join the premise variables")


def validate_tbox(axioms: Iterable) -> TBox:
    """Check axiom shapes and split them into DL-Lite axioms and simple joins."""
    dl, sj = set(), set()
    for ax in axioms:
        if isinstance(ax, (SimpleJoin, Rule)):
            sj.add(ax if isinstance(ax, SimpleJoin) else _validate_rule(ax))
        elif isinstance(ax, ConceptInclusion):
            _check_basic(ax.lhs, "left-hand side")
            if isinstance(ax.lhs, Exists) and ax.lhs.filler:
                raise MalformedAxiom(f"qualified existential on the left-hand side: {ax}")
            rhs, negated = ax.rhs, ax.negated
            if isinstance(rhs, Not):
                rhs, negated = rhs.expr, not negated
            _check_basic(rhs, "right-hand side")
            if negated and isinstance(rhs, Exists) and rhs.filler:
                raise MalformedAxiom(f"negated qualified existential: {ax}")
            dl.add(ConceptInclusion(ax.lhs, rhs, negated))
        elif isinstance(ax, RoleInclusion):
            if isinstance(ax.lhs, Not):
                raise MalformedAxiom(f"negation is not allowed on the left-hand side: {ax}")
            dl.add(ax.normalized())
        elif isinstance(ax, Functionality):
            dl.add(ax)
        else:
            raise MalformedAxiom(f"unknown axiom {ax!r}")
    return TBox(frozenset(dl), frozenset(sj))


# ---------------------------------------------------------------------------
# ABoxes


class ABox(frozenset):
    """A set of ground assertions; equality and hashing are extensional."""

    def __new__(cls, facts=()):
        facts = list(facts)
        for f in facts:
            if not isinstance(f, Atom) or not f.is_ground or any(is_null(a) for a in f.args):
                raise ValueError(f"ABox assertions must be ground atoms over constants: {f!r}")
        return super().__new__(cls, facts)

    @classmethod
    def _trusted(cls, facts) -> "ABox":
        return frozenset.__new__(cls, facts)

    def add(self, fact: Atom) -> "ABox":
        if fact in self:
            return self
        ABox((fact,))
        return ABox._trusted(frozenset.union(self, (fact,)))

    def union(self, *others) -> "ABox":
        return ABox(frozenset.union(self, *others))

    def sorted(self):
        return sorted(self, key=lambda a: (a.pred, a.args))

    def __repr__(self):
        return "ABox{" + ", ".join(map(str, self.sorted())) + "}"

    __str__ = __repr__


def adom(a: Iterable[Atom]) -> set:
    """Constants occurring in the assertions of ``a``."""
    return {t for fact in a for t in fact.args if is_const(t)}


def alph(t: TBox, a: Iterable[Atom]) -> set:
    """Concept and role names occurring in ``t`` and ``a``."""
    return t.predicates() | {fact.pred for fact in a}
