"""Reader and writer for the line-oriented ``.kb`` file format.

Example::

    [tbox]
    Technician <= Employee
    Technician <= not Manager
    exists assignedTo- <= Employee
    Technician <= exists canManage . TechnicalDoc
    funct assignedTo

    [sj]
    Technician(?x), TechnicalDoc(?y) -> canManage(?x,?y)

    [abox]
    Manager(e001)

    [actions]
    appoint(?x,?y,?z) : Manager(?x), canManage(?y,?z) => assignedTo(?z,?y)

    [goal]
    assignedTo(d001,?y)

Whether a bare inclusion ``A <= B`` relates concepts or roles is decided by
how the names are used elsewhere in the file (binary atoms, ``exists``,
``funct``); a leading ``role`` keyword forces the role reading.
"""
from __future__ import annotations

import re

from .dkb import Action, ProblemSpec
from .errors import MalformedAxiom, MissingGoal, ParseError, ValidationError
from .kb import (
    ABox,
    Atom,
    Concept,
    ConceptInclusion,
    Exists,
    Functionality,
    Role,
    RoleInclusion,
    Rule,
    SimpleJoin,
    TBox,
    is_var,
    role_atom,
    validate_tbox,
)
from .query import ConjunctiveQuery, UnionQuery

SECTIONS = ("tbox", "sj", "abox", "actions", "goal")

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_ATOM = re.compile(rf"\s*({_NAME})\s*(-|⁻)?\s*\(([^()]*)\)\s*")
_TERM = re.compile(r"\??[A-Za-z0-9_][A-Za-z0-9_.:-]*$")
_HEADER = re.compile(rf"\s*({_NAME})\s*\(([^()]*)\)\s*:(.*)$")
# bare single letters act as variables inside actions written without '?'
_BARE_VAR = re.compile(r"[a-z]$")


class _Line:
    def __init__(self, number, text, offset=0):
        self.number = number
        self.text = text
        self.offset = offset

    def error(self, message, pos=0):
        return ParseError(message, self.number, self.offset + pos + 1)


def _split_top(text: str, sep: str = ","):
    """Split on ``sep`` outside parentheses, returning (start, piece) pairs."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append((start, text[start:i]))
            start = i + 1
    parts.append((start, text[start:]))
    return parts


def _parse_atom(line: _Line, text: str, pos: int, bare_vars=frozenset(), allow_inverse=True) -> Atom:
    m = _ATOM.fullmatch(text)
    if not m:
        raise line.error(f"expected an atom, got {text.strip()!r}", pos)
    name, inv, body = m.group(1), m.group(2), m.group(3)
    args = []
    for start, raw in _split_top(body):
        t = raw.strip()
        if not t or not _TERM.match(t):
            raise line.error(f"bad term {t!r}", pos + m.start(3) + start)
        if t.startswith("_:"):
            raise line.error(f"labelled nulls are not allowed in input: {t}", pos + m.start(3) + start)
        if t in bare_vars:
            t = "?" + t
        args.append(t)
    if len(args) not in (1, 2):
        raise line.error(f"{name} has arity {len(args)}; expected 1 or 2", pos)
    if inv:
        if len(args) != 2 or not allow_inverse:
            raise line.error(f"inverse marker on {name} is only allowed on role atoms", pos)
        return role_atom(name, args[0], args[1], inverted=True)
    return Atom(name, tuple(args))


def _parse_atoms(line: _Line, text: str, pos: int, bare_vars=frozenset()):
    if not text.strip():
        raise line.error("expected at least one atom", pos)
    return [_parse_atom(line, piece, pos + start, bare_vars) for start, piece in _split_top(text)]


def _normalize(text: str) -> str:
    return (
        text.replace("⊑", "<=")
        .replace("¬", " not ")
        .replace("∃", " exists ")
        .replace("→", "->")
        .replace("⇝", "=>")
    )


# ---------------------------------------------------------------------------
# tbox lines


_ROLE_TOKEN = re.compile(rf"({_NAME})\s*(-|⁻)?$")


def _role(line, text, pos) -> Role:
    m = _ROLE_TOKEN.fullmatch(text.strip())
    if not m:
        raise line.error(f"expected a role name, got {text.strip()!r}", pos)
    return Role(m.group(1), bool(m.group(2)))


def _concept_expr(line, text, pos):
    s = text.strip()
    negated = False
    if s.startswith("not "):
        negated, s = True, s[4:].strip()
    if s.startswith("exists "):
        body = s[7:]
        if "." in body:
            r, filler = body.split(".", 1)
            filler = filler.strip()
            if not re.fullmatch(_NAME, filler):
                raise line.error(f"bad filler {filler!r}", pos)
            return negated, Exists(_role(line, r, pos), filler)
        return negated, Exists(_role(line, body, pos))
    if not re.fullmatch(_NAME, s):
        raise line.error(f"expected a concept, got {s!r}", pos)
    return negated, Concept(s)


def _tbox_axiom(line: _Line, roles: set):
    s = _normalize(line.text).strip()
    if s.startswith("funct "):
        return Functionality(_role(line, s[6:], 6))
    forced = False
    if s.startswith("role "):
        forced, s = True, s[5:].strip()
    if "<=" not in s:
        raise line.error("expected an inclusion 'A <= B' or 'funct R'")
    lhs, rhs = s.split("<=", 1)
    rpos = len(lhs) + 2
    lneg = lhs.strip().startswith("not ")
    rneg = rhs.strip().startswith("not ")
    rcore = rhs.strip()[4:] if rneg else rhs.strip()
    lcore = lhs.strip()[4:] if lneg else lhs.strip()
    plain = [x for x in (lcore, rcore) if not x.strip().startswith("exists ")]
    is_role = len(plain) == 2 and (
        forced
        or any(x.strip().endswith(("-", "⁻")) for x in plain)
        or any(x.strip() in roles for x in plain)
    )
    if lneg:
        raise line.error("negation is not allowed on the left-hand side")
    if is_role:
        return RoleInclusion(_role(line, lcore, 0), _role(line, rcore, rpos), rneg)
    if forced:
        raise line.error("'role' inclusions must relate two roles")
    _, left = _concept_expr(line, lcore, 0)
    negated, right = _concept_expr(line, rhs, rpos)
    return ConceptInclusion(left, right, negated)


def _role_names_in_tbox_line(text: str) -> set:
    s = _normalize(text)
    names = set(re.findall(rf"exists\s+({_NAME})", s))
    m = re.match(rf"\s*funct\s+({_NAME})", s)
    if m:
        names.add(m.group(1))
    m = re.match(rf"\s*role\s+({_NAME})\s*[-⁻]?\s*<=\s*(?:not\s+)?({_NAME})", s)
    if m:
        names.update(m.groups())
    for m in re.finditer(rf"({_NAME})\s*[-⁻]", s):
        names.add(m.group(1))
    return names


# ---------------------------------------------------------------------------


def _sections(text: str):
    current = None
    out = {}
    for i, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        m = re.fullmatch(r"\s*\[\s*(\w+)\s*\]\s*", body)
        if m:
            current = m.group(1).lower()
            if current not in SECTIONS:
                raise ValidationError(f"line {i}: unknown section [{current}]")
            out.setdefault(current, [])
            continue
        if current is None:
            raise ParseError("content before the first section header", i, 1)
        out[current].append(_Line(i, body))
    return out


def _parse_action(line: _Line) -> Action:
    text = _normalize(line.text)
    m = _HEADER.match(text)
    if not m:
        raise line.error("expected 'name(params) : guard => effect'")
    name, params_raw, rest = m.group(1), m.group(2), m.group(3)
    params = [p.strip() for p in params_raw.split(",") if p.strip()]
    bare = frozenset(p for p in params if not is_var(p))
    if bare:
        bare = bare | {t for t in re.findall(r"[(,]\s*([A-Za-z0-9_]+)\s*(?=[,)])", rest) if _BARE_VAR.match(t)}
    if "=>" not in rest:
        raise line.error("missing '=>' between guard and effect", m.start(3))
    guard_txt, eff_txt = rest.split("=>", 1)
    gpos = m.start(3)
    epos = gpos + len(guard_txt) + 2
    guard = _parse_atoms(line, guard_txt, gpos, bare)
    effect = _parse_atoms(line, eff_txt, epos, bare)
    if len(effect) != 1:
        raise line.error("an action has exactly one effect atom", epos)
    try:
        return Action(name, tuple(params), ConjunctiveQuery(tuple(guard)), effect[0])
    except ValidationError as exc:
        raise ValidationError(f"line {line.number}: {exc}") from None


def parse_kb(text: str, require_goal: bool = True) -> ProblemSpec:
    sec = _sections(text)

    sj_rules = []
    for line in sec.get("sj", ()):
        s = _normalize(line.text)
        if "->" not in s:
            raise line.error("expected 'N1(?x), N2(?y) -> R(?x,?y)'")
        prem, concl = s.split("->", 1)
        premise = _parse_atoms(line, prem, 0)
        conclusion = _parse_atoms(line, concl, len(prem) + 2)
        if len(conclusion) != 1:
            raise line.error("a simple join has exactly one conclusion atom", len(prem) + 2)
        try:
            sj_rules.append((line, validate_tbox([Rule(tuple(premise), conclusion[0])]).sj))
        except MalformedAxiom as exc:
            raise ParseError(str(exc), line.number, 1) from None

    abox = [_parse_atom(line, _normalize(line.text), 0) for line in sec.get("abox", ())]
    for f in abox:
        if not f.is_ground:
            raise ValidationError(f"ABox assertion {f} contains a variable")
    actions = [_parse_action(line) for line in sec.get("actions", ())]

    goal_lines = sec.get("goal", ())
    disjuncts = []
    for line in goal_lines:
        atoms = _parse_atoms(line, _normalize(line.text), 0)
        disjuncts.append(ConjunctiveQuery(tuple(atoms)))

    roles = {f.pred for f in abox if not f.is_concept}
    roles |= {a.pred for act in actions for a in (*act.guard, act.effect) if not a.is_concept}
    roles |= {a.pred for q in disjuncts for a in q if not a.is_concept}
    roles |= {ax.role for _, sj in sj_rules for ax in sj}
    for line in sec.get("tbox", ()):
        roles |= _role_names_in_tbox_line(line.text)

    axioms = []
    for line in sec.get("tbox", ()):
        ax = _tbox_axiom(line, roles)
        try:
            validate_tbox([ax])
        except MalformedAxiom as exc:
            raise ParseError(str(exc), line.number, 1) from None
        axioms.append(ax)
    axioms.extend(ax for _, sj in sj_rules for ax in sj)
    tbox = validate_tbox(axioms)

    goal = UnionQuery(tuple(disjuncts)) if disjuncts else None
    if goal is None and require_goal:
        raise MissingGoal("the KB has no [goal] section")
    return ProblemSpec(tbox, ABox(abox), tuple(actions), goal)


def parse_query(text: str) -> UnionQuery:
    """Parse a query string; disjuncts are separated by '|' or newlines."""
    parts = [p for p in re.split(r"\||\n", text) if p.strip()]
    if not parts:
        raise ParseError("empty query", 1, 1)
    return UnionQuery(
        tuple(ConjunctiveQuery(tuple(_parse_atoms(_Line(1, p), _normalize(p), 0))) for p in parts)
    )


def load_kb(path, require_goal: bool = True) -> ProblemSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_kb(fh.read(), require_goal)


# ---------------------------------------------------------------------------
# writing


def _fmt_role(r: Role) -> str:
    return r.name + ("-" if r.inverted else "")


def _fmt_basic(e) -> str:
    if isinstance(e, Concept):
        return e.name
    return f"exists {_fmt_role(e.role)}" + (f" . {e.filler}" if e.filler else "")


def format_axiom(ax) -> str:
    if isinstance(ax, Functionality):
        return f"funct {_fmt_role(ax.role)}"
    neg = "not " if ax.negated else ""
    if isinstance(ax, RoleInclusion):
        return f"role {_fmt_role(ax.lhs)} <= {neg}{_fmt_role(ax.rhs)}"
    return f"{_fmt_basic(ax.lhs)} <= {neg}{_fmt_basic(ax.rhs)}"


def format_sj(ax: SimpleJoin) -> str:
    return f"{ax.left}(?x), {ax.right}(?y) -> {ax.role}(?x,?y)"


def _fmt_atoms(atoms) -> str:
    return ", ".join(map(str, atoms))


def format_action(act: Action) -> str:
    return f"{act.name}({','.join(act.params)}) : {_fmt_atoms(act.guard)} => {act.effect}"


def dump_kb(spec: ProblemSpec) -> str:
    out = ["[tbox]"]
    out += [format_axiom(ax) for ax in spec.tbox.axioms()]
    out += ["", "[sj]"]
    out += [format_sj(ax) for ax in sorted(spec.tbox.sj, key=str)]
    out += ["", "[abox]"]
    out += [str(f) for f in spec.initial.sorted()]
    out += ["", "[actions]"]
    out += [format_action(a) for a in spec.actions]
    if spec.goal is not None:
        out += ["", "[goal]"]
        out += [_fmt_atoms(q) for q in spec.goal]
    return "\n".join(out) + "\n"


def save_kb(spec: ProblemSpec, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_kb(spec))
