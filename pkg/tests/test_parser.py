import pytest
from hypothesis import given, settings, strategies as st

from dkbplan.bench import RandomBounds, random_dkb
from dkbplan.dkb import ProblemSpec
from dkbplan.errors import MissingGoal, ParseError, ValidationError
from dkbplan.kb import Atom, Concept, ConceptInclusion, Exists, Role, RoleInclusion
from dkbplan.parser import dump_kb, load_kb, parse_kb, parse_query


def test_appendix_counts(appendix_kb):
    spec = load_kb(appendix_kb)
    assert len(spec.tbox.dl) == 22
    assert len(spec.tbox.sj) == 2
    assert len(spec.initial) == 6
    assert len(spec.actions) == 4
    assert len(list(spec.goal)) == 1


def test_only_abox_missing_goal():
    with pytest.raises(MissingGoal):
        parse_kb("[abox]\nA(a)\n")
    spec = parse_kb("[abox]\nA(a)\n", require_goal=False)
    assert spec.goal is None and len(spec.tbox) == 0 and spec.actions == ()


def test_free_effect_variable():
    with pytest.raises(ValidationError):
        parse_kb("[actions]\nbad(x): C(x) => R(x,y)\n[goal]\nC(?x)\n")
    with pytest.raises(ValidationError):
        parse_kb("[actions]\nbad(?x): C(?x) => R(?x,?y)\n[goal]\nC(?x)\n")


def test_bare_parameters_marked():
    spec = parse_kb("[actions]\nok(x,y): C(x), D(y) => R(x,y)\n[goal]\nR(?x,?y)\n")
    (act,) = spec.actions
    assert act.params == ("?x", "?y")
    assert act.effect == Atom("R", ("?x", "?y"))


def test_unknown_section():
    with pytest.raises(ValidationError, match="unknown section"):
        parse_kb("[stuff]\nA(a)\n")


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_kb("[abox]\nA(a)\nB(b\n")
    assert exc.value.line == 3
    with pytest.raises(ParseError) as exc:
        parse_kb("[tbox]\nA <= B\nnot A <= B\n[goal]\nA(?x)\n")
    assert exc.value.line == 3


def test_content_before_section():
    with pytest.raises(ParseError):
        parse_kb("A(a)\n")


def test_tbox_line_forms():
    text = """
    [tbox]
    A <= B
    A <= not B
    exists r <= B
    exists r- <= B
    A <= exists r . B
    A <= exists r-
    funct r
    s <= r
    s <= not t
    role u <= v-
    [abox]
    s(a,b)
    t(a,b)
    [goal]
    A(?x)
    """
    spec = parse_kb(text)
    dl = spec.tbox.dl
    assert ConceptInclusion(Concept("A"), Concept("B")) in dl
    assert ConceptInclusion(Concept("A"), Concept("B"), True) in dl
    assert ConceptInclusion(Exists(Role("r", True)), Concept("B")) in dl
    assert ConceptInclusion(Concept("A"), Exists(Role("r"), "B")) in dl
    assert RoleInclusion(Role("s"), Role("r")) in dl
    assert RoleInclusion(Role("s"), Role("t"), True) in dl
    assert RoleInclusion(Role("u"), Role("v", True)) in dl


def test_unicode_syntax():
    spec = parse_kb("[tbox]\nTechnician ⊑ ¬Manager\n∃assignedTo⁻ ⊑ Employee\n[goal]\nManager(?x)\n")
    assert ConceptInclusion(Concept("Technician"), Concept("Manager"), True) in spec.tbox.dl
    assert ConceptInclusion(Exists(Role("assignedTo", True)), Concept("Employee")) in spec.tbox.dl


def test_inverse_assertion_normalised():
    spec = parse_kb("[abox]\nassignedTo-(e002,d001)\n", require_goal=False)
    assert set(spec.initial) == {Atom("assignedTo", ("d001", "e002"))}


def test_goal_union():
    spec = parse_kb("[goal]\nA(?x)\nB(?x), r(?x,?y)\n")
    assert len(spec.goal.disjuncts) == 2


def test_parse_query():
    u = parse_query("Manager(?x), canManage(?y,?z) | Technician(?y)")
    assert [len(q) for q in u] == [2, 1]


def test_comments_ignored():
    spec = parse_kb("# header\n[abox]  # the data\nA(a)  # a fact\n", require_goal=False)
    assert len(spec.initial) == 1


def test_roundtrip_appendix(appendix_kb):
    spec = load_kb(appendix_kb)
    assert parse_kb(dump_kb(spec)) == spec


@settings(max_examples=60)
@given(st.integers(0, 10_000))
def test_roundtrip_random(seed):
    p = random_dkb(seed, RandomBounds(require_plan=False, max_states=50))
    spec = ProblemSpec(p.tbox, p.initial, p.actions, p.goal)
    assert parse_kb(dump_kb(spec)) == spec
