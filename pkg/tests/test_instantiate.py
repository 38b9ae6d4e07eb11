from hypothesis import given, settings, strategies as st

from dkbplan.backward import AbstractPlanningGraph, abstract_backward_plan
from dkbplan.bench import check_inclusion, random_dkb
from dkbplan.casegen import appendix_fixture, scenario
from dkbplan.dkb import make_problem, next_transitions
from dkbplan.forward import SearchConfig, Step, extract_plans, forward_plan
from dkbplan.instantiate import abp_fpi, fpi, next_a
from dkbplan.kb import ABox, Atom
from dkbplan.query import freeze


def A(p, *args):
    return Atom(p, tuple(args))


APPOINT = freeze({"?x": "e001", "?y": "e002", "?z": "d001"})


def test_next_a_greeting(greeting):
    g = abstract_backward_plan(greeting)
    trs = next_a(greeting, greeting.initial, g)
    assert [(t.action.name, t.subst) for t in trs] == [("appoint", APPOINT)]
    assert trs[0].target == greeting.initial.add(A("assignedTo", "d001", "e002"))


def test_next_a_empty_abstract(greeting):
    assert next_a(greeting, greeting.initial, AbstractPlanningGraph()) == []


def test_fpi_greeting(greeting):
    g, m = fpi(greeting, abstract_backward_plan(greeting))
    a1 = greeting.initial.add(A("assignedTo", "d001", "e002"))
    assert (m.edges, m.visited, m.inconsistent) == (1, 2, 0)
    assert g.visited == {greeting.initial, a1}
    assert extract_plans(g) == {(Step("appoint", APPOINT),)}


def test_next_a_dead_instantiation():
    p = appendix_fixture()
    dead_start = ABox([A("TechnicalDoc", "d001"), A("UrgentDoc", "d001"), A("Manager", "e001"), A("Administrative", "e003")])
    reasoner = p.reasoner()
    assert reasoner.consistent(dead_start)
    trs = next_a(p, dead_start, abstract_backward_plan(p), reasoner)
    adm = [t for t in trs if t.action.name == "setAdmDoc" and dict(t.subst)["?y"] == "d001"]
    assert adm
    assert not any(reasoner.consistent(t.target) for t in adm)


def test_fpi_goal_at_initial(greeting):
    p = make_problem(greeting.tbox, greeting.initial, greeting.actions, A("Manager", "e001"))
    g, m = fpi(p, abstract_backward_plan(p))
    assert g.edges == set() and m.visited == 1


def test_fpi_no_pairs():
    p = appendix_fixture()
    g, m = fpi(p, AbstractPlanningGraph())
    assert g.edges == set() and g.visited == {p.initial}


def test_case_study_111_identical_graphs():
    p = scenario(1, 1, 1)
    fp_graph, _ = forward_plan(p)
    _, fpi_graph, m = abp_fpi(p)
    assert (m.edges, m.visited, m.inconsistent) == (3, 7, 3)
    assert fp_graph.triples() == fpi_graph.triples()
    assert extract_plans(fp_graph) == extract_plans(fpi_graph)
    assert fpi_graph.composed.abstract_states == 7


def test_abp_fpi_timeout_budget():
    _, _, m = abp_fpi(scenario(2, 3, 3), SearchConfig(timeout_s=0.0))
    assert m.timed_out


def test_example_inclusion(greeting):
    v = check_inclusion(greeting)
    assert v.included and v.missing_nonredundant == []
    v = check_inclusion(scenario(1, 1, 1))
    assert v.included and v.fp_plans == v.fpi_plans


@settings(max_examples=40)
@given(st.integers(0, 100_000))
def test_next_a_subset_of_next(seed):
    p = random_dkb(seed)
    reasoner = p.reasoner()
    abstract = abstract_backward_plan(p, reasoner)
    g, _ = forward_plan(p, reasoner=reasoner)
    for a in g.visited - g.inconsistent:
        full = {(t.action.name, t.subst) for t in next_transitions(p.tbox, a, p.actions, reasoner)}
        restricted = {(t.action.name, t.subst) for t in next_a(p, a, abstract, reasoner)}
        assert restricted <= full


@settings(max_examples=40)
@given(st.integers(0, 100_000))
def test_edge_inclusion(seed):
    p = random_dkb(seed)
    fp_graph, _ = forward_plan(p)
    _, fpi_graph, _ = abp_fpi(p)
    assert fpi_graph.triples() <= fp_graph.triples()
