"""Planning over DL-Lite dynamic knowledge bases.

Forward planning, abstract backward planning and forward plan
instantiation, on top of a small chase-based DL-Lite reasoner.
"""
from .backward import AbstractPlanningGraph, abstract_backward_plan, fully_resolve, prev_a, resolve
from .casegen import ScenarioParams, appendix_fixture, generate
from .dkb import DKB, Action, PlanningProblem, ProblemSpec, apply_action, make_problem, next_transitions, well_formed
from .forward import (
    PlanningGraph,
    RunMetrics,
    SearchConfig,
    count_plans,
    edges_to,
    extract_plans,
    forward_plan,
    redundant,
)
from .instantiate import abp_fpi, fpi, next_a
from .kb import ABox, Atom, TBox, adom, alph, validate_tbox
from .parser import dump_kb, load_kb, parse_kb, parse_query
from .query import CQ, ConjunctiveQuery, UnionQuery, apply, canonicalize, rename_apart, unify
from .reasoner import Reasoner, ans, consistent, holds, saturate

__version__ = "0.1.0"
