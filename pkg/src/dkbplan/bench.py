"""Benchmark harness comparing forward planning with ABP+FPI."""
from __future__ import annotations

import csv
import io
import random
import re
from dataclasses import dataclass, field, fields
from statistics import mean

from .backward import abstract_backward_plan
from .casegen import GRID_CELLS, ScenarioParams, generate
from .dkb import Action, PlanningProblem, make_problem, well_formed
from .errors import GenerationExhausted, InconsistentState, InvalidParams, InvalidRepetitions, ValidationError
from .forward import PlanningGraph, SearchConfig, count_plans, extract_plans, forward_plan, iter_plans
from .instantiate import fpi
from .kb import (
    Atom,
    Concept,
    ConceptInclusion,
    Exists,
    Functionality,
    Role,
    RoleInclusion,
    SimpleJoin,
    validate_tbox,
)
from .query import ConjunctiveQuery

FP, FPI = "FP", "ABP+FPI"

# reference (|P|, |V|, Inc, seconds); None marks a run over 200 s
REFERENCE = {
    (1, 1, 1): {FP: (3, 17, 13, 0.06), FPI: (3, 7, 3, 0.07)},
    (1, 1, 2): {FP: (9, 38, 29, 0.48), FPI: (5, 10, 4, 0.30)},
    (1, 1, 3): {FP: (25, 87, 66, 0.28), FPI: (7, 13, 5, 0.10)},
    (1, 2, 2): {FP: (50, 154, 116, 0.71), FPI: (10, 15, 4, 0.15)},
    (2, 2, 2): {FP: (80, 172, 134, 1.35), FPI: (16, 16, 5, 0.22)},
    (2, 2, 3): {FP: (270, 413, 291, 3.42), FPI: (22, 21, 6, 0.18)},
    (2, 3, 3): {FP: (816, 1802, 1290, 33.16), FPI: (33, 28, 6, 0.24)},
    (20, 20, 20): {FP: None, FPI: (8800, 862, 41, 197.40)},
}


# ---------------------------------------------------------------------------
# plan statistics


def _step_index(graph: PlanningGraph) -> dict:
    return {(e.source, e.action, e.subst): graph.target(e) for e in graph.edges}


def redundant_in_graph(plan, graph: PlanningGraph, index=None) -> bool:
    """True iff some proper subsequence of ``plan`` is itself a plan of ``graph``."""
    index = index if index is not None else _step_index(graph)

    def rec(state, i, taken):
        if state in graph.goals and taken:
            return taken < len(plan)
        for j in range(i, len(plan)):
            nxt = index.get((state, plan[j].action, plan[j].subst))
            if nxt is not None and rec(nxt, j + 1, taken + 1):
                return True
        return False

    return rec(graph.root, 0, 0)


def plan_stats(graph: PlanningGraph, limit: int = 50_000):
    """``(plan count, redundant count)``; redundancy is None above ``limit`` plans."""
    n = count_plans(graph)
    if n > limit:
        return n, None
    index = _step_index(graph)
    return n, sum(redundant_in_graph(p, graph, index) for p in iter_plans(graph))


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class BenchRow:
    mng: int
    emp: int
    techdoc: int
    algo: str
    P: int | None
    V: int | None
    Inc: int | None
    time_s: float | None
    plans: int | None
    redundant: int | None
    timeout: bool
    pair: str = ""
    ref_P: int | None = None
    ref_V: int | None = None
    ref_Inc: int | None = None
    ref_time_s: float | None = None

    @property
    def cell(self):
        return (self.mng, self.emp, self.techdoc)


CSV_COLUMNS = ["mng", "emp", "techdoc", "algo", "P", "V", "Inc", "time_s", "plans", "redundant", "timeout"]
REFERENCE_COLUMNS = ["ref_P", "ref_V", "ref_Inc", "ref_time_s"]


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)

    def row(self, cell, algo) -> BenchRow:
        for r in self.rows:
            if r.cell == tuple(cell) and r.algo == algo:
                return r
        raise KeyError((cell, algo))

    def pairs(self):
        cells = list(dict.fromkeys(r.cell for r in self.rows))
        return [(self.row(c, FP), self.row(c, FPI)) for c in cells]

    def to_csv(self, reference: bool = True) -> str:
        cols = CSV_COLUMNS + (REFERENCE_COLUMNS if reference else [])
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.rows:
            vals = []
            for c in cols:
                v = getattr(r, c)
                if c in ("P", "V", "Inc", "time_s") and r.timeout:
                    v = "inf"
                elif isinstance(v, float):
                    v = f"{v:.4f}"
                elif isinstance(v, bool):
                    v = str(v).lower()
                vals.append("" if v is None else v)
            w.writerow(vals)
        return buf.getvalue()

    def format_table(self) -> str:
        head = f"{'cell':>9} | {'FP P/V/Inc':>18} {'time':>8} | {'FPI P/V/Inc':>14} {'time':>7} | {'ref FP':>14} | {'ref FPI':>12}"
        out = [head, "-" * len(head)]
        for fp, fi in self.pairs():
            def trip(r):
                return "∞" if r.timeout else f"{r.P}/{r.V}/{r.Inc}"

            def tm(r):
                return "∞" if r.timeout else f"{r.time_s:.3f}"

            def ref(r):
                return "∞" if r.ref_P is None else f"{r.ref_P}/{r.ref_V}/{r.ref_Inc}"

            cell = "/".join(map(str, fp.cell))
            out.append(
                f"{cell:>9} | {trip(fp):>18} {tm(fp):>8} | {trip(fi):>14} {tm(fi):>7} | {ref(fp):>14} | {ref(fi):>12}"
            )
        return "\n".join(out)


def _run(algo, problem, cfg):
    reasoner = problem.reasoner()
    if algo == FP:
        return forward_plan(problem, cfg, reasoner)
    abstract = abstract_backward_plan(problem, reasoner)
    graph, m = fpi(problem, abstract, cfg, reasoner)
    return graph, m


def run_cell(params: ScenarioParams, algo: str, repetitions: int = 1, timeout_s: float | None = 200.0,
             stats_limit: int = 50_000) -> BenchRow:
    problem = generate(params)
    cfg = SearchConfig(timeout_s=timeout_s)
    times, graph, m = [], None, None
    for _ in range(repetitions):
        graph, m = _run(algo, problem, cfg)
        if m.timed_out:
            break
        times.append(m.time_s)
    ref = REFERENCE.get((params.n_managers, params.n_employees, params.n_techdocs), {}).get(algo)
    ref = ref or (None, None, None, None)
    cell = (params.n_managers, params.n_employees, params.n_techdocs)
    if m.timed_out:
        return BenchRow(*cell, algo, None, None, None, None, None, None, True, params.cell, *ref)
    plans, red = plan_stats(graph, stats_limit)
    return BenchRow(*cell, algo, m.edges, m.visited, m.inconsistent, mean(times), plans, red, False,
                    params.cell, *ref)


def run_grid(grid, repetitions: int = 1, timeout_s: float | None = 200.0, stats_limit: int = 50_000,
             algos=(FP, FPI)) -> BenchReport:
    """Run every algorithm on every cell; FP and FPI rows of a cell share ``pair``."""
    if not isinstance(repetitions, int) or repetitions < 1:
        raise InvalidRepetitions(f"repetitions must be a positive integer, got {repetitions!r}")
    report = BenchReport()
    for params in grid:
        if isinstance(params, tuple):
            params = ScenarioParams(*params)
        for algo in algos:
            report.rows.append(run_cell(params, algo, repetitions, timeout_s, stats_limit))
    return report


def parse_grid(spec: str) -> list:
    """``"reference"``, ``""`` or ``"mng=1..2,emp=1..3,doc=1..3"`` to a list of params."""
    spec = spec.strip()
    if not spec:
        return []
    if spec.lower() == "reference":
        return [ScenarioParams(*c) for c in GRID_CELLS]
    ranges = {}
    for part in spec.split(","):
        m = re.fullmatch(r"\s*(mng|emp|doc|techdoc)\s*=\s*(\d+)(?:\s*\.\.\s*(\d+))?\s*", part)
        if not m:
            raise InvalidParams(f"bad grid component {part!r}")
        lo = int(m.group(2))
        hi = int(m.group(3)) if m.group(3) else lo
        if hi < lo:
            raise InvalidParams(f"empty range in {part!r}")
        key = "doc" if m.group(1) == "techdoc" else m.group(1)
        ranges[key] = range(lo, hi + 1)
    missing = {"mng", "emp", "doc"} - set(ranges)
    if missing:
        raise InvalidParams(f"grid needs mng, emp and doc; missing {sorted(missing)}")
    out = []
    for m_ in ranges["mng"]:
        for e in ranges["emp"]:
            for d in ranges["doc"]:
                p = ScenarioParams(m_, e, d)
                p.validate()
                out.append(p)
    return out


# ---------------------------------------------------------------------------
# random problems


@dataclass(frozen=True)
class RandomBounds:
    max_actions: int = 3
    max_constants: int = 4
    max_axioms: int = 6
    max_sj: int = 2
    n_concepts: int = 4
    n_roles: int = 2
    max_states: int = 400
    retries: int = 500
    require_plan: bool = True

    def __post_init__(self):
        if self.max_actions > 4 or self.max_constants > 6 or self.max_axioms > 8 or self.max_sj > 2:
            raise InvalidParams("bounds exceed 4 actions, 6 constants, 8 axioms, 2 simple joins")


def _random_tbox(rng, concepts, roles, joins, b):
    axioms = []
    n = rng.randint(1, b.max_axioms)
    disjoint_used = False
    for _ in range(n):
        kind = rng.choice(["sub", "sub", "dom", "ran", "exists", "neg", "funct", "role"])
        if kind == "neg" and disjoint_used:
            kind = "sub"
        c1, c2 = rng.sample(concepts, 2)
        r = rng.choice(roles)
        if kind == "sub":
            axioms.append(ConceptInclusion(Concept(c1), Concept(c2)))
        elif kind == "dom":
            axioms.append(ConceptInclusion(Exists(Role(r)), Concept(c1)))
        elif kind == "ran":
            axioms.append(ConceptInclusion(Exists(Role(r, True)), Concept(c1)))
        elif kind == "exists":
            axioms.append(ConceptInclusion(Concept(c1), Exists(Role(r, rng.random() < 0.5))))
        elif kind == "neg":
            disjoint_used = True
            axioms.append(ConceptInclusion(Concept(c1), Concept(c2), negated=True))
        elif kind == "funct":
            axioms.append(Functionality(Role(r, rng.random() < 0.3)))
        elif kind == "role" and len(roles) > 1:
            r1, r2 = rng.sample(roles, 2)
            axioms.append(RoleInclusion(Role(r1), Role(r2)))
    n_sj = rng.randint(0, b.max_sj)
    for i in range(n_sj):
        c1, c2 = rng.sample(concepts, 2)
        axioms.append(SimpleJoin(c1, c2, joins[i]))
    return validate_tbox(axioms)


def _random_atom(rng, concepts, roles, terms):
    if rng.random() < 0.6:
        return Atom(rng.choice(concepts), (rng.choice(terms),))
    return Atom(rng.choice(roles), (rng.choice(terms), rng.choice(terms)))


def _random_action(rng, name, concepts, guard_roles, effect_roles, consts):
    vs = ["?x", "?y"]
    guard = []
    for _ in range(rng.randint(1, 2)):
        guard.append(_random_atom(rng, concepts, guard_roles, vs[: rng.randint(1, 2)]))
    guard = list(dict.fromkeys(guard))
    gv = ConjunctiveQuery(tuple(guard)).variables()
    terms = gv + ([rng.choice(consts)] if rng.random() < 0.2 else [])
    effect = _random_atom(rng, concepts, effect_roles, terms)
    return Action(name, tuple(gv), ConjunctiveQuery(tuple(guard)), effect)


def random_dkb(seed: int, bounds: RandomBounds = RandomBounds()) -> PlanningProblem:
    """A small random problem, deterministic in ``seed``.

    Candidates are rejection-sampled until A0 is consistent, every action is
    well formed, the goal does not already hold, and forward planning visits
    at most ``bounds.max_states`` states.
    """
    rng = random.Random(seed)
    concepts = [f"C{i}" for i in range(bounds.n_concepts)]
    roles = [f"R{i}" for i in range(bounds.n_roles)]
    joins = [f"J{i}" for i in range(bounds.max_sj)]
    for _ in range(bounds.retries):
        consts = [f"c{i}" for i in range(rng.randint(2, bounds.max_constants))]
        tbox = _random_tbox(rng, concepts, roles, joins, bounds)
        used_joins = sorted(tbox.sj_conclusions())
        facts = {_random_atom(rng, concepts, roles, consts) for _ in range(rng.randint(1, 5))}
        actions = []
        for i in range(rng.randint(1, bounds.max_actions)):
            try:
                actions.append(_random_action(rng, f"a{i}", concepts, roles + used_joins, roles, consts))
            except ValidationError:
                continue
        if not actions or not all(well_formed(a, tbox) for a in actions):
            continue
        goal_vars = ["?x", "?y"] + consts[:1]
        goal_atoms = [_random_atom(rng, concepts, roles + used_joins, goal_vars) for _ in range(rng.randint(1, 2))]
        if rng.random() < 0.8:
            # aim the goal at something an action can produce
            eff = rng.choice(actions).effect
            goal_atoms[0] = Atom(eff.pred, tuple(rng.choice(goal_vars) for _ in eff.args))
        goal = ConjunctiveQuery(tuple(dict.fromkeys(goal_atoms)))
        known = tbox.predicates() | {f.pred for f in facts} | {a.effect.pred for a in actions}
        if not goal.predicates() <= known | {x.pred for a in actions for x in a.guard}:
            continue
        try:
            problem = make_problem(tbox, facts, actions, goal, name=f"random-{seed}")
        except (InconsistentState, ValidationError):
            continue
        reasoner = problem.reasoner()
        if reasoner.entails(problem.goal, problem.initial):
            continue
        g, m = forward_plan(problem, SearchConfig(max_states=bounds.max_states), reasoner)
        if m.timed_out or (bounds.require_plan and not g.goals):
            continue
        return problem
    raise GenerationExhausted(f"no valid problem for seed {seed} after {bounds.retries} attempts")


# ---------------------------------------------------------------------------
# inclusion


@dataclass(frozen=True)
class InclusionVerdict:
    included: bool
    missing_nonredundant: list
    fp_plans: int
    fpi_plans: int
    edges_included: bool

    @property
    def complete(self) -> bool:
        return not self.missing_nonredundant


def check_inclusion(problem: PlanningProblem, max_plans: int = 200_000) -> InclusionVerdict:
    """Compare the plan sets of FP and ABP+FPI on ``problem``."""
    reasoner = problem.reasoner()
    g_fp, _ = forward_plan(problem, SearchConfig(), reasoner)
    abstract = abstract_backward_plan(problem, reasoner)
    g_fpi, _ = fpi(problem, abstract, SearchConfig(), reasoner)
    edges_ok = g_fpi.triples() <= g_fp.triples()
    n_fp = count_plans(g_fp)
    if n_fp > max_plans:
        raise InvalidParams(f"{n_fp} plans is too many to enumerate (limit {max_plans})")
    fp = extract_plans(g_fp)
    fi = extract_plans(g_fpi)
    index = _step_index(g_fp)
    missing = sorted(
        (p for p in fp - fi if not redundant_in_graph(p, g_fp, index)),
        key=lambda p: (len(p), [str(s) for s in p]),
    )
    return InclusionVerdict(fi <= fp, missing, len(fp), len(fi), edges_ok)


def row_fields():
    return [f.name for f in fields(BenchRow)]
