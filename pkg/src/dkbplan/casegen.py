"""The document-management case study and a generator that scales it."""
from __future__ import annotations

import functools
from dataclasses import dataclass
from pathlib import Path

from .dkb import PlanningProblem, ProblemSpec
from .errors import InvalidParams
from .kb import ABox, Atom, concept_atom
from .parser import dump_kb, parse_kb

_SCHEMA = """
[tbox]
Document <= not Employee
Document <= not DocumentState
DocumentState <= not Employee
Technician <= Employee
Administrative <= Employee
Manager <= Employee
Technician <= not Administrative
Technician <= not Manager
Administrative <= not Manager
TechnicalDoc <= Document
AdministrativeDoc <= Document
UrgentDoc <= Document
TechnicalDoc <= not AdministrativeDoc
Technician <= exists canManage . TechnicalDoc
Administrative <= exists canManage . AdministrativeDoc
Document <= exists canManage-
exists canManage- <= Document
exists assignedTo <= Document
exists assignedTo- <= Employee
funct assignedTo
exists hasStatus <= Document
exists hasStatus- <= DocumentState

[sj]
Technician(?x), TechnicalDoc(?y) -> canManage(?x,?y)
Administrative(?x), AdministrativeDoc(?y) -> canManage(?x,?y)

[actions]
appoint(?x,?y,?z) : Manager(?x), canManage(?y,?z) => assignedTo(?z,?y)
review(?x,?y) : assignedTo(?x,?y) => hasStatus(?x,reviewed)
setAdmDoc(?x,?y) : Manager(?x), Document(?y) => AdministrativeDoc(?y)
setTechnician(?x,?y) : Manager(?x), Employee(?y) => Technician(?y)

[goal]
hasStatus(?x,reviewed), UrgentDoc(?x)
"""

_APPENDIX_ABOX = """
[abox]
Manager(e001)
Technician(e002)
Administrative(e003)
TechnicalDoc(d001)
UrgentDoc(d001)
DocumentState(reviewed)
"""


@functools.lru_cache(maxsize=1)
def _schema() -> ProblemSpec:
    return parse_kb(_SCHEMA)


@dataclass(frozen=True)
class ScenarioParams:
    n_managers: int = 1
    n_employees: int = 1
    n_techdocs: int = 1
    include_administrative: bool = False
    urgent_doc_index: int = 0

    def validate(self):
        for name in ("n_managers", "n_employees", "n_techdocs"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise InvalidParams(f"{name} must be a non-negative integer, got {v!r}")
        if self.n_techdocs == 0:
            raise InvalidParams("the goal is about an urgent document, so at least one document is needed")
        if not 0 <= self.urgent_doc_index < self.n_techdocs:
            raise InvalidParams(f"urgent_doc_index {self.urgent_doc_index} out of range")

    @property
    def cell(self) -> str:
        return f"{self.n_managers}/{self.n_employees}/{self.n_techdocs}"


def appendix_spec() -> ProblemSpec:
    return parse_kb(_SCHEMA + _APPENDIX_ABOX)


def appendix_fixture() -> PlanningProblem:
    return appendix_spec().problem("appendix")


def scenario_abox(params: ScenarioParams) -> ABox:
    params.validate()
    facts = []
    people = iter(range(1, 10**6))
    for _ in range(params.n_managers):
        facts.append(concept_atom("Manager", f"e{next(people):03d}"))
    for _ in range(params.n_employees):
        facts.append(concept_atom("Employee", f"e{next(people):03d}"))
    if params.include_administrative:
        facts.append(concept_atom("Administrative", f"e{next(people):03d}"))
    for i in range(params.n_techdocs):
        facts.append(concept_atom("TechnicalDoc", f"d{i + 1:03d}"))
    facts.append(concept_atom("UrgentDoc", f"d{params.urgent_doc_index + 1:03d}"))
    facts.append(Atom("DocumentState", ("reviewed",)))
    return ABox(facts)


def generate_spec(params: ScenarioParams) -> ProblemSpec:
    base = _schema()
    return ProblemSpec(base.tbox, scenario_abox(params), base.actions, base.goal)


def generate(params: ScenarioParams) -> PlanningProblem:
    return generate_spec(params).problem(f"case {params.cell}")


def scenario(m: int, e: int, d: int, **kw) -> PlanningProblem:
    return generate(ScenarioParams(m, e, d, **kw))


def write_scenario(params: ScenarioParams, path) -> Path:
    path = Path(path)
    path.write_text(f"# case study {params.cell}\n" + dump_kb(generate_spec(params)), encoding="utf-8")
    return path


GRID_CELLS = [(1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 2, 2), (2, 2, 2), (2, 2, 3), (2, 3, 3)]
