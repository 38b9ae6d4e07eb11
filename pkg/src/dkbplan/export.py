"""DOT and JSON renderings of planning graphs."""
from __future__ import annotations

import json

from .backward import AbstractPlanningGraph
from .forward import PlanningGraph
from .query import format_subst

JSON_VERSION = 1


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _state_ids(graph: PlanningGraph) -> dict:
    states = graph.states() | graph.visited
    ordered = sorted(states, key=lambda s: (len(s), sorted(map(str, s))))
    ordered.remove(graph.root)
    return {s: f"S{i}" for i, s in enumerate([graph.root] + ordered)}


def _delta(state, root) -> list:
    """Assertions added since the root; the root itself is labelled A0."""
    return sorted(map(str, state - root)) or ["A0"]


def planning_graph_to_dot(graph: PlanningGraph, name: str = "planning") -> str:
    ids = _state_ids(graph)
    shown = graph.states()
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for s in sorted(shown, key=lambda s: int(ids[s][1:])):
        label = "\n".join([ids[s], *_delta(s, graph.root)])
        attrs = [f"label={_q(label)}"]
        if s in graph.goals:
            attrs.append("shape=doublecircle")
        if s == graph.root:
            attrs.append("style=filled")
            attrs.append('fillcolor="lightgray"')
        lines.append(f"  {ids[s]} [{', '.join(attrs)}];")
    for e in sorted(graph.edges, key=lambda e: (int(ids[e.source][1:]), e.action, e.subst)):
        dst = graph.target(e)
        lines.append(f"  {ids[e.source]} -> {ids[dst]} [label={_q(e.action + format_subst(e.subst))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def planning_graph_to_json(graph: PlanningGraph) -> dict:
    ids = _state_ids(graph)
    states = sorted(graph.states(), key=lambda s: int(ids[s][1:]))
    return {
        "version": JSON_VERSION,
        "root": ids[graph.root],
        "states": [
            {
                "id": ids[s],
                "assertions": [str(f) for f in s.sorted()],
                "goal": s in graph.goals,
            }
            for s in states
        ],
        "edges": [
            {
                "src": ids[e.source],
                "action": e.action,
                "subst": dict(e.subst),
                "dst": ids[graph.target(e)],
            }
            for e in sorted(graph.edges, key=lambda e: (int(ids[e.source][1:]), e.action, e.subst))
        ],
    }


def planning_graph_json_text(graph: PlanningGraph) -> str:
    return json.dumps(planning_graph_to_json(graph), indent=2, ensure_ascii=False) + "\n"


def abstract_graph_to_dot(graph: AbstractPlanningGraph, name: str = "abstract") -> str:
    names = graph.state_names()
    lines = [f"digraph {_q(name)} {{", "  rankdir=RL;", "  node [shape=box];"]
    for q in graph.order:
        label = f"{names[q]}\n{q}"
        attrs = [f"label={_q(label)}"]
        if graph.states[q].initial_satisfied:
            attrs += ["style=filled", 'fillcolor="lightgray"']
        if q in graph.goal_states:
            attrs.append("peripheries=2")
        lines.append(f"  {names[q]} [{', '.join(attrs)}];")
    for src, dst, label, kind in graph.edges:
        style = ", style=dashed" if kind == "sj" else ""
        lines.append(f"  {names[src]} -> {names[dst]} [label={_q(label)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def abstract_graph_to_json(graph: AbstractPlanningGraph) -> dict:
    names = graph.state_names()
    return {
        "version": JSON_VERSION,
        "goals": [names[q] for q in graph.goal_states],
        "states": [
            {"id": names[q], "query": str(q), "initial_satisfied": graph.states[q].initial_satisfied}
            for q in graph.order
        ],
        "pairs": [
            {"state": names[p.state], "action": p.action, "link": dict(p.link)}
            for p in sorted(graph.pairs, key=lambda p: (names[p.state], p.action, p.link))
        ],
        "edges": [{"src": names[s], "dst": names[d], "label": lab, "kind": k} for s, d, lab, k in graph.edges],
    }
