"""Print the abstract planning graph of the appendix case study and optionally write it as DOT."""
import argparse
from pathlib import Path

from dkbplan.backward import abstract_backward_plan
from dkbplan.casegen import appendix_fixture
from dkbplan.export import abstract_graph_to_dot


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, help="DOT output path")
    args = ap.parse_args(argv)

    graph = abstract_backward_plan(appendix_fixture())
    names = graph.state_names()
    for q in graph.order:
        mark = " (initial)" if graph.states[q].initial_satisfied else ""
        print(f"{names[q]}: {q}{mark}")
    for src, dst, label, _ in graph.edges:
        print(f"  {names[src]} -> {names[dst]}  {label}")
    if args.out:
        args.out.write_text(abstract_graph_to_dot(graph), encoding="utf-8")


if __name__ == "__main__":
    main()
