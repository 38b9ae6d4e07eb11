"""Command-line front end: ``dkbplan {check,query,plan,bench,export}``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .backward import abstract_backward_plan
from .bench import check_inclusion, parse_grid, random_dkb, run_grid
from .casegen import ScenarioParams, generate_spec, write_scenario
from .errors import DKBError, InconsistentState
from .export import (
    abstract_graph_to_dot,
    abstract_graph_to_json,
    planning_graph_json_text,
    planning_graph_to_dot,
)
from .forward import SearchConfig, count_plans, forward_plan, format_plan, goal_path
from .instantiate import fpi
from .parser import dump_kb, load_kb, parse_query
from .query import format_subst, freeze
from .reasoner import Reasoner, default_depth, first_violation

EXIT_OK, EXIT_ERROR, EXIT_INCONSISTENT, EXIT_NO_PLAN = 0, 1, 2, 3


@dataclass(frozen=True)
class CliConfig:
    command: str
    inputs: tuple = ()
    algo: str = "fp"
    strategy: str = "fifo"
    mode: str = "all"
    fmt: str = "text"
    out: str | None = None
    timeout_s: float | None = None
    reps: int = 1
    grid: str = ""
    seed: int = 0
    inclusion: int = 0


def _print(*a):
    print(*a, file=sys.stdout)


def cmd_check(cfg: CliConfig) -> int:
    spec = load_kb(cfg.inputs[0], require_goal=False)
    queries = [a.guard for a in spec.actions] + (list(spec.goal) if spec.goal else [])
    v = first_violation(spec.initial, spec.tbox, default_depth(spec.tbox, queries))
    if v is None:
        _print("consistent")
        return EXIT_OK
    _print(f"inconsistent: {v}")
    return EXIT_INCONSISTENT


def cmd_query(cfg: CliConfig) -> int:
    spec = load_kb(cfg.inputs[0], require_goal=False)
    q = parse_query(cfg.inputs[1])
    reasoner = Reasoner(spec.tbox, default_depth(spec.tbox, list(q)))
    try:
        answers = reasoner.answers(q, spec.initial)
    except InconsistentState as exc:
        _print(f"inconsistent: {exc}")
        return EXIT_INCONSISTENT
    rows = sorted(freeze(s) for s in answers)
    if cfg.fmt == "json":
        _print(json.dumps([dict(r) for r in rows], indent=2))
    else:
        for r in rows:
            _print(format_subst(r))
        _print(f"{len(rows)} answer(s)")
    return EXIT_OK


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_plan(cfg: CliConfig) -> int:
    problem = load_kb(cfg.inputs[0]).problem(Path(cfg.inputs[0]).stem)
    search = SearchConfig(cfg.strategy, cfg.mode, cfg.timeout_s)
    reasoner = problem.reasoner()
    abstract = None
    if cfg.algo == "fp":
        graph, m = forward_plan(problem, search, reasoner)
    else:
        abstract = abstract_backward_plan(problem, reasoner)
        graph, m = fpi(problem, abstract, search, reasoner)
    n = count_plans(graph)
    if cfg.fmt == "dot":
        _write(cfg.out, planning_graph_to_dot(graph))
    elif cfg.fmt == "json":
        _write(cfg.out, planning_graph_json_text(graph))
    if abstract is not None and cfg.out is not None and cfg.fmt in ("dot", "json"):
        base = Path(cfg.out)
        apath = base.with_name(base.stem + ".abstract" + base.suffix)
        if cfg.fmt == "dot":
            apath.write_text(abstract_graph_to_dot(abstract), encoding="utf-8")
        else:
            apath.write_text(json.dumps(abstract_graph_to_json(abstract), indent=2, ensure_ascii=False) + "\n",
                             encoding="utf-8")
    report = sys.stdout if (cfg.fmt == "text" or cfg.out is not None) else sys.stderr
    label = "FP" if cfg.algo == "fp" else "ABP+FPI"
    print(f"{label}: |P|={m.edges} |V|={m.visited} Inc={m.inconsistent} time={m.time_s:.3f}s plans={n}"
          + (" (timed out)" if m.timed_out else ""), file=report)
    if abstract is not None:
        print(f"abstract states={len(abstract.states)} pairs={len(abstract.pairs)}", file=report)
    best = goal_path(graph)
    if best is not None:
        print(f"shortest plan: {format_plan(best)}", file=report)
    return EXIT_OK if n else EXIT_NO_PLAN


def cmd_bench(cfg: CliConfig) -> int:
    grid = parse_grid(cfg.grid)
    report = run_grid(grid, cfg.reps, cfg.timeout_s)
    _write(cfg.out, report.to_csv())
    if cfg.out is not None and report.rows:
        _print(report.format_table())
    if cfg.inclusion:
        missing = 0
        for seed in range(cfg.seed, cfg.seed + cfg.inclusion):
            v = check_inclusion(random_dkb(seed))
            if not v.included:
                print(f"seed {seed}: ABP+FPI produced a plan that FP did not", file=sys.stderr)
                return EXIT_ERROR
            missing += bool(v.missing_nonredundant)
        print(f"inclusion held on {cfg.inclusion} random problems; "
              f"{missing} had non-redundant FP plans missing from ABP+FPI", file=sys.stderr)
    return EXIT_OK


def cmd_export(cfg: CliConfig) -> int:
    """Write a generated case-study scenario as a KB file."""
    try:
        m, e, d = (int(x) for x in cfg.inputs[0].split("/"))
    except ValueError:
        raise DKBError(f"expected a cell like 1/1/1, got {cfg.inputs[0]!r}") from None
    params = ScenarioParams(m, e, d)
    params.validate()
    if cfg.out is None:
        sys.stdout.write(dump_kb(generate_spec(params)))
    else:
        write_scenario(params, cfg.out)
    return EXIT_OK


COMMANDS = {"check": cmd_check, "query": cmd_query, "plan": cmd_plan, "bench": cmd_bench, "export": cmd_export}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dkbplan", description="Planning over DL-Lite dynamic knowledge bases.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check a KB's initial ABox for consistency")
    p.add_argument("kb")

    p = sub.add_parser("query", help="certain answers of a query over a KB's initial ABox")
    p.add_argument("kb")
    p.add_argument("query", help="comma-separated atoms; '|' separates disjuncts")
    p.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")

    p = sub.add_parser("plan", help="run a planner on a KB with a goal")
    p.add_argument("kb")
    p.add_argument("--algo", choices=["fp", "abp-fpi"], default="fp")
    p.add_argument("--strategy", choices=["fifo", "lifo"], default="fifo")
    p.add_argument("--mode", choices=["all", "first"], default="all")
    p.add_argument("--format", dest="fmt", choices=["dot", "json", "text"], default="text")
    p.add_argument("--out")
    p.add_argument("--timeout-s", type=float)

    p = sub.add_parser("bench", help="run the case-study grid and write CSV")
    p.add_argument("--grid", default="reference", help='"reference" or e.g. "mng=1..2,emp=1..3,doc=1..3"')
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--timeout-s", type=float, default=200.0)
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0, help="first seed of the random inclusion sweep")
    p.add_argument("--inclusion", type=int, default=0, metavar="N",
                   help="also check plan inclusion on N random problems")

    p = sub.add_parser("export", help="write a generated case-study scenario as a KB file")
    p.add_argument("cell", help="managers/employees/documents, e.g. 1/1/1")
    p.add_argument("--out")
    return ap


def to_config(ns) -> CliConfig:
    inputs = tuple(x for x in (getattr(ns, "kb", None), getattr(ns, "query", None), getattr(ns, "cell", None)) if x)
    return CliConfig(
        command=ns.command,
        inputs=inputs,
        algo=getattr(ns, "algo", "fp"),
        strategy=getattr(ns, "strategy", "fifo"),
        mode=getattr(ns, "mode", "all"),
        fmt=getattr(ns, "fmt", "text"),
        out=getattr(ns, "out", None),
        timeout_s=getattr(ns, "timeout_s", None),
        reps=getattr(ns, "reps", 1),
        grid=getattr(ns, "grid", ""),
        seed=getattr(ns, "seed", 0),
        inclusion=getattr(ns, "inclusion", 0),
    )


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = to_config(ns)
    try:
        return COMMANDS[cfg.command](cfg)
    except (OSError, DKBError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
