"""Command line front end: prove, compile, simulate, compare, export."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import __version__, compiler, fixtures, graph, logic, resolution
from . import process as proc

EXIT_OK = 0
EXIT_SAT = 1
EXIT_INDETERMINATE = 2
EXIT_DISAGREE = 3

ENV_MAX_STATES = "STRANDPROVER_MAX_STATES"
ENV_MAX_DEPTH = "STRANDPROVER_MAX_DEPTH"
DEFAULT_MAX_STATES = 50_000
DEFAULT_MAX_DEPTH = 200


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strandprover",
        description="Prove propositional theorems by resolution, by DNA strand "
        "hybridization, or by both at once.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_bounds: bool = True):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", metavar="PATH", help="input file ('-' for stdin)")
        src.add_argument("--fixture", choices=sorted(fixtures.FIXTURES), help="built-in example")
        p.add_argument(
            "--format", choices=("text", "json", "dot"), default="text", help="output format"
        )
        if with_bounds:
            p.add_argument("--max-states", type=int, metavar="N", help="state budget for exploration")
            p.add_argument("--max-depth", type=int, metavar="N", help="depth budget for exploration")

    p_prove = sub.add_parser("prove", help="resolution refutation of a formula or clause set")
    add_common(p_prove, with_bounds=False)
    p_prove.add_argument("--goal", metavar="FORMULA", help="prove that the input entails this formula")
    p_prove.add_argument("--trace", action="store_true", help="print every retained deduction step")
    p_prove.set_defaults(func=cmd_prove)

    p_compile = sub.add_parser("compile", help="compile a clause set to strands and base sequences")
    add_common(p_compile, with_bounds=False)
    p_compile.add_argument("--codebook", metavar="PATH", help="variable-to-sequence table")
    p_compile.set_defaults(func=cmd_compile)

    p_sim = sub.add_parser("simulate", help="explore the strand graph of a system")
    add_common(p_sim)
    p_sim.add_argument("--codebook", metavar="PATH", help="used when the input is a clause set")
    p_sim.set_defaults(func=cmd_simulate)

    p_cmp = sub.add_parser("compare", help="run both engines and flag disagreement")
    add_common(p_cmp)
    p_cmp.add_argument("--codebook", metavar="PATH", help="variable-to-sequence table")
    p_cmp.set_defaults(func=cmd_compare)

    p_exp = sub.add_parser("export", help="write a strand graph as listing, JSON, or DOT")
    add_common(p_exp, with_bounds=False)
    p_exp.add_argument("--codebook", metavar="PATH", help="used when the input is a clause set")
    p_exp.set_defaults(func=cmd_export)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (resolution.ResourceLimitError, graph.ExplorationLimitError) as exc:
        print(f"INDETERMINATE: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE


def entry() -> None:
    sys.exit(main())


# --- inputs ------------------------------------------------------------------


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _parse_clause_text(text: str) -> logic.ClauseSet:
    """Clause lines, a single formula, or DIMACS, told apart by their lexicon."""
    meaningful = [
        line for line in (raw.split("#", 1)[0].strip() for raw in text.splitlines()) if line
    ]
    if any(line.split()[:2] == ["p", "cnf"] for line in meaningful):
        return logic.ClauseSet.from_dimacs(text)
    if any(ch in text for ch in "&|()<>-"):
        formula = logic.parse_formula(" ".join(meaningful))
        return logic.to_clausal_form(formula)
    return logic.ClauseSet.parse(text)


def _load_clauses(args) -> logic.ClauseSet:
    if args.fixture is not None:
        kind, loader = fixtures.FIXTURES[args.fixture]
        if kind != "clauses":
            raise ValueError(f"fixture {args.fixture!r} is a strand system, not a clause set")
        return loader()
    s = _parse_clause_text(_read_input(args.input))
    if len(s) == 0:
        raise ValueError("input contains no clauses")
    return s


def _load_codebook_for(args, s: logic.ClauseSet) -> compiler.Codebook:
    if getattr(args, "codebook", None):
        book = compiler.Codebook.from_text(_read_input(args.codebook))
        for var in s.variables():
            book.sense(var)  # fail early on missing entries
        return book
    book = compiler.default_codebook()
    missing = [var for var in s.variables() if var not in book]
    if missing:
        book = compiler.generate_codebook(missing, length=book.code_length(), base=book)
    return book


def _load_graph(args) -> graph.StrandGraph:
    """A strand graph from a fixture, process text, graph JSON, or clause set."""
    if args.fixture is not None:
        kind, loader = fixtures.FIXTURES[args.fixture]
        if kind == "process":
            return graph.from_process(loader())
        s = loader()
        p, _ = compiler.compile_clauses(s, _load_codebook_for(args, s))
        return graph.from_process(p)
    text = _read_input(args.input)
    stripped = text.strip()
    if stripped.startswith("{"):
        return graph.from_json(stripped)
    if stripped.startswith("<") or stripped.startswith("⟨"):
        return graph.from_process(proc.parse_process(stripped))
    s = _parse_clause_text(text)
    p, _ = compiler.compile_clauses(s, _load_codebook_for(args, s))
    return graph.from_process(p)


def _bound(flag_value: int | None, env_name: str, default: int) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(env_name)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{env_name} must be an integer, not {env!r}") from None
    return default


def _bounds(args) -> tuple[int, int]:
    return (
        _bound(getattr(args, "max_states", None), ENV_MAX_STATES, DEFAULT_MAX_STATES),
        _bound(getattr(args, "max_depth", None), ENV_MAX_DEPTH, DEFAULT_MAX_DEPTH),
    )


# --- commands ----------------------------------------------------------------


def cmd_prove(args) -> int:
    s = _load_clauses(args)
    goal = logic.parse_formula(args.goal) if args.goal else None
    try:
        result = resolution.refute(s, goal)
    except resolution.ResourceLimitError as exc:
        print(f"INDETERMINATE: {exc}")
        return EXIT_INDETERMINATE
    if args.format == "json":
        payload = {
            "verdict": result.verdict,
            "empty_step": result.empty_step,
            "steps": [
                {
                    "index": step.index,
                    "clause": [str(lit) for lit in step.clause],
                    "parents": list(step.parents) if step.parents else None,
                    "on": str(step.pivot) if step.pivot is not None else None,
                }
                for step in result.steps
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        if result.is_unsat:
            print("UNSAT: the clause set is refuted")
            print(resolution.render_deduction(result))
        else:
            print("SATISFIABLE: saturation finished without the empty clause")
        if args.trace:
            for line in result.trace_lines():
                print(line)
    return EXIT_OK if result.is_unsat else EXIT_SAT


def cmd_compile(args) -> int:
    s = _load_clauses(args)
    book = _load_codebook_for(args, s)
    p, compiled = compiler.compile_clauses(s, book)
    if args.format == "json":
        payload = {
            "process": str(p),
            "clauses": [
                {
                    "clause": " ".join(str(lit) for lit in item.clause),
                    "strand": str(item.strand),
                    "bases": item.bases,
                }
                for item in compiled
            ],
            "codebook": {var: book.sense(var) for var in book.variables()},
        }
        print(json.dumps(payload, indent=2))
    elif args.format == "dot":
        print(graph.to_dot(graph.from_process(p)), end="")
    else:
        print(p)
        print()
        print(compiler.format_fasta(compiled), end="")
    return EXIT_OK


def cmd_simulate(args) -> int:
    g = _load_graph(args)
    max_states, max_depth = _bounds(args)
    report = graph.explore(g, max_states=max_states, max_depth=max_depth)
    if args.format == "json":
        payload = {
            "states": len(report.states),
            "terminals": [
                {
                    "edges": [str(e) for e in sorted(report.states[i])],
                    "depth": report.depths[i],
                    "trace": report.trace_to(i).lines(),
                }
                for i in report.terminals
            ],
        }
        print(json.dumps(payload, indent=2))
    elif args.format == "dot":
        _print_dot_trace(g, report)
    else:
        print(f"states explored: {len(report.states)}")
        print(f"terminal states: {len(report.terminals)}")
        for i in report.terminals:
            edges = ", ".join(str(e) for e in sorted(report.states[i])) or "none"
            print(f"terminal at depth {report.depths[i]}: |E|={len(report.states[i])} edges: {edges}")
            for line in report.trace_to(i).lines():
                print(f"  {line}")
    return EXIT_OK


def _print_dot_trace(g: graph.StrandGraph, report: graph.ExploreReport) -> None:
    """One DOT graph per state along the shortest trace to the first terminal."""
    target = report.terminals[0] if report.terminals else 0
    trace = report.trace_to(target)
    current = trace.initial
    print("// step 0 (initial)")
    print(graph.to_dot(g.with_current(current)), end="")
    for k, move in enumerate(trace.moves, start=1):
        current = (current - move.removed) | move.added
        print(f"// step {k}: {move.describe()}")
        print(graph.to_dot(g.with_current(current)), end="")


def cmd_compare(args) -> int:
    s = _load_clauses(args)
    max_states, max_depth = _bounds(args)
    res_unsat: bool | None = None
    hyb_unsat: bool | None = None
    notes: list[str] = []
    try:
        res_unsat = resolution.refute(s).is_unsat
    except resolution.ResourceLimitError as exc:
        notes.append(f"resolution indeterminate: {exc}")
    verdict = None
    try:
        p, _ = compiler.compile_clauses(s, _load_codebook_for(args, s))
        verdict = compiler.hybridization_verdict(p, max_states=max_states, max_depth=max_depth)
        hyb_unsat = verdict.is_unsat
    except graph.ExplorationLimitError as exc:
        notes.append(f"hybridization indeterminate: {exc}")
    print(f"resolution: {_verdict_word(res_unsat)}")
    print(f"hybridization: {_verdict_word(hyb_unsat)}")
    for note in notes:
        print(note)
    if res_unsat is None or hyb_unsat is None:
        print("INDETERMINATE")
        return EXIT_INDETERMINATE
    if res_unsat == hyb_unsat:
        print("AGREE")
        return EXIT_OK
    print("DISAGREE: hybridization saturation is not propositional unsatisfiability")
    if verdict is not None and verdict.free_sites:
        never = graph.unbindable_sites(verdict.graph)
        for site in sorted(verdict.free_sites):
            label = graph.format_domain(verdict.graph.label(site))
            tag = ", can never bind" if site in never else ""
            print(f"free site {site}: {label}{tag}")
    return EXIT_DISAGREE


def _verdict_word(is_unsat: bool | None) -> str:
    if is_unsat is None:
        return "INDETERMINATE"
    return "UNSAT" if is_unsat else "SATISFIABLE"


def cmd_export(args) -> int:
    g = _load_graph(args)
    if args.format == "json":
        print(graph.to_json(g), end="")
    elif args.format == "dot":
        print(graph.to_dot(g), end="")
    else:
        n = g.vertex_count()
        print(f"vertices: {n}")
        print("lengths: " + ", ".join(f"{v + 1}:{g.lengths[v]}" for v in range(n)))
        print("colours: " + ", ".join(f"{v + 1}:{g.colours[v]}" for v in range(n)))
        for v in range(n):
            print(f"strand {v + 1}: <" + " ".join(graph.format_domain(d) for d in g.domains[v]) + ">")
        print("admissible: " + (", ".join(str(e) for e in sorted(g.admissible)) or "none"))
        toeholds = [e for e in sorted(g.admissible) if g.toehold(e)]
        print("toehold edges: " + (", ".join(str(e) for e in toeholds) or "none"))
        print("current: " + (", ".join(str(e) for e in sorted(g.current)) or "none"))
    return EXIT_OK


if __name__ == "__main__":
    entry()
