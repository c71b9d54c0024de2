"""Command line front end.

Exit status: 0 when a question was decided (whatever the answer), 2 on bad
input, 3 when a search ran out of budget.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .embed import EmbeddingError, PlaneGraph, Subgraph, dump_pg, graph_from_code, parse_pg
from .lists import (HypothesisError, ListFormatError, PrecoloredPath, check_cor2, check_thm1,
                    check_thm3, is_valid, parse_lst)

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3

MODES = ("thm1", "cor2", "thm3", "valid", "critical", "strongly-critical", "classify", "audit")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    palette: int | None = None
    max_interior: int | None = None
    jobs: int = 1
    out: str | None = None
    seed: int = 0

    def __post_init__(self):
        for name in ("palette", "max_interior"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.jobs <= 0:
            raise InputError("--jobs must be positive")

    def header(self) -> list[str]:
        return [f"# listcrit {__version__}", f"# seed={self.seed}"]


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def load_graph(path: str) -> PlaneGraph:
    try:
        return parse_pg(_read(path))
    except EmbeddingError as exc:
        raise InputError(f"{path}: {exc}") from None


def load_lists(path: str) -> tuple[dict, PrecoloredPath]:
    try:
        L, P = parse_lst(_read(path))
    except ListFormatError as exc:
        raise InputError(f"{path}: {exc}") from None
    # a fixed path colour doubles as a one-element list
    for v, c in (P.colors or {}).items():
        L.setdefault(v, frozenset({c}))
    return L, P


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fmt_coloring(col) -> str:
    return " ".join(f"{v}={col[v]}" for v in sorted(col))


# -- subcommands ----------------------------------------------------------------------

def cmd_color(cfg: RunConfig, graph: str, lists: str) -> int:
    from .solver import find_coloring

    G = load_graph(graph)
    L, P = load_lists(lists)
    missing = [v for v in G.vertices if v not in L]
    if missing:
        raise InputError(f"{lists}: no list for vertex {missing[0]}")
    col = find_coloring(G, L, P.colors)
    if col is None:
        _emit("UNCOLORABLE\n", cfg.out)
    else:
        _emit("".join(f"c {v} {col[v]}\n" for v in sorted(col)), cfg.out)
    return EXIT_OK


def _base_set(G: PlaneGraph, P: PrecoloredPath) -> Subgraph:
    if P.vertices:
        vs = P.vertices
        return Subgraph(vs, zip(vs, vs[1:]))
    from .enumeration import outer_cycle

    return outer_cycle(G)


def verify_report(G: PlaneGraph, L: dict, P: PrecoloredPath, mode: str) -> list[str]:
    from . import audit as au
    from .solver import classify_AB, is_critical, is_strongly_critical

    try:
        if mode in ("thm1", "cor2", "thm3"):
            if mode == "thm1":
                v = check_thm1(G, None, P, L)
            elif mode == "cor2":
                v = check_cor2(G, None, L)
            else:
                v = check_thm3(G, None, L)
            lines = ["HOLDS" if v.ok else "FAILS " + v.reason]
            if v.witness:
                lines.append("witness " + " ".join(map(str, v.witness)))
            return lines
        if mode == "valid":
            v = is_valid(G, P, L)
            lines = ["VALID" if v.ok else "INVALID"]
            if v.witness:
                lines.append("witness " + " ".join(map(str, v.witness)))
            return lines
        if mode in ("critical", "strongly-critical"):
            S = _base_set(G, P)
            fn = is_critical if mode == "critical" else is_strongly_critical
            rep = fn(G, S, L, verify=True)
            lines = [rep.verdict.upper()]
            if rep.failing_edge is not None:
                lines.append("failing-edge {} {}".format(*rep.failing_edge))
            if rep.failing_vertex is not None:
                lines.append(f"isolated-vertex {rep.failing_vertex}")
            for e in sorted(rep.witnesses):
                lines.append("edge {} {}: ".format(*e) + _fmt_coloring(rep.witnesses[e]))
            if rep.strong_witness is not None:
                lines.append("common: " + _fmt_coloring(rep.strong_witness))
            return lines
        if mode == "classify":
            cv = classify_AB(G, P, L)
            lines = [cv.tag]
            if cv.witness is not None:
                lines.append("psi: " + _fmt_coloring(cv.witness))
            return lines
        if mode == "audit":
            a = au.audit_bounds(G)
            rep = au.struct_config(G, L or None)
            lines = [a.tag, f"weight {a.weight.numerator}/{a.weight.denominator}",
                     f"bound {a.bound.numerator}/{a.bound.denominator}", "PASS" if a.passed else "FAIL",
                     au.audit_line(G, a, rep.tags)]
            return lines
    except HypothesisError as exc:
        return [f"HYPOTHESIS-ERROR {exc}"]
    raise InputError(f"unknown mode {mode!r}")


def cmd_verify(cfg: RunConfig, graph: str, lists: str | None, mode: str) -> int:
    G = load_graph(graph)
    L, P = load_lists(lists) if lists else ({}, PrecoloredPath())
    if mode != "audit" and not lists:
        raise InputError(f"mode {mode} needs a list file")
    _emit("\n".join(verify_report(G, L, P, mode)) + "\n", cfg.out)
    return EXIT_OK


def cmd_enumerate(cfg: RunConfig, ell: int, pattern_only: bool, budget: float | None) -> int:
    from .enumeration import BudgetExceeded, dump_crit, enumerate_critical

    params = {"ell": ell, "max_interior": cfg.max_interior, "pattern_only": pattern_only, "seed": cfg.seed}
    try:
        res = enumerate_critical(ell, pattern_only=pattern_only, max_interior=cfg.max_interior,
                                 jobs=cfg.jobs, budget_s=budget)
    except BudgetExceeded as exc:
        _emit(dump_crit([], params, __version__) + f"# PARTIAL budget exhausted: {exc}\n", cfg.out)
        return EXIT_BUDGET
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(dump_crit(res, params, __version__), cfg.out)
    return EXIT_OK


def cmd_audit(cfg: RunConfig, paths: list[str]) -> int:
    from . import audit as au
    from .enumeration import parse_crit

    lines = cfg.header()
    for path in paths:
        text = _read(path)
        if path.endswith(".crit"):
            try:
                entries = [(graph_from_code(code), L) for code, _, L in parse_crit(text)]
            except (ValueError, EmbeddingError) as exc:
                raise InputError(f"{path}: {exc}") from None
        else:
            entries = [(load_graph(path), None)]
        for G, L in entries:
            a = au.audit_bounds(G)
            lines.append(au.audit_line(G, a, au.struct_config(G, L).tags))
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_skeleton(cfg: RunConfig, graph: str, lists: str) -> int:
    from .solver import skeleton

    G = load_graph(graph)
    L, P = load_lists(lists)
    K = skeleton(G, _base_set(G, P), L)
    _emit(dump_pg(K), cfg.out)
    return EXIT_OK


def cmd_search(cfg: RunConfig, max_vertices: int, rounds: int) -> int:
    from .enumeration import search_thm3_counterexample

    res = search_thm3_counterexample(max_vertices, palette=cfg.palette or 5, max_rounds=rounds)
    text = "\n".join(cfg.header()) + "\n" + res.report()
    if res.result is not None:
        text += dump_pg(res.result.graph)
    _emit(text, cfg.out)
    return EXIT_OK if res.result is not None or res.exhausted else EXIT_BUDGET


# -- argument parsing -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-interior", type=int)
    common.add_argument("--palette", type=int)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="listcrit", description="List colouring of plane graphs of girth five.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("color", parents=[common], help="colour a graph from lists")
    s.add_argument("graph")
    s.add_argument("lists")

    s = sub.add_parser("verify", parents=[common], help="check a hypothesis or property")
    s.add_argument("graph")
    s.add_argument("lists", nargs="?")
    s.add_argument("--mode", choices=MODES, required=True)

    s = sub.add_parser("enumerate", parents=[common], help="critical graphs inside a cycle")
    s.add_argument("ell", type=int)
    s.add_argument("--pattern-only", action="store_true",
                   help="only graphs where every second outer vertex has degree two on a 5-face")
    s.add_argument("--budget", type=float, help="seconds")

    s = sub.add_parser("audit", parents=[common], help="weight and size bounds")
    s.add_argument("inputs", nargs="+", help=".crit or .pg files")

    s = sub.add_parser("skeleton", parents=[common], help="minimal subgraph with the same extendable precolorings")
    s.add_argument("graph")
    s.add_argument("lists")

    s = sub.add_parser("search", parents=[common], help="uncolourable instances with a 2-2-x-2-2 path")
    s.add_argument("max_vertices", type=int)
    s.add_argument("--rounds", type=int, default=5000)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.command, palette=args.palette, max_interior=args.max_interior,
                        jobs=args.jobs, out=args.out, seed=args.seed)
        if args.command == "color":
            return cmd_color(cfg, args.graph, args.lists)
        if args.command == "verify":
            return cmd_verify(cfg, args.graph, args.lists, args.mode)
        if args.command == "enumerate":
            return cmd_enumerate(cfg, args.ell, args.pattern_only, args.budget)
        if args.command == "audit":
            return cmd_audit(cfg, args.inputs)
        if args.command == "skeleton":
            return cmd_skeleton(cfg, args.graph, args.lists)
        if args.command == "search":
            return cmd_search(cfg, args.max_vertices, args.rounds)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    parser.error(f"unknown command {args.command}")
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
