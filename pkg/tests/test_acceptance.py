"""Acceptance suite: one test and one PASS/FAIL line per criterion.

The lines are printed as the tests run and repeated in the pytest summary.
"""
import itertools
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from functools import lru_cache

from conftest import record
from graphgen import connected_girth5_planar, facial_embedding, facial_subsets, on_common_face
from oracles import lattice_verdicts
from listcrit.audit import (NOT_EXCEPTIONAL, audit_bounds, graph_weight, msum_violations, struct_config,
                            weight_fn)
from listcrit.embed import PlaneGraph, Subgraph, disk_interior, girth, iter_cycles, Walk
from listcrit.enumeration import enumerate_critical, has_alternating_pattern, search_thm3_counterexample
from listcrit.lists import PrecoloredPath, check_thm1, check_thm3
from listcrit.solver import find_coloring, is_critical, is_strongly_critical
from shapes import APEX9_CODE, FIGURE2_CODE, tight_graph

MAX_N = 10
W5 = Fraction(1, 7)


def all_graphs():
    for n in range(1, MAX_N + 1):
        yield from connected_girth5_planar(n)


def path_masks(g, k):
    """Bit masks of the vertices of every simple path on k vertices, both directions."""
    out = []

    def rec(p):
        if len(p) == k:
            out.append(p)
            return
        for w in g[p[-1]]:
            if w not in p:
                rec(p + [w])
    for v in g:
        rec([v])
    return out


def mask(vs):
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def degree_core(g, need, removed=()):
    """Vertices left after repeatedly deleting one with fewer live neighbours than ``need``.

    When nothing is left, any lists of those sizes admit a colouring: colour
    the vertices in reverse deletion order, each one then sees fewer coloured
    neighbours than it has colours.
    """
    alive = {v for v in g if v not in removed}
    deg = {v: sum(1 for w in g[v] if w in alive) for v in alive}
    stack = [v for v in alive if deg[v] < need[v]]
    while stack:
        v = stack.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for w in g[v]:
            if w in alive:
                deg[w] -= 1
                if deg[w] < need[w]:
                    stack.append(w)
    return alive


def proper(g, col, L):
    return all(col[v] in L[v] for v in g) and all(col[u] != col[w] for u, w in g.edges())


def plane(g, X):
    rot, dart = facial_embedding(g, set(X))
    return PlaneGraph(rot, dart)


# -- criterion 1 ---------------------------------------------------------------------------

def thm3_instances(g):
    """2-list sets on one face with no 2-2-2 path and no 2-2-x-2-2 path."""
    three = [mask(p) for p in path_masks(g, 3)]
    five = [mask(p[:2] + p[3:]) for p in path_masks(g, 5)]
    bad = three + five

    def admissible(s):
        m = mask(s)
        return not any(b & m == b for b in bad)
    return facial_subsets(g, admissible=admissible)


def test_criterion_1_thm3_oracle():
    start = time.monotonic()
    count = failures = uncertified = disagreements = 0
    for g in all_graphs():
        for Y in thm3_instances(g):
            count += 1
            L = {v: frozenset((1, 2) if v in Y else (1, 2, 3)) for v in g}
            if degree_core(g, {v: len(L[v]) for v in g}):
                uncertified += 1
            col = find_coloring({v: set(g[v]) for v in g}, L)
            if col is None or not proper(g, col, L):
                failures += 1
            if not check_thm3(plane(g, Y), None, L):
                disagreements += 1
    secs = time.monotonic() - start
    ok = failures == 0 and uncertified == 0 and disagreements == 0 and secs <= 30 * 60
    record(1, ok, f"{count} instances on graphs up to {MAX_N} vertices, {failures} colouring failures, "
                  f"{uncertified} without degeneracy certificate, {disagreements} hypothesis disagreements, "
                  f"{secs:.0f}s")
    assert ok


# -- criterion 2 ---------------------------------------------------------------------------

def precolored_paths(g):
    """The empty path and every path on at most 6 vertices (one direction) on some face."""
    yield ()
    for k in range(1, 7):
        for p in path_masks(g, k):
            if tuple(p) <= tuple(reversed(p)) and on_common_face(g, p):
                yield tuple(p)


def thm1_instances(g):
    for P in precolored_paths(g):
        ps = set(P)
        near = ps | {w for p in P for w in g[p]}
        cand = [v for v in g if v not in near]

        def independent(s):
            return not any(g.has_edge(a, b) for a, b in itertools.combinations(s, 2))
        for Y in facial_subsets(g, allowed=cand, admissible=independent, along=frozenset(ps)):
            yield P, Y


def test_criterion_2_thm1_oracle():
    start = time.monotonic()
    count = failures = uncertified = disagreements = 0
    for g in all_graphs():
        adj = {v: set(g[v]) for v in g}
        for P, Y in thm1_instances(g):
            count += 1
            colors = {p: i % 3 + 1 for i, p in enumerate(P)}
            L = {v: frozenset((1, 2) if v in Y else (1, 2, 3)) for v in g if v not in colors}
            L.update((p, frozenset({c})) for p, c in colors.items())
            # worst case: every precoloured neighbour removes a colour
            need = {v: len(L[v]) - sum(1 for w in g[v] if w in colors) for v in g if v not in colors}
            if degree_core(g, need, removed=colors):
                uncertified += 1
            col = find_coloring(adj, L, colors)
            if col is None or not proper(g, col, L) or any(col[p] != c for p, c in colors.items()):
                failures += 1
            if not check_thm1(plane(g, set(P) | set(Y)), None, PrecoloredPath(P, colors), L):
                disagreements += 1
    secs = time.monotonic() - start
    ok = failures == 0 and uncertified == 0 and disagreements == 0 and secs <= 15 * 60
    record(2, ok, f"{count} instances on graphs up to {MAX_N} vertices, {failures} colouring failures, "
                  f"{uncertified} without degeneracy certificate, {disagreements} hypothesis disagreements, "
                  f"{secs:.0f}s")
    assert ok


# -- criteria 3 and 4 ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def enumerated(ell, pattern_only=False):
    start = time.monotonic()
    out = tuple(enumerate_critical(ell, pattern_only=pattern_only, jobs=os.cpu_count() or 1))
    return out, time.monotonic() - start


def inner_part(G):
    outer = set(G.outer_walk())
    g = G.to_networkx()
    return g.subgraph([v for v in g if v not in outer]), outer


def test_criterion_3_nine_and_below():
    eight, t8 = enumerated(8)
    nine, t9 = enumerated(9)
    shapes_ok = True
    for r in nine:
        rest, outer = inner_part(r.graph)
        (v,) = rest.nodes if rest.number_of_nodes() == 1 else (None,)
        shapes_ok &= v is not None and r.graph.degree(v) == 3
    codes = [r.code_str for r in nine]
    ok = eight == () and codes == [APEX9_CODE] and shapes_ok and t8 + t9 <= 600
    record(3, ok, f"length 8: {len(eight)} graphs; length 9: {len(nine)} graph(s), golden code "
                  f"{'matches' if codes == [APEX9_CODE] else 'differs'}, single degree-3 inner vertex: "
                  f"{shapes_ok}; {t8 + t9:.1f}s")
    assert ok


def rim_faces(G):
    """Inner faces through the degree-2 outer vertices."""
    out = set()
    for v in G.outer_walk():
        if G.degree(v) == 2:
            for d in ((v, G.rotation[v][0]), (G.rotation[v][0], v)):
                f = G.dart_face[d]
                if f != G.outer:
                    out.add(f)
    return out


def test_criterion_4_alternating_pattern():
    out, secs = enumerated(12, pattern_only=True)
    props = {}
    if len(out) == 1:
        G = out[0].graph
        walk = G.outer_walk()
        degs = [G.degree(v) for v in walk]
        props["outer length 12"] = len(walk) == 12
        props["degrees alternate 2 / at least 3"] = any(
            all(degs[i] == 2 for i in range(s, 12, 2)) and all(degs[i] >= 3 for i in range(1 - s, 12, 2))
            for s in (0, 1))
        faces = rim_faces(G)
        props["six rim 5-faces"] = len(faces) == 6 and all(len(G.faces[f]) == 5 for f in faces)
        props["girth 5"] = girth(G) == 5
        props["pattern detected"] = has_alternating_pattern(G)
        props["golden code"] = out[0].code_str == FIGURE2_CODE
        props["tag"] = out[0].tag == "figure-2"
        props["witness"] = is_critical(G, Subgraph(walk, zip(walk, walk[1:] + walk[:1])), out[0].witness).critical
    ok = len(out) == 1 and all(props.values())
    failed = [k for k, v in props.items() if not v]
    record(4, ok, f"{len(out)} critical graph(s) with the pattern; properties "
                  f"{'all hold' if not failed else 'failing: ' + ', '.join(failed)}; {secs:.1f}s")
    assert ok


# -- criterion 5 ---------------------------------------------------------------------------

def test_criterion_5_weight_audit():
    graphs = [r.graph for ell in (9, 10, 11) for r in enumerated(ell)[0]]
    graphs += [r.graph for r in enumerated(12, pattern_only=True)[0]]
    failed = [a for a in map(audit_bounds, graphs) if not a.passed]
    T = tight_graph()
    t = audit_bounds(T)
    tight_ok = (t.tag == NOT_EXCEPTIONAL and graph_weight(T) == Fraction(6, 7) == weight_fn(5) + 5 * W5
                and t.bound == Fraction(6, 7) and len(T.edges) == 20 == 18 * 10 - 160 and t.passed)
    ok = not failed and tight_ok
    record(5, ok, f"{len(graphs)} enumerated graphs audited, {len(failed)} failures; tight graph "
                  f"w={t.weight} bound={t.bound} |E|={t.edges} edge bound={t.edge_bound}")
    assert ok


# -- criterion 6 ---------------------------------------------------------------------------

def sample_instance(rng):
    n = rng.randint(2, 8)
    graphs = connected_girth5_planar(n)
    g = graphs[rng.randrange(len(graphs))]
    vs = sorted(g)
    sv = rng.sample(vs, rng.randint(1, min(3, n - 1)))
    se = [(a, b) for a, b in itertools.combinations(sorted(sv), 2) if g.has_edge(a, b) and rng.random() < 0.7]
    L = {v: frozenset(rng.sample(range(1, 4), rng.randint(1, 3))) for v in vs if v not in sv}
    return g, sv, se, L


def test_criterion_6_criticality_definitions_agree():
    rng = random.Random(20240607)
    disagreements = critical = strong = trivial = 0
    for _ in range(200):
        g, sv, se, L = sample_instance(rng)
        adj = {v: set(g[v]) for v in g}
        want = lattice_verdicts(adj, sv, se, L)
        S = Subgraph(sv, se)
        rep = is_critical(adj, S, L)
        st = is_strongly_critical(adj, S, L)
        if want is None:
            trivial += 1
            disagreements += rep.verdict != "equals-S"
            continue
        disagreements += (rep.critical != want[0]) + (st.strong != want[1])
        critical += want[0]
        strong += want[1]
    ok = disagreements == 0
    record(6, ok, f"200 sampled instances (seed 20240607), {critical} critical, {strong} strongly critical, "
                  f"{trivial} with G = S, {disagreements} disagreements")
    assert ok


# -- criteria 7 and 8 ----------------------------------------------------------------------

def all_enumerated():
    out = [r for ell in (9, 10, 11, 12) for r in enumerated(ell)[0]]
    seen = {r.code for r in out}
    out += [r for r in enumerated(12, pattern_only=True)[0] if r.code not in seen]
    return out


def face_walks(G):
    return {Walk(G.faces[f], True) for f in G.inner_faces() if G.face_is_cycle(f)}


def test_criterion_7_short_cycles():
    graphs = all_enumerated()
    violations = []
    checked = 0
    for r in graphs:
        G = r.graph
        faces = face_walks(G)
        outer = Walk(G.outer_walk(), True)
        for C in iter_cycles(G, 9):
            if C == outer:
                continue
            checked += 1
            k = len(C.vertices)
            if k <= 7 and C not in faces:
                violations.append((r.code_str, k))
            elif k == 8 and disk_interior(G, C):
                violations.append((r.code_str, k))
            elif k == 9 and len(disk_interior(G, C)) > 1:
                violations.append((r.code_str, k))
    ok = not violations
    record(7, ok, f"{len(graphs)} critical graphs, {checked} cycles of length at most 9, "
                  f"{len(violations)} violations")
    assert ok


def test_criterion_8_configurations():
    graphs = all_enumerated()
    empty = [r.code_str for r in graphs if not struct_config(r.graph, r.witness).tags]
    ok = not empty
    record(8, ok, f"{len(graphs)} critical graphs, {len(empty)} without a configuration")
    assert ok


# -- criterion 9 ---------------------------------------------------------------------------

def test_criterion_9_weight_properties():
    start = time.perf_counter()
    w = [None] + [weight_fn(x) for x in range(1, 201)]
    bad = sum(1 for x in range(1, 200) if w[x] > w[x + 1])
    bad += sum(1 for x in range(5, 201) if w[x] > x - 5 + W5)
    inc = [w[x] - w[x - 1] for x in range(2, 201)]
    bad += sum(1 for a, b in zip(inc, inc[1:]) if a > b)
    bad += sum(1 for _ in msum_violations(200))
    secs = time.perf_counter() - start
    ok = bad == 0 and secs < 1.0
    record(9, ok, f"{bad} violations up to 200, {secs:.2f}s")
    assert ok


# -- criterion 10 --------------------------------------------------------------------------

def test_criterion_10_counterexample_search():
    cli = subprocess.Popen([sys.executable, "-m", "listcrit", "search", "16"], stdout=subprocess.PIPE, text=True)
    res = search_thm3_counterexample(16)
    report = res.report()
    cli_out, _ = cli.communicate()
    body = cli_out.split("\n", 2)[2]
    same = body.startswith(report)
    verified = True
    if res.result is not None:
        G, L = res.result.graph, res.result.lists
        verified = find_coloring({v: set(G.rotation[v]) for v in G.vertices}, L) is None
    outcome = report.strip().splitlines()[-1 if res.result is None else -2]
    decided = res.result is not None or res.exhausted
    ok = decided and same and verified
    record(10, ok, f"16-vertex budget: {outcome}; {res.graphs} graphs, {res.patterns} size patterns, "
                   f"{len(res.undecided)} undecided; second run {'identical' if same else 'differs'}")
    assert ok
