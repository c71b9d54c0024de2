"""Face weights, reducible configurations and size bounds, in exact arithmetic."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .embed import (EmbeddingError, PlaneGraph, Walk, canonical_code, chord_cycles, code_to_str,
                    disk_subgraph, edge_key, girth, t_chords)

W5 = Fraction(1, 7)

E1, E2, E3, NOT_EXCEPTIONAL = "E1", "E2", "E3", "NotExceptional"


def weight_fn(x: int) -> Fraction:
    if x < 1:
        raise ValueError("face length must be positive")
    if x <= 4:
        return Fraction(0)
    if x == 5:
        return W5
    return Fraction(x - 5)


def graph_weight(G: PlaneGraph) -> Fraction:
    return sum((weight_fn(len(G.faces[f])) for f in G.inner_faces()), Fraction(0))


def check_msum(max_z: int) -> bool:
    """w(x) + w(y) <= w(z - m) + w(m) whenever x + y = z <= max_z and x, y >= m >= 1."""
    return next(msum_violations(max_z), None) is None


def msum_violations(max_z: int):
    # 7 w(x) is an integer, so the sweep compares exact scaled integers
    w7 = [0] * (max_z + 1)
    for x in range(1, max_z + 1):
        scaled = 7 * weight_fn(x)
        assert scaled.denominator == 1
        w7[x] = scaled.numerator
    for z in range(2, max_z + 1):
        for x in range(1, z):
            y = z - x
            lhs = w7[x] + w7[y]
            for m in range(1, min(x, y) + 1):
                if lhs > w7[z - m] + w7[m]:
                    yield (x, y, m)


# -- exceptional graphs -----------------------------------------------------------

def _outer_is_cycle(G: PlaneGraph) -> bool:
    return G.outer is not None and G.face_is_cycle(G.outer)


def _has_outer_chord(G: PlaneGraph) -> bool:
    walk = G.outer_walk()
    on_f = set(walk)
    face_edges = set(Walk(walk, True).edges())
    return any(u in on_f and v in on_f and (u, v) not in face_edges for u, v in G.edges)


def exceptional_class(G: PlaneGraph) -> str:
    n = len(G.vertices)
    if n >= 5 and G.is_connected() and all(G.degree(v) == 2 for v in G.vertices):
        return E1
    if not _outer_is_cycle(G) or girth(G) < 5:
        return NOT_EXCEPTIONAL
    ell = len(G.faces[G.outer])
    if n == ell and len(G.edges) == ell + 1:
        return E2
    if n == ell + 1 and len(G.edges) == ell + 3 and not _has_outer_chord(G):
        (v,) = set(G.vertices) - set(G.outer_walk())
        if G.degree(v) == 3:
            return E3
    return NOT_EXCEPTIONAL


# -- jumps and peelings --------------------------------------------------------------

@dataclass(frozen=True)
class Jump:
    base: tuple[int, int, int, int, int]
    body: tuple[int, int, int, int, int]
    faces: tuple[int, int]

    @property
    def internal(self) -> frozenset:
        return frozenset(self.base[1:4]) | frozenset(self.body[1:4])

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.base) | frozenset(self.body)

    @property
    def edges(self) -> frozenset:
        es = set(Walk(self.base).edges()) | set(Walk(self.body).edges())
        es.add(edge_key(self.base[2], self.body[2]))
        return frozenset(es)

    def disjoint(self, other: Jump) -> bool:
        return not (self.internal & other.internal)


def _face_after(G: PlaneGraph, f: int, v: int, steps: int) -> int:
    walk = G.faces[f]
    return walk[(walk.index(v) + steps) % len(walk)]


def find_jumps(G: PlaneGraph) -> list[Jump]:
    if G.outer is None:
        return []
    W = G.outer_walk()
    on_f = set(W)
    n = len(W)
    out = set()
    for i in range(n):
        base = tuple(W[(i + k) % n] for k in range(5))
        if len(set(base)) != 5:
            continue
        v1, v2, v3, v4, v5 = base
        f1 = G.dart_face[(v2, v1)]
        f2 = G.dart_face[(v4, v3)]
        if f1 == G.outer or f2 == G.outer or f1 == f2:
            continue
        if G.dart_face[(v3, v2)] != f1 or G.dart_face[(v5, v4)] != f2:
            continue
        if len(G.faces[f1]) != 5 or len(G.faces[f2]) != 5:
            continue
        # the inner faces run v3 v2 v1 x y and v5 v4 v3 y z
        x, y = _face_after(G, f1, v1, 1), _face_after(G, f1, v1, 2)
        y2, z = _face_after(G, f2, v3, 1), _face_after(G, f2, v3, 2)
        if y != y2 or _face_after(G, f2, z, 1) != v5 or _face_after(G, f1, y, 1) != v3:
            continue
        if {x, y, z} & on_f or len({x, y, z}) != 3:
            continue
        out.add(Jump(base, (v1, x, y, z, v5), (f1, f2)))
    return sorted(out, key=lambda j: j.base)


@dataclass(frozen=True)
class Peeling:
    jumps: tuple[Jump, ...]
    graph: PlaneGraph


def peel(G: PlaneGraph, jumps) -> PlaneGraph:
    drop = set()
    for j in jumps:
        drop |= set(j.base[1:4])
    keep = [v for v in G.vertices if v not in drop]
    es = [e for e in G.edges if e[0] not in drop and e[1] not in drop]
    outer = G.outer_dart
    if outer is not None and (outer[0] in drop or outer[1] in drop):
        # the body of the first jump takes the place of its base
        j = jumps[0]
        outer = (j.body[0], j.body[1])
    return G.subgraph(keep, es, outer=outer)


def peelings_with_jumps(G: PlaneGraph) -> list[Peeling]:
    jumps = find_jumps(G)
    out = [Peeling((), G)]
    for j in jumps:
        out.append(Peeling((j,), peel(G, [j])))
    for a, b in itertools.combinations(jumps, 2):
        if a.disjoint(b):
            out.append(Peeling((a, b), peel(G, [a, b])))
    return out


def peelings(G: PlaneGraph) -> list[PlaneGraph]:
    return [p.graph for p in peelings_with_jumps(G)]


# -- configurations -------------------------------------------------------------------

@dataclass
class StructReport:
    tags: set[str] = field(default_factory=set)
    witnesses: dict[str, str] = field(default_factory=dict)
    critical: bool | None = None  # None when no lists were given

    def add(self, tag: str, why: str):
        if tag not in self.tags:
            self.tags.add(tag)
            self.witnesses[tag] = why

    @property
    def flagged(self) -> bool:
        return self.critical is False


def _face_cycles(G: PlaneGraph) -> set[Walk]:
    return {Walk(G.faces[f], True) for f in range(len(G.faces)) if G.face_is_cycle(f)}


def _meets_in_edge(cycle_vs: set, cycle_es: set, other_vs: set, other_es: set, a: int, b: int) -> bool:
    # the two subgraphs intersect exactly in the edge ab
    return cycle_vs & other_vs == {a, b} and edge_key(a, b) in cycle_es & other_es


def _disk_is_trivial(G: PlaneGraph, K: Walk, middle: int) -> bool:
    """Disk of K is K itself or K plus one chord at ``middle``."""
    try:
        D = disk_subgraph(G, K)
    except EmbeddingError:
        return False
    if set(D.vertices) != set(K.vertices):
        return False
    extra = set(D.edges) - set(K.edges())
    return not extra or (len(extra) == 1 and middle in next(iter(extra)))


def struct_config(G: PlaneGraph, L: Mapping[int, frozenset] | None = None) -> StructReport:
    """Every configuration (a)-(h) present in G, each with a short witness."""
    rep = StructReport()
    if L is not None:
        from .enumeration import outer_cycle
        from .solver import is_critical

        rep.critical = is_critical(G, outer_cycle(G), L).critical
    faces_g = _face_cycles(G)
    outer_g = G.outer_walk()
    on_f = set(outer_g)

    # (c) and (f) only look at G
    n = len(outer_g)
    for i in range(n):
        a, b = outer_g[i], outer_g[(i + 1) % n]
        if G.degree(a) == 2 and G.degree(b) == 2:
            rep.add("c", f"outer vertices {a} {b} have degree two")
            break
    X = {v for v in G.vertices if v not in on_f and any(w in on_f for w in G.rotation[v])}
    path = _path_in(G, X, 4)
    if path:
        rep.add("f", "path " + " ".join(map(str, path)))

    for pl in peelings_with_jumps(G):
        H = pl.graph
        name = "G" if not pl.jumps else "peeling at " + ",".join(str(j.base[2]) for j in pl.jumps)
        if not _outer_is_cycle(H) or _has_outer_chord(H):
            rep.add("a", f"{name}: outer face is not an induced cycle")
            continue
        for Q in t_chords(H, t=2):
            rep.add("b", f"{name}: 2-chord {' '.join(map(str, Q.vertices))}")
            break
        for Q in t_chords(H, t=3):
            cs = chord_cycles(H, Q)
            if not any(c in faces_g for c in cs):
                rep.add("d", f"{name}: 3-chord {' '.join(map(str, Q.vertices))}")
                break
        jumps_h = find_jumps(H)
        faces5 = [Walk(H.faces[f], True) for f in H.inner_faces() if len(H.faces[f]) == 5 and H.face_is_cycle(f)]
        B = set(H.outer_walk())
        for Q in t_chords(H, t=4):
            qs = " ".join(map(str, Q.vertices))
            cs = chord_cycles(H, Q)
            mid = Q.vertices[2]
            if "e" not in rep.tags and not any(_disk_is_trivial(G, K, mid) for K in cs):
                rep.add("e", f"{name}: 4-chord {qs}")
            for C in cs:
                if C not in faces_g:
                    continue
                cv, ce = set(C.vertices), set(C.edges())
                for q in (Q.vertices, Q.vertices[::-1]):
                    v0, v1, _, v3, v4 = q
                    if "g" not in rep.tags:
                        for J in jumps_h:
                            if _meets_in_edge(cv, ce, set(J.vertices), set(J.edges), v0, v1):
                                rep.add("g", f"{name}: 4-chord {qs} with jump at {J.base[2]}")
                                break
                    if "h" not in rep.tags:
                        c1s = [F5 for F5 in faces5 if len(set(F5.vertices) & B) == 3
                               and _meets_in_edge(cv, ce, set(F5.vertices), set(F5.edges()), v0, v1)]
                        c2s = [F5 for F5 in faces5 if len(set(F5.vertices) & B) == 3
                               and _meets_in_edge(cv, ce, set(F5.vertices), set(F5.edges()), v3, v4)]
                        if c1s and c2s:
                            rep.add("h", f"{name}: 4-chord {qs} with 5-faces {c1s[0]} {c2s[0]}")
    return rep


def _path_in(G: PlaneGraph, allowed: set, k: int) -> tuple[int, ...] | None:
    """Least path on k vertices inside ``allowed``."""

    def rec(path):
        if len(path) == k:
            return tuple(path)
        for y in sorted(G.rotation[path[-1]]):
            if y in allowed and y not in path:
                hit = rec(path + [y])
                if hit:
                    return hit
        return None

    for s in sorted(allowed):
        hit = rec([s])
        if hit:
            return hit
    return None


# -- bounds ------------------------------------------------------------------------

@dataclass
class WeightAudit:
    length: int
    weight: Fraction
    bound: Fraction
    tag: str
    vertices: int
    edges: int
    edge_bound: int | None
    vertex_bound: Fraction | None
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def weight_bound(ell: int, tag: str) -> Fraction:
    if tag == E1:
        return weight_fn(ell)
    if tag == E2:
        return weight_fn(ell - 3) + W5
    if tag == E3:
        return weight_fn(ell - 4) + 2 * W5
    return weight_fn(ell - 5) + 5 * W5


def audit_bounds(G: PlaneGraph, tag: str | None = None) -> WeightAudit:
    tag = exceptional_class(G) if tag is None else tag
    ell = len(G.faces[G.outer])
    w = graph_weight(G)
    bound = weight_bound(ell, tag)
    checks = {"weight": w <= bound}
    if tag != E1:
        checks["exceptional-shortcut"] = tag == NOT_EXCEPTIONAL or w <= weight_fn(ell)
    if tag == NOT_EXCEPTIONAL:
        checks["length"] = ell >= 10
    nv, ne = len(G.vertices), len(G.edges)
    e_bound = v_bound = None
    if ell >= 10:
        e_bound = 18 * ell - 160
        v_bound = Fraction(37 * ell - 320, 3)
        checks["edges"] = ne <= e_bound
        checks["vertices"] = nv <= v_bound
    return WeightAudit(ell, w, bound, tag, nv, ne, e_bound, v_bound, checks)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def audit_line(G: PlaneGraph, audit: WeightAudit, configs: set[str] = frozenset()) -> str:
    tags = ",".join(sorted(configs)) or "-"
    verdict = "pass" if audit.passed else "FAIL"
    code = code_to_str(canonical_code(G))
    return (f"{code} {audit.tag} {_frac(audit.weight)} {_frac(audit.bound)} {verdict} "
            f"{audit.vertices} {audit.edges} {tags}")
