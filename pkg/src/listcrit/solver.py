"""Exact list coloring, precoloring extension and criticality.

Extension questions are answered over *effective* precolorings of S.  Only
the attachments of S (vertices of S incident with an edge outside S) matter,
and for an attachment ``a`` only three things about its colour matter: whether
it equals a colour in the lists of its neighbours off S, whether it equals
the colour of an S-neighbour, and whether it equals the colour of a vertex
joined to ``a`` by an edge outside S with both ends in S.  The value set of
``a`` is therefore

* the union of the lists of its neighbours off S,
* the same unions for the other ends of such S-S edges,
* one private "fresh" token (distinct from every other value), and, when ``a``
  is incident with an S-S edge outside S, a few shared fresh tokens so that
  two attachments can receive the same colour nobody else cares about.

Every real precoloring of S behaves like exactly one effective one and vice
versa, so sets of extendable precolorings can be stored as boolean arrays
over the product of these value sets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .embed import Edge, PlaneGraph, Subgraph, edge_key
from .lists import HypothesisError, Lists, PrecoloredPath, bad_vertices, girth, is_valid

Coloring = dict


class ColoringError(ValueError):
    pass


# -- core backtracking on bitmask domains --------------------------------------

def _bit_colors(lists: Sequence[frozenset]) -> tuple[list[int], dict[int, int]]:
    palette = sorted(set().union(*lists)) if lists else []
    return palette, {c: i for i, c in enumerate(palette)}


def _search(nbrs: Sequence[Sequence[int]], doms: list[int], assign: list[int]) -> bool:
    """MRV backtracking; doms are bitmasks, assign holds bit indices or -1."""
    best, bc = -1, 99
    for v, d in enumerate(doms):
        if assign[v] < 0:
            c = d.bit_count()
            if c < bc:
                best, bc = v, c
                if c <= 1:
                    break
    if best < 0:
        return True
    if bc == 0:
        return False
    v = best
    d = doms[v]
    while d:
        low = d & -d
        d ^= low
        saved = []
        ok = True
        for w in nbrs[v]:
            if assign[w] < 0 and doms[w] & low:
                saved.append(w)
                doms[w] &= ~low
                if not doms[w]:
                    ok = False
        if ok:
            assign[v] = low.bit_length() - 1
            old = doms[v]
            doms[v] = low
            if _search(nbrs, doms, assign):
                return True
            doms[v] = old
            assign[v] = -1
        for w in saved:
            doms[w] |= low
    return False


def _enumerate(nbrs, doms: list[int], order: Sequence[int], assign: list[int], depth: int = 0):
    """All colorings, branching in a fixed vertex order."""
    if depth == len(order):
        yield assign
        return
    v = order[depth]
    d = doms[v]
    while d:
        low = d & -d
        d ^= low
        saved = []
        ok = True
        for w in nbrs[v]:
            if assign[w] < 0 and doms[w] & low:
                saved.append(w)
                doms[w] &= ~low
                if not doms[w]:
                    ok = False
        if ok:
            assign[v] = low.bit_length() - 1
            yield from _enumerate(nbrs, doms, order, assign, depth + 1)
            assign[v] = -1
        for w in saved:
            doms[w] |= low


def _graph_parts(G) -> tuple[list[int], dict[int, set[int]]]:
    if isinstance(G, PlaneGraph):
        return list(G.vertices), {v: set(G.rotation[v]) for v in G.vertices}
    if isinstance(G, Subgraph):
        adj = {v: set() for v in G.vertices}
        for u, v in G.edges:
            adj[u].add(v)
            adj[v].add(u)
        return sorted(adj), adj
    adj = {v: set(ns) for v, ns in G.items()}
    return sorted(adj), adj


def find_coloring(G, L: Lists, fixed: Mapping[int, int] | None = None) -> Coloring | None:
    """A proper coloring with c(v) in L(v), extending ``fixed``; None if none exists."""
    vs, adj = _graph_parts(G)
    fixed = dict(fixed or {})
    for v, c in fixed.items():
        if v not in adj:
            raise ColoringError(f"fixed vertex {v} not in graph")
        if v in L and c not in L[v]:
            raise ColoringError(f"fixed color {c} of {v} is not in its list")
        for w in adj[v]:
            if w in fixed and fixed[w] == c:
                raise ColoringError(f"fixed coloring is improper on {v}-{w}")
    free = [v for v in vs if v not in fixed]
    for v in free:
        if v not in L:
            raise ColoringError(f"vertex {v} has no list")
    palette, bit = _bit_colors([L[v] for v in free])
    idx = {v: i for i, v in enumerate(free)}
    doms = []
    for v in free:
        d = 0
        banned = {fixed[w] for w in adj[v] if w in fixed}
        for c in L[v]:
            if c not in banned:
                d |= 1 << bit[c]
        doms.append(d)
    nbrs = [[idx[w] for w in adj[v] if w in idx] for v in free]
    assign = [-1] * len(free)
    if not _search(nbrs, doms, assign):
        return None
    out = dict(fixed)
    for v, a in zip(free, assign):
        out[v] = palette[a]
    return out


def is_proper(G, coloring: Mapping[int, int], L: Lists | None = None) -> bool:
    _, adj = _graph_parts(G)
    for v, c in coloring.items():
        if L is not None and v in L and c not in L[v]:
            return False
        if any(coloring.get(w) == c for w in adj[v]):
            return False
    return True


def count_colorings(G, L: Lists) -> int:
    vs, adj = _graph_parts(G)
    palette, bit = _bit_colors([L[v] for v in vs])
    idx = {v: i for i, v in enumerate(vs)}
    doms = [sum(1 << bit[c] for c in L[v]) for v in vs]
    nbrs = [[idx[w] for w in adj[v]] for v in vs]
    return sum(1 for _ in _enumerate(nbrs, doms, list(range(len(vs))), [-1] * len(vs)))


# -- degree-choosability fast path -----------------------------------------------

def _is_2connected(vs, adj) -> bool:
    if len(vs) < 2:
        return False
    if len(vs) == 2:
        a, b = vs
        return b in adj[a]
    for x in vs:
        rest = [v for v in vs if v != x]
        seen = {rest[0]}
        stack = [rest[0]]
        while stack:
            y = stack.pop()
            for z in adj[y]:
                if z != x and z not in seen:
                    seen.add(z)
                    stack.append(z)
        if len(seen) != len(rest):
            return False
    return True


def degree_choosable_fastpath(H, L: Lists) -> str:
    """'colorable', 'exception' or 'inapplicable' for 2-connected H with |L| >= degree.

    Such an H is always colorable unless it is complete or an odd cycle and
    all lists are identical (with sizes equal to degrees).
    """
    vs, adj = _graph_parts(H)
    if not _is_2connected(vs, adj):
        return "inapplicable"
    if any(len(L[v]) < len(adj[v]) for v in vs):
        return "inapplicable"
    n = len(vs)
    ne = sum(len(adj[v]) for v in vs) // 2
    complete = ne == n * (n - 1) // 2
    odd_cycle = n % 2 == 1 and all(len(adj[v]) == 2 for v in vs)
    same = len({L[v] for v in vs}) == 1 and all(len(L[v]) == len(adj[v]) for v in vs)
    if (complete or odd_cycle) and same:
        return "exception"
    return "colorable"


# -- precolorings ----------------------------------------------------------------------

def precolorings(S, palette: Iterable[int] | None = None, L: Lists | None = None,
                 up_to_permutation: bool = False) -> Iterator[Coloring]:
    """Proper colorings of S from the palette.

    With ``L`` the palette defaults to the union of the lists plus one fresh
    colour.  ``up_to_permutation`` keeps one colouring per orbit of the
    permutations that fix every colour appearing in ``L``.
    """
    vs, adj = _graph_parts(S)
    fixed = set().union(*L.values()) if L else set()
    if palette is None:
        if not fixed:
            raise ColoringError("empty palette")
        palette = sorted(fixed) + [max(fixed) + 1]
    palette = sorted(set(palette))
    if not palette:
        raise ColoringError("empty palette")
    movable = [c for c in palette if c not in fixed]
    pinned = [c for c in palette if c in fixed]
    col: dict[int, int] = {}

    def rec(i, used_movable):
        if i == len(vs):
            yield dict(col)
            return
        v = vs[i]
        if up_to_permutation:
            options = pinned + movable[: min(used_movable + 1, len(movable))]
        else:
            options = palette
        for c in options:
            if any(col.get(w) == c for w in adj[v]):
                continue
            col[v] = c
            grew = up_to_permutation and c in movable and movable.index(c) == used_movable
            yield from rec(i + 1, used_movable + (1 if grew else 0))
            del col[v]

    yield from rec(0, 0)


# -- extension engine ----------------------------------------------------------------

_CHUNK = 1 << 22


class ExtensionProblem:
    """Precomputed data for extension questions about (G, S, L)."""

    def __init__(self, G, S, L: Lists):
        vs, adj = _graph_parts(G)
        S = Subgraph.of(S)
        self.G = G
        self.adj = adj
        self.S = S
        self.L = L
        sv = S.vertices
        self.interior = [v for v in vs if v not in sv]
        all_edges = {edge_key(u, w) for u in vs for w in adj[u]}
        self.free_edges = sorted(all_edges - S.edges)
        self.inner_edges = [e for e in self.free_edges if e[0] not in sv and e[1] not in sv]
        self.spokes = [e for e in self.free_edges if (e[0] in sv) != (e[1] in sv)]
        self.chords = [e for e in self.free_edges if e[0] in sv and e[1] in sv]
        touched = {x for e in self.free_edges for x in e if x in sv}
        self.attach = sorted(touched)
        self.apos = {a: i for i, a in enumerate(self.attach)}
        for v in self.interior:
            if v not in L or not L[v]:
                raise ColoringError(f"vertex {v} has no list")

        # interior graph
        self.ipos = {v: i for i, v in enumerate(self.interior)}
        self.palette, self.bit = _bit_colors([L[v] for v in self.interior])
        self.inbrs = [[self.ipos[w] for w in adj[v] if w in self.ipos] for v in self.interior]
        self.base_doms = [sum(1 << self.bit[c] for c in L[v]) for v in self.interior]
        self.a_inner = {a: sorted(w for w in adj[a] if w in self.ipos) for a in self.attach}
        chord_nbrs = {a: set() for a in self.attach}
        for a, b in self.chords:
            chord_nbrs[a].add(b)
            chord_nbrs[b].add(a)
        u_of = {a: set().union(*(L[w] for w in self.a_inner[a])) if self.a_inner[a] else set()
                for a in self.attach}
        n_shared = len([a for a in self.attach if chord_nbrs[a]])
        self.domains: list[list] = []
        for a in self.attach:
            vals = set(u_of[a])
            for b in chord_nbrs[a]:
                vals |= u_of[b]
            dom = sorted(vals)
            dom.append(("fresh", a))
            if chord_nbrs[a]:
                dom.extend(("shared", k) for k in range(n_shared))
            self.domains.append(dom)
        self.shape = tuple(len(d) for d in self.domains)
        self.size = int(np.prod(self.shape)) if self.shape else 1
        s_edges = [(a, b) for a, b in S.edges if a in self.apos and b in self.apos]
        self._s_ok = self._all_differ(s_edges)
        self._chord_ok = {e: self._all_differ([e]) for e in self.chords}
        self._ext_h = None
        self._ne = None

    # -- array helpers
    def _pair_neq(self, a, b) -> np.ndarray:
        i, j = self.apos[a], self.apos[b]
        da, db = self.domains[i], self.domains[j]
        m = np.array([[x != y for y in db] for x in da], dtype=bool)
        shp = [1] * len(self.shape)
        if i < j:
            shp[i], shp[j] = len(da), len(db)
            return m.reshape(shp)
        shp[j], shp[i] = len(db), len(da)
        return m.T.reshape(shp)

    def _all_differ(self, pairs) -> np.ndarray:
        out = np.ones(self.shape, dtype=bool)
        for a, b in pairs:
            out &= self._pair_neq(a, b)
        return out

    def _projections(self, doms: list[int], skip_edge: tuple[int, int] | None = None) -> set[tuple]:
        """Distinct colourings of the attached interior vertices that extend to the interior."""
        watched = sorted({self.ipos[w] for a in self.attach for w in self.a_inner[a]})
        nbrs = self.inbrs
        if skip_edge is not None:
            i, j = skip_edge
            nbrs = [list(n) for n in nbrs]
            nbrs[i].remove(j)
            nbrs[j].remove(i)
        out = set()
        n = len(doms)
        for part in _enumerate(nbrs, list(doms), watched, [-1] * n):
            rest_doms = list(doms)
            for k in watched:
                rest_doms[k] = 1 << part[k]
            tmp = list(part)
            # prune neighbours of the fixed part before checking the rest
            ok = True
            for k in watched:
                for w in nbrs[k]:
                    if tmp[w] < 0:
                        rest_doms[w] &= ~(1 << part[k])
                        if not rest_doms[w]:
                            ok = False
            if ok and (len(watched) == n or _search(nbrs, rest_doms, tmp)):
                out.add(tuple(part[k] for k in watched))
        self._watched = watched
        return out

    def _boxes(self, projections: Iterable[tuple], drop_spoke: tuple[int, int] | None = None) -> np.ndarray:
        """Union over colourings phi of the precolorings compatible with phi."""
        projections = list(projections)
        out = np.zeros(self.size, dtype=bool)
        if not projections:
            return out.reshape(self.shape)
        wpos = {k: i for i, k in enumerate(self._watched)}
        per_attach = []
        for ai, a in enumerate(self.attach):
            ws = [wpos[self.ipos[w]] for w in self.a_inner[a]
                  if drop_spoke is None or (a, w) != drop_spoke]
            dom = self.domains[ai]
            cache = {}
            rows = []
            for p in projections:
                key = frozenset(self.palette[p[i]] for i in ws)
                r = cache.get(key)
                if r is None:
                    r = np.array([x not in key for x in dom], dtype=bool)
                    cache[key] = r
                rows.append(r)
            per_attach.append(np.stack(rows))
        if not per_attach:
            return np.ones(self.shape, dtype=bool)
        # deduplicate identical boxes
        keyed = np.concatenate(per_attach, axis=1)
        keyed = np.unique(keyed, axis=0)
        splits = np.cumsum(self.shape)[:-1]
        mats = np.split(keyed, splits, axis=1)
        K = keyed.shape[0]
        step = max(1, _CHUNK // max(self.size, 1))
        for s in range(0, K, step):
            t = mats[0][s:s + step]
            for m in mats[1:]:
                t = (t[:, :, None] & m[s:s + step, None, :]).reshape(t.shape[0], -1)
            out |= t.any(axis=0)
        return out.reshape(self.shape)

    # -- extension sets
    @property
    def ext_interior(self) -> np.ndarray:
        if self._ext_h is None:
            self._proj = self._projections(self.base_doms)
            self._ext_h = self._boxes(self._proj)
        return self._ext_h

    def chords_ok(self, skip: Edge | None = None) -> np.ndarray:
        out = np.ones(self.shape, dtype=bool)
        for e, m in self._chord_ok.items():
            if e != skip:
                out &= m
        return out

    @property
    def extendable(self) -> np.ndarray:
        return self._s_ok & self.ext_interior & self.chords_ok()

    @property
    def non_extendable(self) -> np.ndarray:
        if self._ne is None:
            self._ne = self._s_ok & ~self.extendable
        return self._ne

    def extendable_without(self, e: Edge) -> np.ndarray:
        e = edge_key(*e)
        sv = self.S.vertices
        if e in self._chord_ok:
            return self._s_ok & self.ext_interior & self.chords_ok(skip=e)
        if (e[0] in sv) != (e[1] in sv):
            a, w = (e[0], e[1]) if e[0] in sv else (e[1], e[0])
            self.ext_interior
            return self._s_ok & self.chords_ok() & self._boxes(self._proj, drop_spoke=(a, w))
        i, j = self.ipos[e[0]], self.ipos[e[1]]
        extra = set()
        both = self.base_doms[i] & self.base_doms[j]
        while both:
            low = both & -both
            both ^= low
            doms = list(self.base_doms)
            doms[i] = doms[j] = low
            extra |= self._projections(doms, skip_edge=(i, j))
        return self.extendable | (self._s_ok & self.chords_ok() & self._boxes(extra))

    # -- decoding witnesses
    def decode(self, flat_index: int) -> Coloring:
        """A concrete proper colouring of S realising an effective precoloring."""
        idx = np.unravel_index(flat_index, self.shape) if self.shape else ()
        nxt = (max(self.palette) + 1) if self.palette else 1
        col: dict[int, int] = {}
        token_color: dict = {}
        for ai, a in enumerate(self.attach):
            val = self.domains[ai][int(idx[ai])]
            if isinstance(val, tuple):
                if val not in token_color:
                    token_color[val] = nxt
                    nxt += 1
                col[a] = token_color[val]
            else:
                col[a] = val
        for v in sorted(self.S.vertices):
            if v not in col:
                col[v] = nxt
                nxt += 1
        return col

    def extends(self, psi: Mapping[int, int], without: Edge | None = None) -> bool:
        """Direct check by solving, used to verify witnesses."""
        adj = {v: set(ns) for v, ns in self.adj.items()}
        skip = edge_key(*without) if without is not None else None
        if skip is not None:
            a, b = skip
            adj[a].discard(b)
            adj[b].discard(a)
        for a, b in self.chords:
            if (a, b) != skip and psi[a] == psi[b]:
                return False
        for a, b in self.S.edges:
            adj[a].discard(b)
            adj[b].discard(a)
        return find_coloring(adj, self.L, {v: c for v, c in psi.items()}) is not None


def _isolated_free_vertices(P: ExtensionProblem) -> list[int]:
    return [v for v in P.interior if not P.adj[v]]


@dataclass
class CriticalityReport:
    verdict: str
    witnesses: dict = field(default_factory=dict)
    failing_edge: tuple | None = None
    strong_witness: Coloring | None = None
    failing_vertex: int | None = None

    @property
    def critical(self) -> bool:
        return self.verdict in ("critical", "strongly-critical")

    @property
    def strong(self) -> bool:
        return self.verdict == "strongly-critical"


def _same_as_s(P: ExtensionProblem) -> bool:
    return not P.interior and not P.free_edges


def edge_criticality(P: ExtensionProblem, stop_on_failure: bool = True) -> dict[Edge, np.ndarray]:
    """For each edge outside S, the non-extendable precolorings that extend without it."""
    ne = P.non_extendable
    out = {}
    if not ne.any():
        if stop_on_failure and P.free_edges:
            return {P.free_edges[0]: np.zeros_like(ne)}
    for e in P.free_edges:
        m = ne & P.extendable_without(e)
        out[e] = m
        if stop_on_failure and not m.any():
            break
    return out


def is_critical(G, S, L: Lists, verify: bool = False) -> CriticalityReport:
    P = ExtensionProblem(G, S, L)
    if _same_as_s(P):
        return CriticalityReport("equals-S")
    iso = _isolated_free_vertices(P)
    if iso:
        return CriticalityReport("not-critical", failing_vertex=iso[0])
    table = edge_criticality(P)
    wit = {}
    for e in P.free_edges:
        m = table.get(e)
        if m is None or not m.any():
            return CriticalityReport("not-critical", wit, failing_edge=e)
        psi = P.decode(int(np.flatnonzero(m)[0]))
        if verify:
            _verify_witness(P, psi, e)
        wit[e] = psi
    return CriticalityReport("critical", wit)


def is_strongly_critical(G, S, L: Lists, verify: bool = False) -> CriticalityReport:
    P = ExtensionProblem(G, S, L)
    if _same_as_s(P):
        return CriticalityReport("equals-S")
    iso = _isolated_free_vertices(P)
    if iso:
        return CriticalityReport("not-critical", failing_vertex=iso[0])
    table = edge_criticality(P, stop_on_failure=False)
    common = P.non_extendable.copy()
    wit = {}
    failing = None
    for e in P.free_edges:
        m = table[e]
        if not m.any():
            failing = failing or e
        else:
            wit[e] = P.decode(int(np.flatnonzero(m)[0]))
        common &= m
    if failing is not None:
        return CriticalityReport("not-critical", wit, failing_edge=failing)
    if common.any():
        psi = P.decode(int(np.flatnonzero(common)[0]))
        if verify:
            for e in P.free_edges:
                _verify_witness(P, psi, e)
        return CriticalityReport("strongly-critical", wit, strong_witness=psi)
    return CriticalityReport("critical", wit)


def _verify_witness(P: ExtensionProblem, psi: Coloring, e: Edge):
    if P.extends(psi):
        raise AssertionError(f"witness {psi} extends to the whole graph")
    if not P.extends(psi, without=e):
        raise AssertionError(f"witness {psi} does not extend after deleting {e}")


def skeleton(H: PlaneGraph, S, L: Lists) -> PlaneGraph:
    """Greedily delete edges whose removal keeps the set of extendable precolorings."""
    S = Subgraph.of(S)
    G = H
    while True:
        P = ExtensionProblem(G, S, L)
        ne = P.non_extendable
        removable = None
        for e in P.free_edges:
            if not (ne & P.extendable_without(e)).any():
                removable = e
                break
        if removable is None:
            break
        G = G.delete_edge(*removable)
    keep = [v for v in G.vertices if v in S.vertices or G.degree(v) > 0]
    if len(keep) != len(G.vertices):
        G = G.subgraph(keep, G.edges)
    return G


# -- class A / class B ---------------------------------------------------------------

@dataclass
class ClassVerdict:
    tag: str
    witness: Coloring | None = None
    class_a: bool = False
    class_b: bool = False


def _uniform_on(P: ExtensionProblem, ne_idx: np.ndarray, xs: Sequence[int]) -> bool:
    for x in xs:
        if x not in P.apos:
            return False
        i = P.apos[x]
        vals = {P.domains[i][k] for k in ne_idx[i]}
        if len(vals) != 1 or isinstance(next(iter(vals)), tuple):
            return False
    return True


def classify_AB(G: PlaneGraph, P: PrecoloredPath, L: Lists, check: bool = True) -> ClassVerdict:
    pv = P.vertices
    if P.length != 4:
        raise HypothesisError("the precolored path must have length four")
    S = Subgraph(pv, zip(pv, pv[1:]))
    if check:
        _check_classify_hypotheses(G, P, L)
    if len(G.vertices) == 5 and len(G.edges) == 5 and all(G.degree(v) == 2 for v in G.vertices):
        return ClassVerdict("FiveFace")
    prob = ExtensionProblem(G, S, L)
    ne = prob.non_extendable
    if check:
        rep = is_critical(G, S, L)
        if not rep.critical:
            raise HypothesisError("graph is not P-critical")
    flat = np.flatnonzero(ne)
    if not flat.size:
        return ClassVerdict("NotClassified")
    ne_idx = np.unravel_index(flat, prob.shape)
    p1, p2, p3, p4, p5 = pv
    sizes = {v: len(L[v]) for v in L if v not in pv}

    def near_two(p):
        return any(sizes.get(w) == 2 for w in G.rotation[p])

    class_a = near_two(p1) and near_two(p5) and _uniform_on(prob, ne_idx, (p1, p2, p4, p5))
    class_b = _uniform_on(prob, ne_idx, (p1, p3, p5))
    witness = prob.decode(int(flat[0]))
    if class_a:
        return ClassVerdict("ClassA", witness, class_a, class_b)
    if class_b:
        return ClassVerdict("ClassB", witness, class_a, class_b)
    return ClassVerdict("NotClassified", None, class_a, class_b)


def _check_classify_hypotheses(G: PlaneGraph, P: PrecoloredPath, L: Lists):
    if girth(G) < 5:
        raise HypothesisError("girth is below 5")
    on_f = set(G.faces[G.outer])
    pv = set(P.vertices)
    if not pv <= on_f:
        raise HypothesisError("path is not on the outer face")
    for a, b in zip(P.vertices, P.vertices[1:]):
        if not G.has_edge(a, b):
            raise HypothesisError("path vertices are not adjacent")
    for v in G.vertices:
        if v in pv:
            continue
        s = len(L.get(v, ()))
        if s < 2 or (v not in on_f and s != 3):
            raise HypothesisError(f"list of {v} has the wrong size")
    if not is_valid(G, P, L):
        raise HypothesisError("list assignment is not valid")
    if bad_vertices(G, P, L) & pv:
        raise HypothesisError("a vertex of the path is bad")


def x_different(psi1: Mapping[int, int], psi2: Mapping[int, int], X: Iterable[int]) -> bool:
    return any(psi1[x] != psi2[x] for x in X)
