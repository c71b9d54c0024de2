"""Plane graphs stored as rotation systems.

A vertex's rotation is the clockwise cyclic order of its neighbours.  Faces
are traced with the rule: after arriving at ``v`` along ``u -> v``, leave
along the edge that follows ``v -> u`` clockwise around ``v``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

Dart = tuple[int, int]
Edge = tuple[int, int]


class EmbeddingError(ValueError):
    """Raised for rotation systems that do not describe a simple plane graph."""


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Walk:
    """A vertex sequence.  Closed walks do not repeat the first vertex at the end."""

    vertices: tuple[int, ...]
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def length(self) -> int:
        n = len(self.vertices)
        return n if self.closed else max(n - 1, 0)

    def edges(self) -> list[Edge]:
        vs = self.vertices
        out = [edge_key(a, b) for a, b in zip(vs, vs[1:])]
        if self.closed and len(vs) > 2:
            out.append(edge_key(vs[-1], vs[0]))
        return out

    def darts(self) -> list[Dart]:
        vs = self.vertices
        out = list(zip(vs, vs[1:]))
        if self.closed:
            out.append((vs[-1], vs[0]))
        return out

    def reversed(self) -> Walk:
        return Walk(self.vertices[::-1], self.closed)

    def canonical(self) -> tuple[int, ...]:
        vs = self.vertices
        if not self.closed:
            return min(vs, vs[::-1])
        if not vs:
            return vs
        cands = []
        for seq in (vs, vs[::-1]):
            cands.extend(seq[i:] + seq[:i] for i in range(len(seq)))
        return min(cands)

    def __eq__(self, other):
        if not isinstance(other, Walk):
            return NotImplemented
        return self.closed == other.closed and self.canonical() == other.canonical()

    def __hash__(self):
        return hash((self.closed, self.canonical()))

    def __repr__(self):
        kind = "cycle" if self.closed else "path"
        return f"Walk({kind} {' '.join(map(str, self.vertices))})"


@dataclass(frozen=True)
class FaceRef:
    index: int
    length: int


class Subgraph:
    """Plain vertex/edge sets, used for S and T arguments."""

    __slots__ = ("vertices", "edges")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[Sequence[int]] = ()):
        es = frozenset(edge_key(*e) for e in edges)
        vs = set(vertices)
        for u, v in es:
            vs.add(u)
            vs.add(v)
        self.vertices = frozenset(vs)
        self.edges = es

    @classmethod
    def of(cls, obj) -> Subgraph:
        if isinstance(obj, Subgraph):
            return obj
        if isinstance(obj, PlaneGraph):
            return cls(obj.vertices, obj.edges)
        if isinstance(obj, Walk):
            return cls(obj.vertices, obj.edges())
        return cls(obj)

    def __repr__(self):
        return f"Subgraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"


class PlaneGraph:
    """Immutable embedded simple graph with a designated outer face."""

    def __init__(
        self,
        rotation: Mapping[int, Sequence[int]],
        outer: Dart | None = None,
        *,
        allow_disconnected: bool = False,
        check: bool = True,
    ):
        self.rotation: dict[int, tuple[int, ...]] = {v: tuple(r) for v, r in rotation.items()}
        self._pos = {v: {w: i for i, w in enumerate(r)} for v, r in self.rotation.items()}
        if check:
            self._validate_simple()
        self._trace()
        if check:
            self._validate_euler(allow_disconnected)
        if outer is None:
            self.outer_dart = self.face_darts[0][0] if self.face_darts else None
        else:
            outer = tuple(outer)
            if outer not in self.dart_face:
                raise EmbeddingError(f"outer designator {outer} is not an edge")
            self.outer_dart = outer
        self.outer = self.dart_face[self.outer_dart] if self.outer_dart is not None else None

    # -- construction checks ------------------------------------------------
    def _validate_simple(self):
        for v, r in self.rotation.items():
            if v in r:
                raise EmbeddingError(f"loop at vertex {v}")
            if len(set(r)) != len(r):
                raise EmbeddingError(f"parallel edges at vertex {v}")
            for w in r:
                if w not in self.rotation or v not in self._pos[w]:
                    raise EmbeddingError(f"inconsistent rotation: {v} lists {w} but not conversely")

    def _trace(self):
        dart_face: dict[Dart, int] = {}
        faces: list[tuple[int, ...]] = []
        face_darts: list[tuple[Dart, ...]] = []
        for d in sorted((v, w) for v, r in self.rotation.items() for w in r):
            if d in dart_face:
                continue
            idx = len(faces)
            walk, ds = [], []
            u, v = d
            while (u, v) not in dart_face:
                dart_face[(u, v)] = idx
                walk.append(u)
                ds.append((u, v))
                r = self.rotation[v]
                u, v = v, r[(self._pos[v][u] + 1) % len(r)]
            faces.append(tuple(walk))
            face_darts.append(tuple(ds))
        self.faces = tuple(faces)
        self.face_darts = tuple(face_darts)
        self.dart_face = dart_face

    def _validate_euler(self, allow_disconnected: bool):
        comps = self.components()
        if not allow_disconnected and len(comps) > 1:
            raise EmbeddingError("graph is disconnected")
        face_comp = {}
        for i, ds in enumerate(self.face_darts):
            face_comp[i] = ds[0][0]
        comp_of = {v: k for k, c in enumerate(comps) for v in c}
        nfaces = [0] * len(comps)
        for i in face_comp:
            nfaces[comp_of[face_comp[i]]] += 1
        for k, c in enumerate(comps):
            if len(c) == 1:
                continue
            ne = sum(len(self.rotation[v]) for v in c) // 2
            if len(c) - ne + nfaces[k] != 2:
                raise EmbeddingError(
                    f"Euler check failed: V={len(c)} E={ne} F={nfaces[k]} (rotation is not planar)"
                )

    # -- basic queries -------------------------------------------------------
    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.rotation))

    @cached_property
    def edges(self) -> frozenset[Edge]:
        return frozenset(edge_key(v, w) for v, r in self.rotation.items() for w in r)

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        return {v: frozenset(r) for v, r in self.rotation.items()}

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._pos.get(u, ())

    def next_dart(self, d: Dart) -> Dart:
        u, v = d
        r = self.rotation[v]
        return (v, r[(self._pos[v][u] + 1) % len(r)])

    def face_ref(self, i: int) -> FaceRef:
        return FaceRef(i, len(self.faces[i]))

    def face_walk(self, i: int) -> Walk:
        return Walk(self.faces[i], closed=True)

    @property
    def outer_face(self) -> FaceRef | None:
        return None if self.outer is None else self.face_ref(self.outer)

    def outer_walk(self) -> tuple[int, ...]:
        """Outer boundary starting at the tail of the outer designator."""
        if self.outer is None:
            return tuple(self.vertices[:1])
        walk = self.faces[self.outer]
        ds = self.face_darts[self.outer]
        k = ds.index(self.outer_dart)
        return walk[k:] + walk[:k]

    def inner_faces(self) -> list[int]:
        return [i for i in range(len(self.faces)) if i != self.outer]

    def face_is_cycle(self, i: int) -> bool:
        f = self.faces[i]
        return len(f) >= 3 and len(set(f)) == len(f)

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for s in self.vertices:
            if s in seen:
                continue
            seen.add(s)
            comp, stack = [s], [s]
            while stack:
                x = stack.pop()
                for y in self.rotation[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    # -- derived graphs -------------------------------------------------------
    def subgraph(self, vertices: Iterable[int], edges: Iterable[Edge], outer: Dart | None = None,
                 allow_disconnected: bool = True) -> PlaneGraph:
        """Restrict the rotation to the given vertices and edges."""
        es = {edge_key(*e) for e in edges}
        vs = set(vertices)
        for u, v in es:
            vs.add(u)
            vs.add(v)
        rot = {v: [w for w in self.rotation[v] if edge_key(v, w) in es] for v in vs}
        if outer is None and self.outer_dart is not None and edge_key(*self.outer_dart) in es:
            outer = self.outer_dart
        return PlaneGraph(rot, outer, allow_disconnected=allow_disconnected, check=False)

    def delete_edge(self, u: int, v: int) -> PlaneGraph:
        e = edge_key(u, v)
        return self.subgraph(self.vertices, [f for f in self.edges if f != e])

    def mirror(self) -> PlaneGraph:
        rot = {v: r[::-1] for v, r in self.rotation.items()}
        outer = None if self.outer_dart is None else self.outer_dart[::-1]
        return PlaneGraph(rot, outer, allow_disconnected=True, check=False)

    def relabel(self, mapping: Mapping[int, int] | None = None) -> PlaneGraph:
        if mapping is None:
            mapping = {v: i for i, v in enumerate(self.vertices)}
        rot = {mapping[v]: [mapping[w] for w in r] for v, r in self.rotation.items()}
        outer = None if self.outer_dart is None else (mapping[self.outer_dart[0]], mapping[self.outer_dart[1]])
        return PlaneGraph(rot, outer, allow_disconnected=True, check=False)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def canonical_code(self, rooted: bool = True) -> tuple[int, ...]:
        return canonical_code(self, rooted=rooted)

    def __repr__(self):
        ol = None if self.outer is None else len(self.faces[self.outer])
        return f"PlaneGraph(|V|={len(self.rotation)}, |E|={len(self.edges)}, faces={len(self.faces)}, outer={ol})"


def build_plane_graph(rotations: Mapping[int, Sequence[int]], outer_hint: Dart | None = None,
                      allow_disconnected: bool = False) -> PlaneGraph:
    return PlaneGraph(rotations, outer_hint, allow_disconnected=allow_disconnected)


def from_coordinates(edges: Iterable[Sequence[int]], pos: Mapping[int, tuple[float, float]]) -> PlaneGraph:
    """Embed a straight-line drawing; the face of largest area becomes the outer face."""
    import math

    nbrs: dict[int, list[int]] = {v: [] for v in pos}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    rot = {}
    for v, ns in nbrs.items():
        x, y = pos[v]
        rot[v] = sorted(ns, key=lambda w: -math.atan2(pos[w][1] - y, pos[w][0] - x))
    G = PlaneGraph(rot)

    def area(i):
        f = G.faces[i]
        return abs(sum(pos[a][0] * pos[b][1] - pos[b][0] * pos[a][1] for a, b in zip(f, f[1:] + f[:1])))

    i = max(range(len(G.faces)), key=area)
    return PlaneGraph(rot, G.face_darts[i][0])


def cycle_graph(n: int, start: int = 0) -> PlaneGraph:
    vs = list(range(start, start + n))
    rot = {v: (vs[(i - 1) % n], vs[(i + 1) % n]) for i, v in enumerate(vs)}
    return PlaneGraph(rot, (vs[1], vs[0]))


# -- girth ---------------------------------------------------------------------

def girth(G: PlaneGraph) -> float:
    """Shortest cycle length by BFS from every vertex; inf for forests."""
    best = float("inf")
    adj = G.rotation
    for s in G.vertices:
        dist = {s: 0}
        parent = {s: None}
        q = deque([s])
        while q:
            x = q.popleft()
            if 2 * dist[x] + 1 >= best:
                break
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    q.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


# -- chords --------------------------------------------------------------------

def _face_cycle(G: PlaneGraph, F: FaceRef | int | None) -> tuple[int, ...]:
    i = G.outer if F is None else (F.index if isinstance(F, FaceRef) else F)
    if not G.face_is_cycle(i):
        raise EmbeddingError("face is not bounded by a cycle")
    return G.faces[i]


def t_chords(G: PlaneGraph, F: FaceRef | int | None = None, t: int = 1) -> list[Walk]:
    """All t-chords of face F (outer face by default), sorted canonically."""
    if t < 1:
        raise ValueError("t must be positive")
    cyc = _face_cycle(G, F)
    on_f = set(cyc)
    face_edges = set(Walk(cyc, True).edges())
    found: set[Walk] = set()
    if t == 1:
        for u, v in G.edges:
            if u in on_f and v in on_f and (u, v) not in face_edges:
                found.add(Walk((u, v)))
        return sorted(found, key=Walk.canonical)

    def extend(path):
        x = path[-1]
        for y in G.rotation[x]:
            if len(path) == t:
                if y in on_f and y != path[0]:
                    found.add(Walk(tuple(path) + (y,)))
            elif y not in on_f and y not in path:
                path.append(y)
                extend(path)
                path.pop()

    for q0 in cyc:
        for q1 in G.rotation[q0]:
            if q1 not in on_f:
                extend([q0, q1])
    return sorted(found, key=Walk.canonical)


def is_t_chord(G: PlaneGraph, Q: Walk, F: FaceRef | int | None = None) -> bool:
    vs = Q.vertices
    if Q.closed or len(vs) < 2 or len(set(vs)) != len(vs):
        return False
    try:
        cyc = _face_cycle(G, F)
    except EmbeddingError:
        return False
    on_f = set(cyc)
    if not all(G.has_edge(a, b) for a, b in zip(vs, vs[1:])):
        return False
    if vs[0] not in on_f or vs[-1] not in on_f or any(v in on_f for v in vs[1:-1]):
        return False
    if len(vs) == 2:
        return edge_key(*vs) not in set(Walk(cyc, True).edges())
    return True


# -- disks and splits ----------------------------------------------------------

def _cycle_sides(G: PlaneGraph, C: Walk) -> tuple[set[int], set[int], list[Dart]]:
    """Faces inside C and the darts of C that face away from the inside."""
    vs = C.vertices
    if not C.closed or len(vs) < 3 or len(set(vs)) != len(vs):
        raise EmbeddingError("not a cycle")
    for a, b in C.darts():
        if not G.has_edge(a, b):
            raise EmbeddingError(f"cycle edge {a}-{b} is not in the graph")
    cyc_edges = set(C.edges())
    fwd = C.darts()
    rev = [(b, a) for a, b in fwd]

    def flood(seeds):
        region = set(seeds)
        stack = list(region)
        while stack:
            f = stack.pop()
            for a, b in G.face_darts[f]:
                if edge_key(a, b) in cyc_edges:
                    continue
                g = G.dart_face[(b, a)]
                if g not in region:
                    region.add(g)
                    stack.append(g)
        return region

    left = flood(G.dart_face[d] for d in fwd)
    if G.outer in left:
        right = flood(G.dart_face[d] for d in rev)
        return right, left, fwd
    return left, set(range(len(G.faces))) - left, rev


def disk_subgraph(G: PlaneGraph, C: Walk) -> PlaneGraph:
    """Everything drawn in the closed disk bounded by C, with C as outer face."""
    if len(C.vertices) == len(G.faces[G.outer]) and Walk(G.faces[G.outer], True) == C:
        raise EmbeddingError("cycle is the outer face")
    inside, _, out_darts = _cycle_sides(G, C)
    es = set(C.edges())
    for f in inside:
        for a, b in G.face_darts[f]:
            es.add(edge_key(a, b))
    return G.subgraph(C.vertices, es, outer=out_darts[0])


def disk_interior(G: PlaneGraph, C: Walk) -> set[int]:
    """Vertices strictly inside C."""
    D = disk_subgraph(G, C)
    return set(D.vertices) - set(C.vertices)


def chord_cycles(G: PlaneGraph, Q: Walk) -> tuple[Walk, Walk]:
    """The two cycles of (outer cycle + Q) other than the outer cycle."""
    if not is_t_chord(G, Q):
        raise EmbeddingError(f"{Q} is not a chord of the outer face")
    outer = G.outer_walk()
    q0, qt = Q.vertices[0], Q.vertices[-1]
    i, j = outer.index(q0), outer.index(qt)
    n = len(outer)
    arc1 = [outer[(i + k) % n] for k in range((j - i) % n + 1)]
    arc2 = [outer[(j + k) % n] for k in range((i - j) % n + 1)]
    inner = list(Q.vertices[1:-1])
    return Walk(tuple(arc1) + tuple(inner[::-1]), closed=True), Walk(tuple(arc2) + tuple(inner), closed=True)


def split_along(G: PlaneGraph, Q: Walk) -> tuple[PlaneGraph, PlaneGraph]:
    c1, c2 = chord_cycles(G, Q)
    return disk_subgraph(G, c1), disk_subgraph(G, c2)


def s_component(G: PlaneGraph, S, T=None) -> list[PlaneGraph]:
    """S together with each bridge of S that meets T only inside S."""
    S = Subgraph.of(S)
    T = Subgraph.of(T) if T is not None else Subgraph()
    out = []
    seen: set[int] = set()
    bridges: list[tuple[set[int], set[Edge]]] = []
    for s in G.vertices:
        if s in S.vertices or s in seen:
            continue
        comp, stack, es = {s}, [s], set()
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in G.rotation[x]:
                es.add(edge_key(x, y))
                if y not in S.vertices and y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        bridges.append((comp, es))
    for e in sorted(G.edges):
        if e[0] in S.vertices and e[1] in S.vertices and e not in S.edges:
            bridges.append((set(), {e}))
    for comp, es in bridges:
        if comp & T.vertices or es & T.edges:
            continue
        out.append(G.subgraph(S.vertices | comp, S.edges | es))
    if not out:
        out.append(G.subgraph(S.vertices, S.edges))
    return out


# -- canonical codes -----------------------------------------------------------

def _bfs_code(rot, pos, start: Dart, forward: bool, best):
    u0, w0 = start
    number = {u0: 0}
    order = [u0]
    first = {u0: w0}
    code = []
    i = 0
    blen = len(best) if best is not None else None
    while i < len(order):
        x = order[i]
        i += 1
        r = rot[x]
        d = len(r)
        p = pos[x][first[x]]
        for k in range(d):
            y = r[(p + k) % d] if forward else r[(p - k) % d]
            if y not in number:
                number[y] = len(order)
                order.append(y)
                first[y] = x
            code.append(number[y] + 1)
        code.append(0)
        if best is not None:
            n = len(code)
            if n <= blen:
                pref = best[:n]
                c = tuple(code)
                if c > pref:
                    return None
                if c < pref:
                    best = None
    return tuple(code)


def canonical_code(G: PlaneGraph, rooted: bool = True) -> tuple[int, ...]:
    """Minimum BFS code over root darts and both orientations.

    With ``rooted`` the root dart runs along the outer face, so two graphs get
    equal codes exactly when some homeomorphism of the sphere maps one onto
    the other and the outer face onto the outer face.
    """
    if not G.edges:
        return (len(G.vertices),)
    if rooted:
        fwd = list(G.face_darts[G.outer])
        bwd = [(b, a) for a, b in fwd]
        # only start from darts whose outer degree sequence is least
        degs = [len(G.rotation[a]) for a, _ in fwd]
        n = len(degs)
        keys_f = [tuple(degs[(i + k) % n] for k in range(n)) for i in range(n)]
        keys_b = [tuple(degs[(i + 1 - k) % n] for k in range(n)) for i in range(n)]
        least = min(min(keys_f), min(keys_b))
        fwd = [d for d, key in zip(fwd, keys_f) if key == least]
        bwd = [d for d, key in zip(bwd, keys_b) if key == least]
    else:
        fwd = [(v, w) for v, r in G.rotation.items() for w in r]
        bwd = fwd
    best = None
    for starts, forward in ((fwd, True), (bwd, False)):
        for d in starts:
            c = _bfs_code(G.rotation, G._pos, d, forward, best)
            if c is not None and (best is None or c < best):
                best = c
    return (len(G.vertices),) + best


def code_to_str(code: Sequence[int]) -> str:
    return ".".join(map(str, code))


def graph_from_code(code: Sequence[int]) -> PlaneGraph:
    """Rebuild a graph from a rooted canonical code (vertex 0 is the root)."""
    code = list(code)
    n = code[0]
    rot: dict[int, list[int]] = {v: [] for v in range(n)}
    v = 0
    for c in code[1:]:
        if c == 0:
            v += 1
        else:
            rot[v].append(c - 1)
    if n == 1 or not rot[0]:
        return PlaneGraph(rot, None, allow_disconnected=True)
    return PlaneGraph(rot, (0, rot[0][0]))


# -- text format ----------------------------------------------------------------

def parse_pg(text: str) -> PlaneGraph:
    n = None
    rot: dict[int, list[int]] = {}
    where: dict[int, int] = {}
    outer = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            head, _, rest = line.partition(" ")
            if head == "pg":
                n = int(rest)
            elif head == "v":
                vid, _, nbrs = rest.partition(":")
                rot[int(vid)] = [int(x) for x in nbrs.split()]
                where[int(vid)] = lineno
            elif head == "outer":
                u, w = rest.split()
                outer = (int(u), int(w))
            else:
                raise ValueError(f"unknown record {head!r}")
        except ValueError as exc:
            raise EmbeddingError(f"line {lineno}: {exc}") from None
    if n is None:
        raise EmbeddingError("missing 'pg <n>' header")
    for v in range(n):
        rot.setdefault(v, [])
    if len(rot) != n:
        raise EmbeddingError(f"header says {n} vertices, found {len(rot)}")
    for v, ln in where.items():
        r = rot[v]
        if v in r:
            raise EmbeddingError(f"line {ln}: loop at vertex {v}")
        if len(set(r)) != len(r):
            raise EmbeddingError(f"line {ln}: parallel edges at vertex {v}")
        for w in r:
            if w not in rot or v not in rot[w]:
                raise EmbeddingError(f"line {ln}: edge {v}-{w} is missing from the rotation of {w}")
    return PlaneGraph(rot, outer, allow_disconnected=n <= 1)


def dump_pg(G: PlaneGraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"pg {len(G.vertices)}")
    for v in G.vertices:
        lines.append(f"v {v}: " + " ".join(map(str, G.rotation[v])))
    if G.outer_dart is not None:
        lines.append(f"outer {G.outer_dart[0]} {G.outer_dart[1]}")
    return "\n".join(lines) + "\n"


def iter_cycles(G: PlaneGraph, max_len: int) -> Iterator[Walk]:
    """Every cycle of length at most max_len, once each."""
    vs = G.vertices
    for s in vs:
        path = [s]
        on = {s}

        def rec():
            x = path[-1]
            for y in G.rotation[x]:
                if y == s and len(path) >= 3:
                    if path[1] < path[-1]:
                        yield Walk(tuple(path), True)
                elif y > s and y not in on and len(path) < max_len:
                    path.append(y)
                    on.add(y)
                    yield from rec()
                    on.discard(y)
                    path.pop()

        yield from rec()
