"""Exhaustive search for critical graphs with a short outer cycle.

Candidates are grown from the bare outer cycle by repeatedly drawing an ear
(a path whose ends are distinct vertices of an inner face) across an inner
face.  Every 2-connected plane graph containing the outer cycle arises this
way, and every intermediate graph is a subgraph of the final one, so girth,
induced-outer-cycle and size constraints can prune intermediate states.
Isomorphic states are merged by canonical code.
"""
from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .embed import PlaneGraph, Subgraph, canonical_code, code_to_str, cycle_graph, graph_from_code


class BudgetExceeded(RuntimeError):
    """Raised when a search stops before it is exhaustive."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class CandidateFilter:
    length: int
    max_interior: int | None = None
    girth_floor: int = 5
    min_interior_degree: int = 3
    alternating: bool = False  # every second outer vertex has degree 2 and lies on a 5-face
    outer_chords: bool = False

    def __post_init__(self):
        if self.length < 3:
            raise ValueError("outer length must be at least 3")
        if self.alternating and self.length % 2:
            raise ValueError("the alternating pattern needs an even outer length")

    @property
    def interior_bound(self) -> int:
        if self.max_interior is not None:
            return self.max_interior
        if self.alternating:
            return self.length - 2
        return max(self.length - 5, 0)


# -- ear growth ---------------------------------------------------------------------

def _bfs_dist(rot, s, t, limit):
    if s == t:
        return 0
    dist = {s: 0}
    q = deque([s])
    while q:
        x = q.popleft()
        d = dist[x]
        if d >= limit:
            return limit + 1
        for y in rot[x]:
            if y not in dist:
                if y == t:
                    return d + 1
                dist[y] = d + 1
                q.append(y)
    return limit + 1


def _add_ear(rot: dict, face_walk: Sequence[int], i: int, j: int, m: int, next_id: int) -> dict:
    """Copy of rot with an ear of m new vertices from face_walk[i] to face_walk[j]."""
    x, y = face_walk[i], face_walk[j]
    xp, yp = face_walk[i - 1], face_walk[j - 1]
    new = list(range(next_id, next_id + m))
    path = [x] + new + [y]
    out = {v: list(r) for v, r in rot.items()}
    rx = out[x]
    rx.insert(rx.index(xp) + 1, path[1])
    ry = out[y]
    ry.insert(ry.index(yp) + 1, path[-2])
    for k, v in enumerate(new, 1):
        out[v] = [path[k - 1], path[k + 1]]
    return out


def _deficit_feasible(ell, k, E, D, r):
    # some final size must leave room for the edges that remove every deficit
    for m in range(r + 1):
        q = -(-(D + m) // 2)
        if 3 * (E + m + q) <= 4 * ell + 5 * (k + m) - 5:
            return True
    return False


def _interior_deficit(rot, ell):
    return sum(max(0, 3 - len(r)) for v, r in rot.items() if v >= ell)


def _even_face(G: PlaneGraph, v: int) -> int:
    """Inner face through the degree-2 outer vertex v."""
    for d in ((v, G.rotation[v][0]), (G.rotation[v][0], v)):
        f = G.dart_face[d]
        if f != G.outer:
            return f
    raise AssertionError


def generate_candidates(flt: CandidateFilter, budget_s: float | None = None,
                        stats: dict | None = None) -> list[PlaneGraph]:
    """All candidate graphs for the filter, sorted by canonical code."""
    ell = flt.length
    kmax = flt.interior_bound
    base = cycle_graph(ell)
    # outer vertices are 0..ell-1; in alternating mode the odd ones stay of degree 2
    frozen = set(range(1, ell, 2)) if flt.alternating else set()
    start = time.monotonic()
    seen = {canonical_code(base)}
    frontier = {len(base.edges): [base]}
    results = {}
    expanded = 0
    emax = (4 * ell + 5 * kmax - 5) // 3
    while frontier:
        ecount = min(frontier)
        layer = frontier.pop(ecount)
        for G in layer:
            expanded += 1
            if budget_s is not None and time.monotonic() - start > budget_s:
                raise BudgetExceeded(f"candidate generation exceeded {budget_s}s", sorted(results.values(), key=canonical_code))
            k = len(G.vertices) - ell
            if _is_final(G, ell, flt, frozen):
                results[canonical_code(G)] = G
            rot = {v: list(r) for v, r in G.rotation.items()}
            D = _interior_deficit(rot, ell)
            r_left = kmax - k
            open_faces = G.inner_faces()
            if flt.alternating:
                pending = [v for v in sorted(frozen) if len(G.faces[_even_face(G, v)]) > 5]
                if pending:
                    for H in _close_rim_face(G, pending[0], ell, flt.girth_floor):
                        k_new = len(H.vertices) - ell
                        e_new = len(H.edges)
                        if k_new > kmax or e_new > emax:
                            continue
                        D_new = _interior_deficit(H.rotation, ell)
                        if not _deficit_feasible(ell, k_new, e_new, D_new, kmax - k_new):
                            continue
                        code = canonical_code(H)
                        if code not in seen:
                            seen.add(code)
                            frontier.setdefault(e_new, []).append(H)
                    continue
                rim = {_even_face(G, v) for v in frozen}
                open_faces = [f for f in open_faces if f not in rim]
            # a vertex that still needs an edge must be an end of the next ear
            deficient = [v for v in G.vertices if v >= ell and len(rot[v]) < flt.min_interior_degree]
            anchor = deficient[0] if deficient else None
            for f in open_faces:
                walk = G.faces[f]
                n = len(walk)
                for i, j in itertools.combinations(range(n), 2):
                    x, y = walk[i], walk[j]
                    if x in frozen or y in frozen:
                        continue
                    if anchor is not None and anchor != x and anchor != y:
                        continue
                    for m in range(r_left + 1):
                        if m == 0 and x < ell and y < ell and not flt.outer_chords:
                            continue  # chord of the outer cycle
                        need = flt.girth_floor - (m + 1)
                        if need > 0 and _bfs_dist(rot, x, y, need - 1) < need:
                            continue
                        e_new = ecount + m + 1
                        if e_new > emax:
                            continue
                        D_new = D + m - sum(1 for z in (x, y) if z >= ell and len(rot[z]) < 3)
                        if not _deficit_feasible(ell, k + m, e_new, D_new, r_left - m):
                            continue
                        H = PlaneGraph(_add_ear(rot, walk, i, j, m, len(rot)), (1, 0), check=False)
                        code = canonical_code(H)
                        if code in seen:
                            continue
                        seen.add(code)
                        frontier.setdefault(e_new, []).append(H)
    if stats is not None:
        stats.update(expanded=expanded, states=len(seen), candidates=len(results),
                     seconds=time.monotonic() - start)
    return [results[c] for c in sorted(results)]


def _face_through(G: PlaneGraph, v: int, nbr: int) -> int:
    f = G.dart_face[(v, nbr)]
    return f if f != G.outer else G.dart_face[(nbr, v)]


def _close_rim_face(G: PlaneGraph, v: int, ell: int, girth_floor: int) -> list[PlaneGraph]:
    """Every way to turn the face through the degree-2 outer vertex v into a 5-face.

    The face must become u v w b a with a, b off the outer cycle.  Each of a
    and b is the vertex already next to u (resp. w) on the face, a new vertex,
    or another inner vertex of the face joined by a new edge.
    """
    f = _even_face(G, v)
    walk = G.faces[f]
    n = len(walk)
    iv = walk.index(v)
    u, w = walk[iv - 1], walk[(iv + 1) % n]
    side = [walk[(iv + 1 + k) % n] for k in range(n - 1)]  # w ... u
    inner = [x for x in side[1:-1] if x >= ell]
    b_opts = ["new"] + inner
    a_opts = ["new"] + inner
    out = []
    for b in b_opts:
        for a in a_opts:
            if a == b and a != "new":
                continue
            H = _draw_rim_path(G, v, u, w, a, b, ell, girth_floor)
            if H is not None:
                out.append(H)
    return out


def _draw_rim_path(G, v, u, w, a, b, ell, girth_floor):
    rot = {x: list(r) for x, r in G.rotation.items()}
    nxt = len(rot)
    # vertices of the path w b a u; None marks a vertex still to be created
    path = [w, None if b == "new" else b, None if a == "new" else a, u]
    seg_start = 0
    segments = []
    for k in range(1, 4):
        x = path[k]
        if x is None:
            continue
        segments.append((path[seg_start], k - seg_start - 1, x))
        seg_start = k
    graph = G
    for x, m, y in segments:
        if m == 0 and y in rot[x]:
            # the edge already exists; it must already bound the face of v
            continue
        need = girth_floor - (m + 1)
        if need > 0 and _bfs_dist(rot, x, y, need - 1) < need:
            return None
        f = _face_through(graph, v, u)
        walk = graph.faces[f]
        if x not in walk or y not in walk:
            return None
        i, j = walk.index(x), walk.index(y)
        rot = _add_ear(rot, walk, i, j, m, nxt)
        nxt += m
        graph = PlaneGraph(rot, (1, 0), check=False)
    f = _face_through(graph, v, u)
    face = graph.faces[f]
    if len(face) != 5 or any(x < ell and x not in (u, v, w) for x in face):
        return None
    return graph


def _is_final(G: PlaneGraph, ell: int, flt: CandidateFilter, frozen: set) -> bool:
    for v in G.vertices:
        if v >= ell and G.degree(v) < flt.min_interior_degree:
            return False
    if flt.alternating:
        if len(G.vertices) == ell:
            return False
        for v in frozen:
            if len(G.faces[_even_face(G, v)]) != 5:
                return False
    return True


# -- list assignments up to renaming of colours -------------------------------------

def list_orbits(n: int, must_share: Sequence[Sequence[int]] = (), size: int = 3) -> Iterator[list[frozenset]]:
    """One list assignment per orbit under colour permutations.

    Vertices are 0..n-1 and receive lists in that order.  Colours already used
    are grouped by the set of earlier vertices whose lists contain them; inside
    a group colours are interchangeable, so only how many colours are taken
    from each group matters.  ``must_share[i]`` lists earlier vertices whose
    list has to meet the list of i.  Assignments reusing colours come first, so
    the uniform assignment is the first one produced.
    """
    hist: list[int] = []  # colour c-1 -> bitmask of vertices using it
    cur: list[tuple[int, ...]] = [()] * n
    share = [tuple(x) for x in must_share] + [()] * (n - len(must_share))

    def rec(i):
        if i == n:
            yield [frozenset(c + 1 for c in cs) for cs in cur]
            return
        groups: dict[int, list[int]] = {}
        for c, h in enumerate(hist):
            groups.setdefault(h, []).append(c)
        keys = sorted(groups, key=lambda h: (-h.bit_count(), h))

        def choose(gi, left, picked):
            if gi == len(keys):
                for j in share[i]:
                    if not any((hist[c] >> j) & 1 for c in picked):
                        return
                new = list(range(len(hist), len(hist) + left))
                for c in picked:
                    hist[c] |= 1 << i
                hist.extend(1 << i for _ in new)
                cur[i] = tuple(picked + new)
                yield from rec(i + 1)
                for c in picked:
                    hist[c] &= ~(1 << i)
                del hist[len(hist) - len(new):]
                return
            g = groups[keys[gi]]
            for t in range(min(left, len(g)), -1, -1):
                yield from choose(gi + 1, left - t, picked + g[:t])

        yield from choose(0, size, [])

    yield from rec(0)


def outer_cycle(G: PlaneGraph) -> Subgraph:
    walk = G.outer_walk()
    return Subgraph(walk, [(walk[i], walk[(i + 1) % len(walk)]) for i in range(len(walk))])


def gallai_obstruction(G: PlaneGraph, S, sizes: Mapping[int, int] | int = 3) -> frozenset | None:
    """A 2-connected set of tight vertices off S that is not an induced odd cycle.

    A vertex is tight when its degree does not exceed its list size.  In an
    S-critical graph of girth at least 4 every 2-connected subgraph made of
    tight vertices off S is an induced odd cycle, so any returned set shows
    that G is not S-critical for any lists of these sizes.
    """
    import networkx as nx

    S = Subgraph.of(S)
    size = (lambda v: sizes) if isinstance(sizes, int) else sizes.__getitem__
    tight = [v for v in G.vertices if v not in S.vertices and G.degree(v) <= size(v)]
    H = nx.Graph()
    H.add_nodes_from(tight)
    H.add_edges_from((u, w) for u in tight for w in G.rotation[u] if w in H and u < w)
    for block in sorted(map(sorted, nx.biconnected_components(H))):
        if len(block) < 3:
            continue
        m = H.subgraph(block).number_of_edges()
        if m != len(block) or len(block) % 2 == 0:
            return frozenset(block)
    return None


def critical_for_some_L(G: PlaneGraph, S=None, *, budget_s: float | None = None,
                        stats: dict | None = None) -> dict[int, frozenset] | None:
    """3-lists off S making G a proper S-critical graph, or None if there are none.

    S defaults to the outer cycle.  Assignments are swept one per orbit of
    colour renamings (colours missing from every list play no role, so a
    palette of three colours per vertex is enough).
    """
    from .solver import is_critical

    S = outer_cycle(G) if S is None else Subgraph.of(S)
    start = time.monotonic()
    inner = [v for v in G.vertices if v not in S.vertices]
    info = {"orbits": 0, "refuted_by": None}

    def done(result, reason=None):
        info["refuted_by"] = reason
        info["seconds"] = time.monotonic() - start
        if stats is not None:
            stats.update(info)
        return result

    if not inner and G.edges <= S.edges:
        return done(None, "not proper")
    low = [v for v in inner if G.degree(v) < 3]
    if low:
        return done(None, f"vertex {low[0]} has degree below 3")
    if gallai_obstruction(G, S) is not None:
        return done(None, "tight 2-connected subgraph")
    # list the interior in BFS order so that the sharing constraints bite early
    order: list[int] = []
    seen = set()
    for s in inner:
        if s in seen:
            continue
        seen.add(s)
        q = deque([s])
        while q:
            x = q.popleft()
            order.append(x)
            for y in sorted(G.rotation[x]):
                if y not in seen and y not in S.vertices:
                    seen.add(y)
                    q.append(y)
    pos = {v: i for i, v in enumerate(order)}
    share = [[pos[w] for w in G.rotation[v] if w in pos and pos[w] < pos[v]] for v in order]
    for cols in list_orbits(len(order), share):
        info["orbits"] += 1
        if budget_s is not None and time.monotonic() - start > budget_s:
            done(None, "budget")
            raise BudgetExceeded(f"list sweep exceeded {budget_s}s after {info['orbits']} assignments")
        L = {v: cols[pos[v]] for v in order}
        if is_critical(G, S, L).critical:
            return done(L)
    return done(None, "exhausted")


# -- classification ------------------------------------------------------------------

TAGS = ("tree-case-a", "unicyclic-case-b", "figure-2", "other")


def has_alternating_pattern(G: PlaneGraph) -> bool:
    """Every second outer vertex has degree two and lies on an inner 5-face."""
    walk = G.outer_walk()
    n = len(walk)
    if n % 2 or len(set(walk)) != n:
        return False
    for parity in (0, 1):
        ok = True
        for v in walk[parity::2]:
            if G.degree(v) != 2:
                ok = False
                break
            w = G.rotation[v][0]
            f = G.dart_face[(v, w)]
            if f == G.outer:
                f = G.dart_face[(w, v)]
            if len(G.faces[f]) != 5:
                ok = False
                break
        if ok:
            return True
    return False


def shape_tag(G: PlaneGraph) -> str:
    import networkx as nx

    outer = set(G.outer_walk())
    if len(outer) == 12 and has_alternating_pattern(G):
        return "figure-2"
    rest = nx.Graph()
    rest.add_nodes_from(v for v in G.vertices if v not in outer)
    rest.add_edges_from(e for e in G.edges if e[0] not in outer and e[1] not in outer)
    if rest.number_of_nodes() and nx.is_connected(rest):
        excess = rest.number_of_edges() - rest.number_of_nodes() + 1
        if excess == 0:
            return "tree-case-a"
        if excess == 1:
            return "unicyclic-case-b"
    return "other"


@dataclass(frozen=True)
class ClassifiedGraph:
    """A critical graph labelled as rebuilt from its canonical code."""

    code: tuple[int, ...]
    graph: PlaneGraph = field(compare=False)
    witness: Mapping[int, frozenset] = field(compare=False)
    tag: str

    @property
    def code_str(self) -> str:
        return code_to_str(self.code)


MAX_LENGTH = 12


def _decide(code: tuple[int, ...], budget_s):
    G = graph_from_code(code)
    st: dict = {}
    L = critical_for_some_L(G, budget_s=budget_s, stats=st)
    return code, L, st


def enumerate_critical(ell: int, *, pattern_only: bool = False, max_interior: int | None = None,
                       pattern_max_interior: int | None = None, jobs: int = 1,
                       budget_s: float | None = None, max_length: int = MAX_LENGTH,
                       stats: dict | None = None) -> list[ClassifiedGraph]:
    """All proper critical graphs (for some 3-lists) inside an induced ell-cycle.

    Graphs with at most ``max_interior`` inner vertices (default ell-5) are
    searched, and for ell = 12 also the alternating pattern (default ceiling
    ell-2 inner vertices).  ``pattern_only`` keeps just the latter.  Output is
    sorted by canonical code whatever the number of workers.
    """
    if ell > max_length:
        raise ValueError(f"outer length {ell} exceeds the configured maximum {max_length}")
    start = time.monotonic()

    def left():
        if budget_s is None:
            return None
        rem = budget_s - (time.monotonic() - start)
        if rem <= 0:
            raise BudgetExceeded(f"enumeration exceeded {budget_s}s")
        return rem

    filters = []
    if not pattern_only:
        filters.append(CandidateFilter(ell, max_interior=max_interior))
    if ell % 2 == 0 and (pattern_only or ell == 12):
        filters.append(CandidateFilter(ell, max_interior=pattern_max_interior, alternating=True))
    codes = {}
    gen_stats = []
    for flt in filters:
        st: dict = {}
        for G in generate_candidates(flt, budget_s=left(), stats=st):
            codes.setdefault(canonical_code(G), G)
        gen_stats.append(st)
    todo = [c for c in sorted(codes) if len(codes[c].vertices) > ell]
    found: dict = {}
    sweep_stats = {}
    if jobs > 1 and len(todo) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(_decide, c, left()) for c in todo]
            results = [f.result() for f in futs]
    else:
        results = [_decide(c, left()) for c in todo]
    for code, L, st in results:
        sweep_stats[code_to_str(code)] = st
        if L is not None:
            found[code] = L
    out = [ClassifiedGraph(code, graph_from_code(code), found[code], shape_tag(codes[code]))
           for code in sorted(found)]
    if stats is not None:
        stats.update(candidates=len(todo), critical=len(out), generation=gen_stats,
                     sweeps=sweep_stats, seconds=time.monotonic() - start)
    return out


def embedding_isomorphism(G: PlaneGraph, H: PlaneGraph) -> dict[int, int] | None:
    """A map V(G) -> V(H) preserving rotations (or all mirrored) and the outer face."""
    if len(G.vertices) != len(H.vertices) or len(G.edges) != len(H.edges):
        return None
    g0 = G.outer_dart
    for flip in (False, True):
        Hr = H.mirror() if flip else H
        for d in Hr.face_darts[Hr.outer]:
            m = _extend_map(G, Hr, g0, d)
            if m is not None:
                return m
    return None


def _extend_map(G: PlaneGraph, H: PlaneGraph, dg, dh) -> dict[int, int] | None:
    m = {dg[0]: dh[0]}
    q = deque([(dg, dh)])
    seen = set()
    while q:
        (u, v), (x, y) = q.popleft()
        if (u, v) in seen:
            continue
        seen.add((u, v))
        if m.get(u) != x or len(G.rotation[u]) != len(H.rotation[x]):
            return None
        ru, rx = G.rotation[u], H.rotation[x]
        iu, ix = ru.index(v), rx.index(y)
        k = len(ru)
        for t in range(k):
            a, b = ru[(iu + t) % k], rx[(ix + t) % k]
            if m.setdefault(a, b) != b:
                return None
            q.append(((a, u), (b, x)))
    if len(m) != len(G.vertices) or len(set(m.values())) != len(m):
        return None
    return m


# -- results file ----------------------------------------------------------------------

def format_lists(L: Mapping[int, Iterable[int]]) -> str:
    return ";".join(f"{v}:" + ",".join(map(str, sorted(L[v]))) for v in sorted(L))


def parse_lists(text: str) -> dict[int, frozenset]:
    out = {}
    for item in filter(None, text.split(";")):
        v, _, cs = item.partition(":")
        out[int(v)] = frozenset(int(c) for c in cs.split(","))
    return out


def dump_crit(results: Sequence[ClassifiedGraph], params: Mapping[str, object], version: str) -> str:
    lines = [f"# listcrit {version}"]
    lines += [f"# {k}={params[k]}" for k in sorted(params)]
    lines += [f"{r.code_str} {r.tag} {format_lists(r.witness)}" for r in results]
    return "\n".join(lines) + "\n"


def parse_crit(text: str) -> list[tuple[tuple[int, ...], str, dict[int, frozenset]]]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        code, tag, lists = line.split()
        out.append((tuple(int(x) for x in code.split(".")), tag, parse_lists(lists)))
    return out


# -- uncolourable instances with a 2-2-x-2-2 path -------------------------------------

@dataclass
class Counterexample:
    graph: PlaneGraph
    lists: dict[int, frozenset]


@dataclass
class CounterexampleSearch:
    result: Counterexample | None
    graphs: int = 0
    patterns: int = 0
    undecided: list[str] = field(default_factory=list)

    @property
    def exhausted(self) -> bool:
        return self.result is None and not self.undecided

    def report(self) -> str:
        """Deterministic text summary (no timings)."""
        lines = [f"graphs {self.graphs}", f"patterns {self.patterns}", f"undecided {len(self.undecided)}"]
        lines += [f"  {u}" for u in self.undecided]
        if self.result is None:
            lines.append("result none" if self.exhausted else "result none-within-budget")
        else:
            lines.append("result found " + code_to_str(canonical_code(self.result.graph)))
            lines.append("lists " + format_lists(self.result.lists))
        return "\n".join(lines) + "\n"


def _size_patterns(G: PlaneGraph) -> Iterator[dict[int, int]]:
    """Sizes 2/3 on the outer face admitting a 2-2-x-2-2 path but no 2-2-2 path.

    Outer vertices of degree two get 2-lists (a 3-list there could be dropped
    from any uncolourable instance), inner vertices get 3-lists.
    """
    from .lists import _find_pattern

    outer = G.outer_walk()
    free = [v for v in outer if G.degree(v) >= 3]
    for choice in itertools.product((2, 3), repeat=len(free)):
        sizes = {v: 3 for v in G.vertices}
        sizes.update((v, 2) for v in outer)
        sizes.update(zip(free, choice))
        if _find_pattern(G, sizes, (2, 2, 2)) is not None:
            continue
        if _find_pattern(G, sizes, (2, 2, None, 2, 2)) is None:
            continue
        yield sizes


def _tight_part_is_gallai_forest(G: PlaneGraph, sizes: Mapping[int, int]) -> bool:
    # a minimal uncolourable instance has deg >= |L| everywhere, and the
    # vertices with equality induce blocks that are edges or odd cycles
    if any(G.degree(v) < sizes[v] for v in G.vertices):
        return False
    return gallai_obstruction(G, Subgraph((), ()), sizes) is None


def uncolorable_lists(G: PlaneGraph, sizes: Mapping[int, int], palette: int,
                      max_rounds: int, max_states: int = 500_000) -> dict[int, frozenset] | None | str:
    """Lists with the given sizes from colours 1..palette admitting no colouring.

    Alternates between choosing lists that rule out every colouring seen so far
    (a SAT problem) and looking for a colouring of the chosen lists.  When that
    runs out of rounds, falls back to ``frontier_uncolorable_lists``.  Returns
    the lists, None when no such lists exist, or "budget".
    """
    L = _sat_uncolorable_lists(G, sizes, palette, max_rounds)
    if L != "budget":
        return L
    return frontier_uncolorable_lists(G, sizes, palette, max_states)


def _frontier_order(G: PlaneGraph) -> list[int]:
    """Vertex order keeping few processed vertices with unprocessed neighbours."""
    adj = {v: set(G.rotation[v]) for v in G.vertices}
    order = [min(G.vertices, key=lambda v: (len(adj[v]), v))]
    done = set(order)
    while len(order) < len(adj):
        def boundary_after(x):
            d = done | {x}
            return sum(1 for u in d if adj[u] - d)
        touching = [x for x in adj if x not in done and adj[x] & done]
        rest = touching or [x for x in adj if x not in done]
        x = min(rest, key=lambda x: (boundary_after(x), -len(adj[x] & done), x))
        order.append(x)
        done.add(x)
    return order


def frontier_uncolorable_lists(G: PlaneGraph, sizes: Mapping[int, int], palette: int,
                               max_states: int) -> dict[int, frozenset] | None | str:
    """Exact search for uncolourable lists, choosing lists vertex by vertex.

    The state after a prefix of the vertex order is the set of colourings of
    its boundary (prefix vertices with neighbours outside it) that extend to
    the whole prefix.  Lists are chosen so that colours first appear in
    increasing order, which is no loss up to renaming.  An empty state means
    the chosen lists admit no colouring.  Failed states are memoised.
    """
    order = _frontier_order(G)
    adj = {v: set(G.rotation[v]) for v in G.vertices}
    bounds = []
    for i in range(len(order)):
        prefix = set(order[:i + 1])
        bounds.append(tuple(u for u in order[:i + 1] if adj[u] - prefix))
    failed: set = set()
    chosen: dict[int, tuple[int, ...]] = {}
    expanded = 0

    def extend(i: int, state: frozenset, top: int) -> bool | None:
        nonlocal expanded
        if i == len(order):
            return False
        v, prev = order[i], bounds[i - 1] if i else ()
        seen = [j for j, u in enumerate(prev) if u in adj[v]]
        carry = [prev.index(u) if u in prev else -1 for u in bounds[i]]
        k = sizes[v]
        for Lv in itertools.combinations(range(1, min(palette, top + k) + 1), k):
            fresh = [c for c in Lv if c > top]
            if fresh != list(range(top + 1, top + 1 + len(fresh))):
                continue
            nxt = frozenset(tuple(col[j] if j >= 0 else c for j in carry)
                            for col in state for c in Lv if all(col[j] != c for j in seen))
            chosen[v] = Lv
            if not nxt:
                return True
            key = (i, max(top, Lv[-1]), nxt)
            if key in failed:
                continue
            expanded += 1
            if expanded > max_states:
                return None
            found = extend(i + 1, nxt, max(top, Lv[-1]))
            if found is not False:
                return found
            failed.add(key)
        chosen.pop(v, None)
        return False

    found = extend(0, frozenset([()]), 0)
    if found is None:
        return "budget"
    if not found:
        return None
    # vertices after the uncolourable prefix take any lists
    return {v: frozenset(chosen.get(v, range(1, sizes[v] + 1))) for v in G.vertices}


def _sat_uncolorable_lists(G: PlaneGraph, sizes: Mapping[int, int], palette: int,
                           max_rounds: int) -> dict[int, frozenset] | None | str:
    from pysat.card import CardEnc, EncType
    from pysat.formula import IDPool
    from pysat.solvers import Minisat22

    from .solver import find_coloring

    vs = list(G.vertices)
    pool = IDPool()
    var = {(v, c): pool.id((v, c)) for v in vs for c in range(1, palette + 1)}
    adj = {v: set(G.rotation[v]) for v in vs}
    renamings = list(itertools.permutations(range(1, palette + 1)))
    with Minisat22() as sat:
        for v in vs:
            enc = CardEnc.equals([var[v, c] for c in range(1, palette + 1)], bound=sizes[v],
                                 vpool=pool, encoding=EncType.seqcounter)
            for cl in enc.clauses:
                sat.add_clause(cl)
        # colours may be renamed so that the first list is {1, .., k}
        for c in range(1, sizes[vs[0]] + 1):
            sat.add_clause([var[vs[0], c]])
        for _ in range(max_rounds):
            if not sat.solve():
                return None
            model = {x for x in sat.get_model() if x > 0}
            L = {v: frozenset(c for c in range(1, palette + 1) if var[v, c] in model) for v in vs}
            col = find_coloring(adj, L)
            if col is None:
                return L
            # every renaming of a colouring is a colouring of any lists containing it
            for perm in renamings:
                sat.add_clause([-var[v, perm[col[v] - 1]] for v in vs])
    return "budget"


def search_thm3_counterexample(max_vertices: int, *, palette: int = 5, max_rounds: int = 5000,
                               min_length: int = 5) -> CounterexampleSearch:
    """Look for an uncolourable instance that only breaks the 2-2-x-2-2 condition.

    The family searched: 2-connected plane graphs of girth at least 5 with at
    most ``max_vertices`` vertices whose outer face is a cycle (chords of it
    allowed), inner vertices of degree at least 3, 3-lists off the outer face
    and lists of size 2 or 3 on it, colours from 1..palette.  Graphs and size
    patterns are visited in a fixed order, so the outcome is reproducible.
    """
    out = CounterexampleSearch(None)
    for ell in range(min_length, max_vertices + 1):
        flt = CandidateFilter(ell, max_interior=max_vertices - ell, outer_chords=True)
        for G in generate_candidates(flt):
            out.graphs += 1
            for sizes in _size_patterns(G):
                if not _tight_part_is_gallai_forest(G, sizes):
                    continue
                out.patterns += 1
                L = uncolorable_lists(G, sizes, palette, max_rounds)
                if L == "budget":
                    pat = "".join(str(sizes[v]) for v in G.outer_walk())
                    out.undecided.append(f"{code_to_str(canonical_code(G))} outer-sizes {pat}")
                elif L is not None:
                    out.result = Counterexample(G, L)
                    return out
    return out
