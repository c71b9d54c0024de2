"""List assignments, precolored paths and the hypothesis predicates built on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .embed import FaceRef, PlaneGraph, girth

Lists = Mapping[int, frozenset]


class HypothesisError(ValueError):
    """The instance does not meet the preconditions of a predicate."""


@dataclass(frozen=True)
class PrecoloredPath:
    vertices: tuple[int, ...] = ()
    colors: Mapping[int, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def length(self) -> int:
        return max(len(self.vertices) - 1, 0)

    def __bool__(self):
        return bool(self.vertices)

    def __len__(self):
        return len(self.vertices)


NO_PATH = PrecoloredPath()


def make_lists(mapping: Mapping[int, Sequence[int]]) -> dict[int, frozenset]:
    return {v: frozenset(cs) for v, cs in mapping.items()}


def uniform_lists(vertices, colors=(1, 2, 3)) -> dict[int, frozenset]:
    c = frozenset(colors)
    return {v: c for v in vertices}


def _face_vertices(G: PlaneGraph, F) -> set[int]:
    if not G.faces:
        # a single vertex: the whole plane is one face
        return set(G.vertices)
    fi = G.outer if F is None else (F.index if isinstance(F, FaceRef) else F)
    return set(G.faces[fi])


def _size(L: Lists, v: int) -> int | None:
    cs = L.get(v)
    return None if cs is None else len(cs)


def i_sets(G: PlaneGraph, P: PrecoloredPath, L: Lists) -> tuple[frozenset, frozenset]:
    pv = set(P.vertices)
    i0 = frozenset(v for v in G.vertices if v not in pv and _size(L, v) == 2)
    if P.length <= 2:
        return i0, i0
    return i0, i0 | frozenset(pv)


def _bad_path(G: PlaneGraph, v: int, L: Lists, pv: set, I: frozenset) -> tuple[int, ...] | None:
    """Lexicographically least path witnessing that v is bad."""

    def size(x):
        return None if x in pv else _size(L, x)

    best = None
    adj = G.rotation
    for v1 in sorted(adj[v]):
        if size(v1) != 2:
            continue
        for v2 in sorted(adj[v1]):
            if v2 == v:
                continue
            if v2 in I:
                cand = (v, v1, v2)
                if best is None or cand < best:
                    best = cand
            if size(v2) != 3:
                continue
            for v3 in sorted(adj[v2]):
                if v3 in (v, v1) or size(v3) != 2:
                    continue
                for v4 in sorted(adj[v3]):
                    if v4 in (v, v1, v2) or v4 not in I:
                        continue
                    cand = (v, v1, v2, v3, v4)
                    if best is None or cand < best:
                        best = cand
    return best


def bad_vertices(G: PlaneGraph, P: PrecoloredPath, L: Lists) -> set[int]:
    _, I = i_sets(G, P, L)
    pv = set(P.vertices)
    return {v for v in G.vertices if _bad_path(G, v, L, pv, I) is not None}


def bad_witness(G: PlaneGraph, P: PrecoloredPath, L: Lists, v: int) -> tuple[int, ...] | None:
    _, I = i_sets(G, P, L)
    return _bad_path(G, v, L, set(P.vertices), I)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: tuple[int, ...] | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_valid(G: PlaneGraph, P: PrecoloredPath, L: Lists) -> Verdict:
    _, I = i_sets(G, P, L)
    pv = set(P.vertices)
    for v in G.vertices:
        if v in pv or _size(L, v) != 2:
            continue
        w = _bad_path(G, v, L, pv, I)
        if w is not None:
            return Verdict(False, w, f"vertex {v} with a 2-list is bad")
    return Verdict(True)


def _find_pattern(G: PlaneGraph, sizes: Mapping[int, int], pattern: Sequence[int | None]):
    """Least simple path whose list sizes match pattern (None = any size).

    Depth-first search over sorted neighbours visits paths in lexicographic
    order, so the first hit is the least one.
    """
    k = len(pattern)
    adj = G.rotation

    def ok(x, i):
        want = pattern[i]
        return want is None or sizes.get(x) == want

    def rec(path):
        if len(path) == k:
            return tuple(path)
        i = len(path)
        for y in sorted(adj[path[-1]]):
            if y not in path and ok(y, i):
                path.append(y)
                hit = rec(path)
                path.pop()
                if hit:
                    return hit
        return None

    for s in G.vertices:
        if ok(s, 0):
            hit = rec([s])
            if hit:
                return hit
    return None


def _check_face_lists(G: PlaneGraph, F: FaceRef | int | None, L: Lists, check_girth: bool = True):
    if check_girth and girth(G) < 5:
        raise HypothesisError("girth is below 5")
    on_f = _face_vertices(G, F)
    for v in G.vertices:
        s = _size(L, v)
        if s is None:
            raise HypothesisError(f"vertex {v} has no list")
        if v in on_f:
            if s < 2:
                raise HypothesisError(f"face vertex {v} has a list of size {s}")
        elif s != 3:
            raise HypothesisError(f"vertex {v} off the face has a list of size {s}")
    return on_f


THM3_PATTERNS = ((2, 2, 2), (2, 2, None, 2, 2))
COR2_PATTERNS = ((2, 2, 2), (2, 2, None, 2), (2, 2, None, None, 2, 2))


def _scan(G, L, patterns):
    sizes = {v: len(L[v]) for v in G.vertices}
    for pat in patterns:
        w = _find_pattern(G, sizes, pat)
        if w is not None:
            return Verdict(False, w, "forbidden pattern " + "-".join("x" if p is None else str(p) for p in pat))
    return Verdict(True)


def check_thm3(G: PlaneGraph, F: FaceRef | int | None, L: Lists, check_girth: bool = True) -> Verdict:
    """No 2-2-2 path and no path whose sizes read 2,2,x,2,2."""
    _check_face_lists(G, F, L, check_girth)
    return _scan(G, L, THM3_PATTERNS)


def check_cor2(G: PlaneGraph, F: FaceRef | int | None, L: Lists, check_girth: bool = True) -> Verdict:
    _check_face_lists(G, F, L, check_girth)
    return _scan(G, L, COR2_PATTERNS)


def check_thm1(G: PlaneGraph, F: FaceRef | int | None, P: PrecoloredPath, L: Lists,
               check_girth: bool = True) -> Verdict:
    """Singleton lists on P, no vertex with a 2-list next to a list of size at most two."""
    if check_girth and girth(G) < 5:
        raise HypothesisError("girth is below 5")
    on_f = _face_vertices(G, F)
    pv = P.vertices
    if len(set(pv)) != len(pv):
        raise HypothesisError("precolored path repeats a vertex")
    if P.length > 5:
        raise HypothesisError("precolored path is longer than 5")
    for a, b in zip(pv, pv[1:]):
        if not G.has_edge(a, b):
            raise HypothesisError(f"path vertices {a} and {b} are not adjacent")
    for p in pv:
        if p not in on_f:
            raise HypothesisError(f"path vertex {p} is not on the face")
        if _size(L, p) != 1:
            raise HypothesisError(f"path vertex {p} needs a singleton list")
    pset = set(pv)
    for a in pv:
        for b in G.rotation[a]:
            if b in pset and L[a] == L[b]:
                raise HypothesisError(f"singleton lists on {a} and {b} clash")
    for v in G.vertices:
        if v in pset:
            continue
        s = _size(L, v)
        if s is None:
            raise HypothesisError(f"vertex {v} has no list")
        if v in on_f and s < 2:
            raise HypothesisError(f"face vertex {v} has a list of size {s}")
        if v not in on_f and s != 3:
            raise HypothesisError(f"vertex {v} off the face has a list of size {s}")
    for v in sorted(G.vertices):
        if v in pset or len(L[v]) != 2:
            continue
        for w in sorted(G.rotation[v]):
            if len(L[w]) <= 2:
                return Verdict(False, (v, w), f"2-list vertex {v} is adjacent to {w}")
    return Verdict(True)


# -- text format ----------------------------------------------------------------

class ListFormatError(ValueError):
    pass


def parse_lst(text: str) -> tuple[dict[int, frozenset], PrecoloredPath]:
    lists: dict[int, frozenset] = {}
    path: tuple[int, ...] = ()
    colors: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "l":
                v, _, cs = rest.partition(":")
                vals = [int(c) for c in cs.split()]
                if not vals:
                    raise ValueError("empty list")
                lists[int(v)] = frozenset(vals)
            elif head == "path":
                path = tuple(int(x) for x in rest.split())
            elif head == "p":
                v, _, c = rest.partition(":")
                colors[int(v)] = int(c)
            else:
                raise ValueError(f"unknown record {head!r}")
        except ValueError as exc:
            raise ListFormatError(f"line {lineno}: {exc}") from None
    return lists, PrecoloredPath(path, colors or None)


def dump_lst(L: Lists, P: PrecoloredPath = NO_PATH) -> str:
    lines = [f"l {v}: " + " ".join(map(str, sorted(L[v]))) for v in sorted(L)]
    if P.vertices:
        lines.append("path " + " ".join(map(str, P.vertices)))
        for v, c in sorted((P.colors or {}).items()):
            lines.append(f"p {v}: {c}")
    return "\n".join(lines) + "\n"
