"""Definition-level brute force, independent of the package internals."""
from __future__ import annotations

import itertools

import networkx as nx
import numpy as np


def adjacency(G):
    return {v: set(G.rotation[v]) for v in G.vertices}


def brute_colorings(adj, L, fixed=None):
    """Every proper L-coloring (extending ``fixed``) by plain enumeration."""
    fixed = dict(fixed or {})
    free = sorted(v for v in adj if v not in fixed)
    for combo in itertools.product(*(sorted(L[v]) for v in free)):
        col = dict(fixed)
        col.update(zip(free, combo))
        if all(col[u] != col[w] for u in adj for w in adj[u]):
            yield col


def brute_colorable(adj, L, fixed=None) -> bool:
    return next(brute_colorings(adj, L, fixed), None) is not None


def chromatic_polynomial(g: nx.Graph, k: int) -> int:
    """P(g, k) by deletion and contraction."""
    if g.number_of_edges() == 0:
        return k ** g.number_of_nodes()
    u, v = next(iter(g.edges()))
    d = g.copy()
    d.remove_edge(u, v)
    c = nx.contracted_nodes(d, u, v, self_loops=False)
    return chromatic_polynomial(d, k) - chromatic_polynomial(c, k)


def s_colorings(s_vertices, s_edges, palette):
    sv = sorted(s_vertices)
    for combo in itertools.product(palette, repeat=len(sv)):
        psi = dict(zip(sv, combo))
        if all(psi[a] != psi[b] for a, b in s_edges):
            yield psi


def lattice_verdicts(adj, s_vertices, s_edges, L):
    """(critical, strongly_critical) straight from the subgraph definitions.

    Walks every proper subgraph G' with S inside it.  A precoloring of S
    extends to G' when some colouring of the vertices outside S avoids every
    monochromatic edge of G'; vertices missing from G' have no edges there,
    so only the edge set of G' matters.  Returns None when G equals S.
    """
    s_vertices = set(s_vertices)
    s_edges = {tuple(sorted(e)) for e in s_edges}
    interior = sorted(v for v in adj if v not in s_vertices)
    edges = sorted({tuple(sorted((u, w))) for u in adj for w in adj[u]})
    free = [e for e in edges if e not in s_edges]
    if not free and not interior:
        return None
    k = len(free)
    union = sorted(set().union(*(L[v] for v in interior))) if interior else []
    palette = union + [max(union + [0]) + 1 + i for i in range(len(s_vertices))]
    sv = sorted(s_vertices)
    psis = list(s_colorings(sv, s_edges, palette))
    psi_arr = np.array([[p[v] for v in sv] for p in psis], dtype=np.int64).reshape(len(psis), len(sv))
    combos = list(itertools.product(*(sorted(L[v]) for v in interior)))
    col_arr = np.array(combos, dtype=np.int64).reshape(len(combos), len(interior))
    spos = {v: i for i, v in enumerate(sv)}
    ipos = {v: i for i, v in enumerate(interior)}

    def colour(v):
        if v in spos:
            return psi_arr[:, spos[v]][:, None]
        return col_arr[:, ipos[v]][None, :]

    masks = np.zeros((len(psis), len(col_arr)), dtype=np.int64)
    for b, (u, w) in enumerate(free):
        masks |= (colour(u) == colour(w)).astype(np.int64) << b
    full = (1 << k) - 1
    # ext[p, E'] : psi p extends to the subgraph with free edge set E'
    hit = np.zeros((len(psis), 1 << k), dtype=bool)
    for p in range(len(psis)):
        hit[p, np.unique(masks[p])] = True
    for b in range(k):
        step = 1 << b
        view = hit.reshape(len(psis), -1, 2 * step)
        view[:, :, step:] |= view[:, :, :step]
    ext = hit[:, full ^ np.arange(1 << k)]
    whole = ext[:, full]
    isolated = any(not adj[v] for v in interior)
    proper_sets = list(range(full)) + ([full] if isolated else [])
    sub = ext[:, proper_sets]
    critical = bool((sub & ~whole[:, None]).any(axis=0).all())
    strong = bool((~whole & sub.all(axis=1)).any()) if proper_sets else False
    return critical, strong


def extendable_set(adj, s_vertices, s_edges, L, palette):
    """Precolorings of S (from palette) that extend to the whole graph."""
    out = set()
    for psi in s_colorings(s_vertices, s_edges, palette):
        if brute_colorable(adj, {**L, **{v: {c} for v, c in psi.items()}}):
            out.add(tuple(sorted(psi.items())))
    return out
