import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphgen import connected_girth5_planar, facial_subsets, rotation_of
from listcrit.embed import PlaneGraph
from listcrit.lists import (HypothesisError, ListFormatError, PrecoloredPath, bad_vertices, bad_witness,
                            check_cor2, check_thm1, check_thm3, dump_lst, i_sets, is_valid, make_lists,
                            parse_lst, uniform_lists)
from shapes import apex_cycle, cycle, tight_graph


def sized(G, small, two=(1, 2), three=(1, 2, 3)):
    return {v: frozenset(two if v in small else three) for v in G.vertices}


def simple_paths(g, k):
    """Every simple path with k vertices, in both directions."""
    out = []

    def rec(p):
        if len(p) == k:
            out.append(tuple(p))
            return
        for w in g[p[-1]]:
            if w not in p:
                rec(p + [w])
    for v in g:
        rec([v])
    return out


def brute_bad(G, P, L):
    g = G.to_networkx()
    pv = set(P.vertices)
    size = {v: (None if v in pv else len(L[v])) for v in G.vertices}
    I = {v for v in G.vertices if size[v] == 2}
    if P.length > 2:
        I |= pv
    bad = set()
    for p in simple_paths(g, 3):
        if size[p[1]] == 2 and p[2] in I:
            bad.add(p[0])
    for p in simple_paths(g, 5):
        if size[p[1]] == 2 and size[p[2]] == 3 and size[p[3]] == 2 and p[4] in I:
            bad.add(p[0])
    return bad


def brute_pattern(G, sizes, pattern):
    g = G.to_networkx()
    return any(all(want is None or sizes[x] == want for x, want in zip(p, pattern))
               for p in simple_paths(g, len(pattern)))


def plane(g, X=()):
    rot, dart = rotation_of(g, X)
    return PlaneGraph(rot, dart)


# -- I sets, bad vertices, validity -----------------------------------------------------

def class_b_instance():
    """Nine-cycle p1..p5 v1..v4 with an apex on p3, v1, v4; v2 and v3 carry 2-lists."""
    G = apex_cycle(9, feet=(2, 5, 8))
    P = PrecoloredPath((0, 1, 2, 3, 4))
    L = {5: frozenset({1, 2, 3}), 6: frozenset({1, 2}), 7: frozenset({1, 3}),
         8: frozenset({1, 2, 3}), 9: frozenset({1, 2, 3})}
    return G, P, L


def test_i_sets_examples():
    G = cycle(9)
    assert i_sets(G, PrecoloredPath(), uniform_lists(G.vertices)) == (frozenset(), frozenset())
    P = PrecoloredPath((0, 1, 2))
    L = sized(G, {4, 7})
    assert i_sets(G, P, L) == (frozenset({4, 7}), frozenset({4, 7}))
    G, P, L = class_b_instance()
    assert i_sets(G, P, L)[1] == frozenset({6, 7, 0, 1, 2, 3, 4})


def test_bad_vertex_examples():
    G = cycle(9)
    assert bad_vertices(G, PrecoloredPath(), uniform_lists(G.vertices)) == set()
    L = sized(G, {0, 1, 2})
    assert {0, 2} <= bad_vertices(G, PrecoloredPath(), L) == brute_bad(G, PrecoloredPath(), L)
    L = sized(G, {0, 1})
    assert bad_vertices(G, PrecoloredPath(), L) == {2, 8}
    edge = PlaneGraph({0: [1], 1: [0]})
    assert bad_vertices(edge, PrecoloredPath(), {0: frozenset({1, 2}), 1: frozenset({1, 2})}) == set()


def test_validity_examples():
    G = cycle(9)
    assert is_valid(G, PrecoloredPath(), sized(G, {0, 1}))
    v = is_valid(G, PrecoloredPath(), sized(G, {0, 1, 2}))
    assert not v and v.witness == (0, 1, 2)
    v = is_valid(G, PrecoloredPath(), sized(G, {0, 1, 3, 4}))
    assert not v and len(v.witness) == 5
    assert bad_witness(G, PrecoloredPath(), sized(G, {0, 1, 3, 4}), 0) == (0, 1, 2, 3, 4)


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_bad_vertices_match_path_oracle(data):
    n = data.draw(st.integers(5, 9))
    graphs = connected_girth5_planar(n)
    g = graphs[data.draw(st.integers(0, len(graphs) - 1))]
    G = plane(g)
    small = data.draw(st.sets(st.sampled_from(sorted(G.vertices))))
    plen = data.draw(st.integers(0, 4))
    P = PrecoloredPath()
    if plen:
        paths = [p for p in simple_paths(g, plen + 1)]
        if paths:
            P = PrecoloredPath(data.draw(st.sampled_from(paths)))
    L = {v: frozenset((1, 2) if v in small else (1, 2, 3)) for v in G.vertices if v not in P.vertices}
    assert bad_vertices(G, P, L) == brute_bad(G, P, L)


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_growing_a_list_creates_no_bad_vertex(data):
    n = data.draw(st.integers(5, 9))
    graphs = connected_girth5_planar(n)
    G = plane(graphs[data.draw(st.integers(0, len(graphs) - 1))])
    small = data.draw(st.sets(st.sampled_from(sorted(G.vertices)), min_size=1))
    grow = data.draw(st.sampled_from(sorted(small)))
    before = bad_vertices(G, PrecoloredPath(), sized(G, small))
    after = bad_vertices(G, PrecoloredPath(), sized(G, small - {grow}))
    assert after - {grow} <= before


# -- theorem hypotheses --------------------------------------------------------------------

def test_thm3_examples():
    G = cycle(9)
    assert check_thm3(G, None, uniform_lists(G.vertices))
    v = check_thm3(G, None, sized(G, {3, 4, 5}))
    assert not v and v.witness == (3, 4, 5)
    v = check_thm3(G, None, sized(G, {0, 1, 3, 4}))
    assert not v and v.witness == (0, 1, 2, 3, 4)


def test_thm3_preconditions_are_errors():
    G = apex_cycle()
    L = uniform_lists(G.vertices)
    L[9] = frozenset({1, 2})
    with pytest.raises(HypothesisError, match="off the face"):
        check_thm3(G, None, L)
    L = uniform_lists(range(9))
    with pytest.raises(HypothesisError, match="no list"):
        check_thm3(G, None, L)
    G = plane(nx.cycle_graph(4))
    with pytest.raises(HypothesisError, match="girth"):
        check_thm3(G, None, uniform_lists(G.vertices))


def test_cor2_examples():
    G = cycle(9)
    assert check_cor2(G, None, uniform_lists(G.vertices))
    assert not check_cor2(G, None, sized(G, {0, 1, 3}))
    assert check_thm3(G, None, sized(G, {0, 1, 3}))


def test_thm1_examples():
    G = cycle(9)
    P = PrecoloredPath()
    assert check_thm1(G, None, P, sized(G, {0, 2, 4, 6}))
    v = check_thm1(G, None, P, sized(G, {0, 1}))
    assert not v and v.witness == (0, 1)
    L = sized(G, set())
    L[0], L[1] = frozenset({1}), frozenset({1})
    with pytest.raises(HypothesisError, match="clash"):
        check_thm1(G, None, PrecoloredPath((0, 1)), L)
    L[1] = frozenset({2})
    assert check_thm1(G, None, PrecoloredPath((0, 1)), L)
    L[2] = frozenset({1, 2})
    assert not check_thm1(G, None, PrecoloredPath((0, 1)), L)


def test_thm1_rejects_long_or_broken_paths():
    G = cycle(9)
    L = {v: frozenset({v % 3 + 1}) if v < 7 else frozenset({1, 2, 3}) for v in G.vertices}
    L[6] = frozenset({3})
    with pytest.raises(HypothesisError, match="longer than 5"):
        check_thm1(G, None, PrecoloredPath(tuple(range(7))), L)
    with pytest.raises(HypothesisError, match="not adjacent"):
        check_thm1(G, None, PrecoloredPath((0, 2)), L)
    G = apex_cycle()
    L = uniform_lists(G.vertices)
    L[9] = frozenset({1})
    with pytest.raises(HypothesisError, match="not on the face"):
        check_thm1(G, None, PrecoloredPath((9,)), L)


def face_instances(max_n):
    """(graph, 2-list set) pairs with the 2-lists on one face, over every small girth-5 graph."""
    for n in range(3, max_n + 1):
        for g in connected_girth5_planar(n):
            for Y in facial_subsets(g):
                yield g, set(Y)


def test_validity_equals_thm3_on_all_small_graphs():
    count = 0
    for g, Y in face_instances(9):
        G = plane(g, Y)
        L = sized(G, Y)
        assert bool(is_valid(G, PrecoloredPath(), L)) == bool(check_thm3(G, None, L, check_girth=False))
        count += 1
    assert count > 10000


def test_cor2_and_thm3_match_pattern_oracle():
    for g, Y in face_instances(8):
        G = plane(g, Y)
        L = sized(G, Y)
        sizes = {v: len(L[v]) for v in G.vertices}
        thm3 = not (brute_pattern(G, sizes, (2, 2, 2)) or brute_pattern(G, sizes, (2, 2, None, 2, 2)))
        cor2 = not (brute_pattern(G, sizes, (2, 2, 2)) or brute_pattern(G, sizes, (2, 2, None, 2))
                    or brute_pattern(G, sizes, (2, 2, None, None, 2, 2)))
        assert bool(check_thm3(G, None, L, check_girth=False)) == thm3
        assert bool(check_cor2(G, None, L, check_girth=False)) == cor2
        if check_thm1(G, None, PrecoloredPath(), L, check_girth=False):
            assert cor2
        if cor2:
            assert not brute_pattern(G, sizes, (2, 2, 2))


def test_tight_graph_outer_pairs():
    G = tight_graph()
    L = sized(G, {0, 9})
    assert check_thm3(G, None, L)
    L = sized(G, {0, 9, 2, 3})
    assert not check_thm3(G, None, L)


# -- text format ---------------------------------------------------------------------------

def test_lst_round_trip():
    L = make_lists({0: [1, 2], 1: [3, 1, 2], 5: [7]})
    P = PrecoloredPath((2, 3), {2: 1, 3: 2})
    L2, P2 = parse_lst(dump_lst(L, P))
    assert L2 == L and P2 == P and P2.colors == P.colors


@pytest.mark.parametrize("text, where", [
    ("l 0: 1 2\nl 1:\n", "line 2"),
    ("l 0: 1 2\nzz\n", "line 2"),
    ("# c\nl x: 1\n", "line 2"),
])
def test_lst_errors(text, where):
    with pytest.raises(ListFormatError, match=where):
        parse_lst(text)
