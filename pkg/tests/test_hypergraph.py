import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinchaos.errors import ValidationError
from spinchaos.hypergraph import (Hypergraph, ball, ball_is_hypertree,
                                  ball_sizes, berge_distance, boundary_edges,
                                  component, connected_in, from_text,
                                  has_berge_cycle, hypergraph, interior_edges,
                                  is_hypertree, multi_index, sub_hypergraph,
                                  to_text, vertex_support)

from conftest import berge_paths_exist, brute_has_berge_cycle, random_hypergraph


def figure1():
    # two 3-vertex lobes joined by a hub triple
    return hypergraph(7, [(1, 2, 3), (2, 3), (4, 5, 6), (5, 6), (0, 3, 6)])


# ---------------------------------------------------------------------------
# construction


def test_constructor_canonicalizes_and_validates():
    g = hypergraph(4, [(2, 0), (3, 1)])
    assert g.edges == ((0, 2), (1, 3))
    with pytest.raises(ValidationError):
        hypergraph(3, [(0,)])  # arity 1
    with pytest.raises(ValidationError):
        hypergraph(3, [(0, 3)])  # out of range
    with pytest.raises(ValidationError):
        hypergraph(3, [(0, 0, 1)])  # repeated vertex
    with pytest.raises(ValidationError):
        hypergraph(3, [(0, 1), (1, 0)])  # duplicate edge
    with pytest.raises(ValidationError):
        hypergraph(0, [])


def test_incident():
    g = figure1()
    assert g.incident(3) == (0, 1, 4)
    assert g.incident(0) == (4,)


def test_multi_index_basics():
    n = multi_index({2: 1, 0: 3, 1: 0})
    assert n.degrees == ((0, 3), (2, 1))
    assert n.total_degree == 4
    assert n.support == (0, 2)
    assert n.degree(1) == 0
    with pytest.raises(ValidationError):
        multi_index({0: -1})


def test_multi_index_odd_support():
    n = multi_index({0: 2, 1: 3, 4: 1})
    assert n.odd_support == (1, 4)


# ---------------------------------------------------------------------------
# Berge distance against exhaustive path search


def test_distance_matches_brute_force(rng):
    for _ in range(150):
        g = random_hypergraph(rng, n_max=6, e_max=5)
        for u in range(g.n):
            for v in range(g.n):
                want = berge_paths_exist(g, u, v)
                got = berge_distance(g, u, v)
                if want is None:
                    assert got == math.inf
                else:
                    assert got == want


def test_figure1_distances():
    g = figure1()
    # the observable pair sits three Berge steps apart via the hub
    assert berge_distance(g, 1, 4) == 3
    assert berge_distance(g, 2, 3) == 1
    assert berge_distance(g, 0, 1) == 2


def test_triangle_inequality(rng):
    for _ in range(60):
        g = random_hypergraph(rng, n_max=8, e_max=6)
        d = [[berge_distance(g, u, v) for v in range(g.n)] for u in range(g.n)]
        for u in range(g.n):
            for v in range(g.n):
                for w in range(g.n):
                    assert d[u][w] <= d[u][v] + d[v][w]


def test_ball_growth_and_stabilization(rng):
    for _ in range(80):
        g = random_hypergraph(rng)
        v = int(rng.integers(g.n))
        comp = component(g, v)
        sizes = ball_sizes(g, v)
        assert sizes[0] == 1
        assert all(a <= b for a, b in zip(sizes, sizes[1:]))
        assert sizes[-1] == len(comp)
        assert ball(g, v, len(sizes) + 5) == comp


# ---------------------------------------------------------------------------
# cycles


def test_cycle_detector_matches_brute_force(rng):
    hits = 0
    for _ in range(300):
        g = random_hypergraph(rng, n_max=7, e_max=5)
        want = brute_has_berge_cycle(g)
        hits += want
        assert has_berge_cycle(g) == want
    assert 0 < hits < 300  # both outcomes exercised


def test_two_overlapping_edges_form_cycle():
    assert has_berge_cycle(hypergraph(3, [(0, 1, 2), (0, 1)]))
    assert not has_berge_cycle(hypergraph(3, [(0, 1, 2)]))


def test_figure1_cycles():
    g = figure1()
    assert has_berge_cycle(g)
    # each lobe alone is already cyclic: its triple and pair share two vertices
    lobe, _ = sub_hypergraph(g, [0, 1])
    assert has_berge_cycle(lobe)
    # the two lobes without the hub edge stay cyclic
    both, _ = sub_hypergraph(g, [0, 1, 2, 3])
    assert has_berge_cycle(both)


def test_hypertree():
    path = hypergraph(4, [(0, 1), (1, 2), (2, 3)])
    assert is_hypertree(path)
    ring = hypergraph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert not is_hypertree(ring)
    split = hypergraph(4, [(0, 1), (2, 3)])
    assert not is_hypertree(split)  # disconnected
    triples = hypergraph(5, [(0, 1, 2), (2, 3, 4)])
    assert is_hypertree(triples)


# ---------------------------------------------------------------------------
# balls, interiors, local hypertree


def test_interior_and_boundary():
    path = hypergraph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    inner = interior_edges(path, ball(path, 2, 1))
    assert inner == (1, 2)
    outer = boundary_edges(path, ball(path, 2, 1))
    assert outer == (0, 3)


def test_ball_is_hypertree_on_ring():
    n = 9
    ring = hypergraph(n, [(k, (k + 1) % n) for k in range(n)])
    assert ball_is_hypertree(ring, 0, 3)
    # radius 4 balls cover the whole ring: interior edges close the loop
    assert not ball_is_hypertree(ring, 0, 4)


def test_ball_is_hypertree_equals_no_interior_cycle(rng):
    for _ in range(120):
        g = random_hypergraph(rng)
        v = int(rng.integers(g.n))
        r = int(rng.integers(0, 4))
        sub_vertices = ball(g, v, r)
        keep = interior_edges(g, sub_vertices)
        sub = hypergraph(g.n, [g.edges[e] for e in keep]) if keep else None
        expected = sub is None or not brute_has_berge_cycle(sub)
        assert ball_is_hypertree(g, v, r) == expected


# ---------------------------------------------------------------------------
# pieces


def test_sub_hypergraph_keeps_labels():
    g = figure1()
    sub, kept = sub_hypergraph(g, [2, 3])
    assert kept == (2, 3)
    assert sub.n == g.n
    assert sub.edges == ((4, 5, 6), (5, 6))


def test_vertex_support_and_connected_in():
    g = figure1()
    assert vertex_support(g, multi_index({0: 1, 1: 2})) == frozenset({1, 2, 3})
    assert connected_in(g, 1, 4, (0, 1, 2, 3)) is False
    assert connected_in(g, 1, 4, (0, 2, 4)) is True


def test_component():
    g = hypergraph(5, [(0, 1), (1, 2)])
    assert component(g, 0) == frozenset({0, 1, 2})
    assert component(g, 4) == frozenset({4})


# ---------------------------------------------------------------------------
# text format


def test_text_round_trip(rng):
    for _ in range(25):
        g = random_hypergraph(rng)
        assert from_text(to_text(g)) == g


def test_from_text_rejects_garbage():
    with pytest.raises(ValidationError):
        from_text("")
    with pytest.raises(ValidationError):
        from_text("3\n0 1\n")  # header missing arity
    with pytest.raises(ValidationError):
        from_text("3 2\n0 1\n1 2 0\n")  # arity above header
    with pytest.raises(ValidationError):
        from_text("3 2\n0 x\n")


# ---------------------------------------------------------------------------
# generated instances (hypothesis)


@st.composite
def small_graphs(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    n_edges = draw(st.integers(min_value=1, max_value=5))
    edges = []
    for _ in range(n_edges):
        p = draw(st.sampled_from([2, 2, 3])) if n >= 3 else 2
        edge = tuple(sorted(draw(
            st.lists(st.integers(0, n - 1), min_size=p, max_size=p,
                     unique=True))))
        if edge not in edges:
            edges.append(edge)
    return hypergraph(n, edges)


@given(small_graphs())
@settings(max_examples=120, deadline=None)
def test_distance_symmetry_and_cycle_oracle(g):
    for u in range(g.n):
        for v in range(u + 1, g.n):
            assert berge_distance(g, u, v) == berge_distance(g, v, u)
    assert has_berge_cycle(g) == brute_has_berge_cycle(g)
