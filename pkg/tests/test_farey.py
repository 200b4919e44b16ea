from fractions import Fraction

import pytest
from hypothesis import given

from solenoid.farey import (
    DOE, IDENTITY, INFINITY, ONE, S, T, U, ZERO, FareyVertex, Moebius, apply_moebius, ccw,
    edge_label, element_to_oriented_edge, evaluate_word, farey_edges, farey_triangles,
    geodesic_normal_form, is_farey_neighbor, mediant, oriented_edge_to_element,
    triangles_adjacent, vertex, word,
)

from conftest import farey_edges as edges_st, moebius


def v(text):
    return vertex(text)


# --- vertices ---------------------------------------------------------------

def test_vertex_canonical_form():
    assert FareyVertex.make(2, 4) == FareyVertex(1, 2)
    assert FareyVertex.make(3, -6) == FareyVertex(-1, 2)
    assert FareyVertex.make(-5, 0) == INFINITY
    assert v("1/0") == INFINITY
    assert v(Fraction(-3, 9)) == FareyVertex(-1, 3)
    with pytest.raises(ValueError):
        FareyVertex.make(0, 0)
    with pytest.raises(ValueError):
        v("1/0x")


@pytest.mark.parametrize("a,b,want", [("0/1", "1/1", "1/2"), ("1/0", "0/1", "1/1"),
                                      ("1/2", "1/1", "2/3")])
def test_mediant(a, b, want):
    m = mediant(v(a), v(b))
    assert m == v(want)
    assert is_farey_neighbor(m, v(a)) and is_farey_neighbor(m, v(b))


def test_mediant_rejects_non_neighbors():
    with pytest.raises(ValueError):
        mediant(v("1/3"), v("1/5"))


@pytest.mark.parametrize("a,b,want", [("0/1", "1/0", True), ("1/3", "2/5", True),
                                      ("1/3", "1/5", False)])
def test_neighbor_predicate(a, b, want):
    assert is_farey_neighbor(v(a), v(b)) is want


@pytest.mark.parametrize("a,b,m,c", [("0/1", "1/0", "1/1", "-1/1"), ("0/1", "1/1", "1/2", "1/0"),
                                     ("1/2", "1/1", "2/3", "0/1")])
def test_triangles_adjacent(a, b, m, c):
    got = triangles_adjacent((v(a), v(b)))
    assert got == (v(m), v(c))
    # oracle: all four pairs are neighbours
    for x in got:
        assert is_farey_neighbor(x, v(a)) and is_farey_neighbor(x, v(b))


@pytest.mark.parametrize("a,b,want", [("0/1", "1/1", "1/2"), ("1/1", "1/0", "2/1"),
                                      ("0/1", "-1/1", "-1/2")])
def test_edge_label(a, b, want):
    assert edge_label((v(a), v(b))) == v(want)
    assert edge_label((v(b), v(a))) == v(want)


def test_e0_has_no_label():
    with pytest.raises(ValueError):
        edge_label((ZERO, INFINITY))


def test_edge_labels_injective_to_depth_8():
    labels = {}
    for e in farey_edges(8):
        a, b = tuple(e)
        if {a, b} == {ZERO, INFINITY}:
            continue
        lab = edge_label((a, b))
        assert lab not in (ONE, v("-1/1"))
        assert lab not in labels, (e, labels.get(lab))
        labels[lab] = e


# --- Moebius ----------------------------------------------------------------

def test_apply_moebius_examples():
    assert apply_moebius(IDENTITY, v("3/5")) == v("3/5")
    assert apply_moebius(Moebius.make(1, 1, 0, 1), ZERO) == ONE
    assert apply_moebius(Moebius.make(0, -1, 1, 0), INFINITY) == ZERO


def test_generator_orders():
    assert S @ S == IDENTITY
    assert U @ U @ U == IDENTITY
    assert U @ S == T


def test_canonical_sign():
    assert Moebius.make(-1, 0, 0, -1) == IDENTITY
    assert Moebius.make(0, 1, -1, 0) == S
    with pytest.raises(ValueError):
        Moebius.make(1, 1, 1, 1)


def test_doe_element_examples():
    assert oriented_edge_to_element(DOE) == IDENTITY
    rev = oriented_edge_to_element((DOE[1], DOE[0]))
    assert rev != IDENTITY and rev @ rev == IDENTITY
    assert rev.edge(DOE) == (DOE[1], DOE[0])


@given(moebius)
def test_edge_element_round_trip(g):
    assert oriented_edge_to_element(element_to_oriented_edge(g)) == g


@given(edges_st)
def test_oriented_edge_round_trip(e):
    assert element_to_oriented_edge(oriented_edge_to_element(e)) == e


@given(moebius, edges_st)
def test_moebius_preserves_neighbors(g, e):
    a, b = g.edge(e)
    assert is_farey_neighbor(a, b)


@given(edges_st)
def test_mediant_is_neighbor(e):
    m = mediant(*e)
    assert is_farey_neighbor(m, e[0]) and is_farey_neighbor(m, e[1])


@given(moebius)
def test_word_decomposition(g):
    assert evaluate_word(word(g)) == g


@given(moebius, moebius)
def test_inverse_and_associativity(g, h):
    assert g @ g.inverse() == IDENTITY
    assert (g @ h).inverse() == h.inverse() @ g.inverse()


@given(edges_st)
def test_geodesic_normal_form(e):
    x0, g = geodesic_normal_form(*e)
    assert x0 == 0  # Farey edges are one orbit
    assert g.edge((ZERO, INFINITY)) == e


def test_ccw_matches_circle_order():
    # circle order: 0/1 (-1), 1/1 (-i), 1/0 (+1), -1/1 (+i)
    assert ccw(ZERO, ONE, INFINITY)
    assert ccw(ONE, INFINITY, v("-1/1"))
    assert not ccw(ONE, ZERO, INFINITY)


def test_enumeration_counts():
    # the dual tree is 3-regular at the root and binary after
    tris = list(farey_triangles(3))
    assert len(tris) == 1 + 3 * (1 + 2 + 4)
    assert len(farey_edges(3)) == 3 + 3 * (2 + 4 + 8)
    for tri, _ in tris:
        assert ccw(*tri)
        for i in range(3):
            assert is_farey_neighbor(tri[i], tri[(i + 1) % 3])
