"""Cover construction and action lifting, frozen cases plus a random suite."""

import pytest

from mpres.complexes import (
    GroupAction,
    SimplicialMap,
    closure_from_maximal,
    connected_components,
    euler_characteristic,
    preimage_subcomplex,
    quotient_by_action,
)
from mpres.corpus import (
    circle,
    klein_bottle_9,
    random_cover_base,
    theta_graph,
)
from mpres.covers import build_cover, lift_action, voltage_assignment
from mpres.errors import HypothesisError, ValidationError
from mpres.fplinalg import FpMatrix
from mpres.homology import betti_numbers, homology_basis, induced_map_on_homology


def test_tree_has_no_voltage():
    path = closure_from_maximal([(0, 1), (1, 2), (2, 3)])
    va = voltage_assignment(path, 3)
    assert va.l == 0
    assert all(v == () for v in va.voltage.values())
    cover = build_cover(path, 3)
    assert cover.sheets == 1
    assert cover.total.simplices == path.simplices


def test_three_cycle_voltage():
    va = voltage_assignment(circle(3), 2)
    assert va.l == 1
    assert va.tree == frozenset({(0, 1), (0, 2)})
    assert va.voltage[(0, 1)] == (0,)
    assert va.voltage[(0, 2)] == (0,)
    assert va.voltage[(1, 2)] == (1,)


def test_double_cover_of_circle_is_hexagon():
    cover = build_cover(circle(3), 2)
    assert cover.sheets == 2
    assert cover.total.n_vertices == 6
    assert len(cover.total.faces(1)) == 6
    assert len(connected_components(cover.total)) == 1
    # walking the cycle hits every vertex: it is a single 6-cycle
    assert betti_numbers(cover.total, 2) == (1, 1)
    # projection wraps twice: each base edge has exactly two lifts
    for e in circle(3).faces(1):
        lifts = [s for s in cover.total.faces(1)
                 if cover.projection.image_simplex(s) == e]
        assert len(lifts) == 2


def test_disconnected_base_rejected():
    two = closure_from_maximal([(0, 1), (2, 3)])
    with pytest.raises(ValidationError, match="not connected"):
        build_cover(two, 2)


def test_theta_graph_cover():
    cover = build_cover(theta_graph(), 2)
    assert cover.l == 2
    assert cover.total.n_vertices == 20
    assert len(cover.total.faces(1)) == 24
    assert euler_characteristic(cover.total) == -4
    assert len(connected_components(cover.total)) == 1
    assert betti_numbers(cover.total, 2) == (1, 5)


def test_deck_action_is_free_and_quotient_is_base():
    cover = build_cover(theta_graph(), 2)
    ident = tuple(range(cover.total.n_vertices))
    for w in cover.deck.elements():
        if w == ident:
            continue
        assert all(w[v] != v for v in range(cover.total.n_vertices))
        for s in cover.total.simplices:
            assert tuple(sorted(w[v] for v in s)) != s
    q, qmap = quotient_by_action(cover.deck)
    assert q.simplices == cover.base.simplices
    assert qmap.vertex_map == cover.projection.vertex_map


def test_projection_kills_h1():
    for base, p in ((circle(3), 2), (theta_graph(), 2), (theta_graph(), 3),
                    (klein_bottle_9(), 2)):
        cover = build_cover(base, p)
        dom = homology_basis(cover.total, 1, p)
        cod = homology_basis(base, 1, p)
        m = induced_map_on_homology(cover.projection, dom, cod)
        assert m == FpMatrix.zeros(cod.dim, dom.dim, p)


def test_preimage_of_edge_is_two_disjoint_edges():
    cover = build_cover(circle(3), 2)
    target = [(0,), (1,), (0, 1)]
    pre, _ = preimage_subcomplex(cover.projection, target)
    assert pre.n_vertices == 4
    assert len(pre.faces(1)) == 2
    assert len(connected_components(pre)) == 2


def test_reflection_lifts_and_commutes():
    base = circle(3)
    cover = build_cover(base, 2)
    reflection = GroupAction(base, 2, [[0, 2, 1]])
    lifted = lift_action(cover, reflection)
    # frozen from the explicit walk: fiber over 0 is fixed pointwise
    assert lifted.generators == ((0, 1, 4, 5, 2, 3),)
    t = cover.deck.generators[0]
    h = lifted.generators[0]
    assert all(h[t[v]] == t[h[v]] for v in range(6))
    # the lift really covers the reflection
    proj = cover.projection.vertex_map
    assert all(proj[h[v]] == reflection.generators[0][proj[v]]
               for v in range(6))


def test_lift_of_trivial_group_is_trivial():
    cover = build_cover(circle(3), 2)
    trivial = GroupAction(circle(3), 2, [])
    lifted = lift_action(cover, trivial)
    assert lifted.generators == ()


def test_rotation_without_fixed_vertex_errors():
    base = circle(3)
    cover = build_cover(base, 3)
    rotation = GroupAction(base, 3, [[1, 2, 0]])
    with pytest.raises(HypothesisError, match="fixes no vertex"):
        lift_action(cover, rotation)


def test_action_moving_cycle_classes_errors_with_loop():
    theta = theta_graph()
    cover = build_cover(theta, 2)
    # swapping two of the three arcs fixes both junctions but permutes the
    # fundamental loops, so it is not trivial on mod-2 cycle classes
    swap = GroupAction(theta, 2, [[0, 1, 3, 2, 4]])
    with pytest.raises(HypothesisError, match="loop"):
        lift_action(cover, swap)


def test_lifted_action_respects_cover_structure():
    # reflection of the theta graph swapping the junctions... fixes no
    # vertex; use the arc-reversing reflection fixing all midpoints instead
    theta = theta_graph()
    cover = build_cover(theta, 2)
    flip = GroupAction(theta, 2, [[1, 0, 2, 3, 4]])
    lifted = lift_action(cover, flip)
    assert lifted.m == 1
    for t in cover.deck.generators:
        h = lifted.generators[0]
        assert all(h[t[v]] == t[h[v]] for v in range(cover.total.n_vertices))


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("p", [2, 3])
def test_random_cover_suite(seed, p):
    base = random_cover_base(1000 * seed + 17)
    cover = build_cover(base, p)
    l = cover.l
    assert cover.sheets == p ** l
    assert cover.total.n_vertices == p ** l * base.n_vertices
    assert euler_characteristic(cover.total) == p ** l * euler_characteristic(base)
    assert len(connected_components(cover.total)) == 1
    dom = homology_basis(cover.total, 1, p)
    cod = homology_basis(base, 1, p)
    m = induced_map_on_homology(cover.projection, dom, cod)
    assert m == FpMatrix.zeros(cod.dim, dom.dim, p)
    q, _ = quotient_by_action(cover.deck)
    assert q.simplices == base.simplices
