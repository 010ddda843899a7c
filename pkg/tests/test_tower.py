import pytest

from mpres.complexes import (
    SimplicialComplex,
    SimplicialMap,
    barycentric_subdivision,
    closure_from_maximal,
    connected_components,
    euler_characteristic,
    identity_subdivision,
    quotient_by_action,
)
from mpres.corpus import circle, theta_graph, torus_7, triangle
from mpres.covers import build_cover
from mpres.errors import ValidationError
from mpres.homology import betti_numbers
from mpres.resolution import identity_stage, resolve
from mpres.tower import (
    build_tower,
    fiber_product,
    induced_subdivision,
    tower_stage_from_resolution,
    transport_action,
    verify_tower_stage,
)

import oracle


def test_square_from_two_collapsed_edges():
    """Two edges over a point multiply to a solid square: two triangles
    sharing the staircase diagonal."""
    edge = closure_from_maximal([[0, 1]])
    point = closure_from_maximal([[0]])
    const = SimplicialMap(edge, point, [0, 0])
    square, to_left, to_right = fiber_product(const, const)
    assert square.n_vertices == 4
    assert len(square.faces(1)) == 5
    assert len(square.faces(2)) == 2
    assert euler_characteristic(square) == 1
    assert betti_numbers(square, 2) == (1, 0, 0)
    assert betti_numbers(square, 2, reduced=True) == (0, 0, 0)
    # both projections really are simplicial surjections onto the edge
    assert set(to_left.vertex_map) == {0, 1}
    assert set(to_right.vertex_map) == {0, 1}


@pytest.mark.parametrize("space", [triangle(), theta_graph(), torus_7()])
def test_pullback_along_identity_recovers_domain(space):
    cover = build_cover(space, 2) if space.dim == 1 else None
    f = cover.projection if cover else SimplicialMap.identity(space)
    ident = SimplicialMap.identity(space)
    product, to_f, to_id = fiber_product(f, ident)
    assert product.n_vertices == f.domain.n_vertices
    assert len(product.simplices) == len(f.domain.simplices)
    # to_f relabels the product back onto f's domain
    relabeled = {
        tuple(sorted(to_f.vertex_map[v] for v in s)) for s in product.simplices
    }
    assert relabeled == set(f.domain.simplices)


def test_two_double_covers_of_circle():
    base = circle(3)
    left = build_cover(base, 2)
    right = build_cover(base, 2)
    product, _, _ = fiber_product(left.projection, right.projection)
    assert product.n_vertices == 12
    assert len(product.faces(1)) == 12
    assert euler_characteristic(product) == 0
    comps = connected_components(product)
    assert sorted(len(c) for c in comps) == [6, 6]
    assert betti_numbers(product, 2) == (2, 2)


def test_fiber_product_needs_common_codomain():
    f = SimplicialMap.identity(circle(3))
    g = SimplicialMap.identity(circle(4))
    with pytest.raises(ValidationError):
        fiber_product(f, g)


def test_commuting_square_and_vertex_pairs():
    base = theta_graph()
    cover = build_cover(base, 2)
    f = cover.projection
    product, to_a, to_b = fiber_product(f, f)
    assert f.compose(to_a) == f.compose(to_b)
    # a deck transformation g gives a cone of compatible pairs (x, g x);
    # every one of them must appear among the product's vertices
    pairs = {
        (to_a.vertex_map[i], to_b.vertex_map[i])
        for i in range(product.n_vertices)
    }
    for g in cover.deck.generators:
        for x in range(cover.total.n_vertices):
            assert (x, g[x]) in pairs


def test_fiber_cardinalities_multiply():
    base = theta_graph()
    cover = build_cover(base, 2)
    product, _, _ = fiber_product(cover.projection, cover.projection)
    # count product fibers directly over each base vertex
    fibers = [0] * base.n_vertices
    for x in range(cover.total.n_vertices):
        for z in range(cover.total.n_vertices):
            if cover.projection.vertex_map[x] == cover.projection.vertex_map[z]:
                fibers[cover.projection.vertex_map[x]] += 1
    sheet = cover.sheets
    assert fibers == [sheet * sheet] * base.n_vertices
    assert product.n_vertices == sheet * sheet * base.n_vertices


def test_euler_characteristic_multiplies():
    """Pulling back a p^a-sheet cover against a p^b-sheet cover scales the
    characteristic by p^(a+b)."""
    base = theta_graph()
    cover = build_cover(base, 2)
    assert cover.sheets == 4
    product, _, _ = fiber_product(cover.projection, cover.projection)
    assert euler_characteristic(product) == 16 * euler_characteristic(base)
    assert euler_characteristic(base) == oracle.euler(base.maximal_simplices())


def test_bary_pullback_along_identity_is_bary():
    space = triangle()
    bary = barycentric_subdivision(space)
    pulled = induced_subdivision(SimplicialMap.identity(space), bary)
    fine = pulled.subdivision.complex
    for k in range(3):
        assert len(fine.faces(k)) == len(bary.complex.faces(k))
    assert pulled.to_fine.nondegenerate
    assert len(set(pulled.to_fine.vertex_map)) == bary.complex.n_vertices
    relabeled = {
        tuple(sorted(pulled.to_fine.vertex_map[v] for v in s))
        for s in fine.simplices
    }
    assert relabeled == set(bary.complex.simplices)


def test_bary_pullback_along_cover_is_bary_of_total():
    base = circle(3)
    cover = build_cover(base, 2)
    bary = barycentric_subdivision(base)
    pulled = induced_subdivision(cover.projection, bary)
    upstairs = barycentric_subdivision(cover.total)
    assert pulled.subdivision.complex.n_vertices == upstairs.complex.n_vertices
    assert len(pulled.subdivision.complex.simplices) == len(upstairs.complex.simplices)
    # carriers sit inside the simplex being split
    for (s, w) in pulled.pairs:
        assert cover.projection.image_simplex(s) == bary.carrier[w]


def test_degenerate_pullback_rejected():
    edge = closure_from_maximal([[0, 1]])
    point = closure_from_maximal([[0]])
    const = SimplicialMap(edge, point, [0, 0])
    with pytest.raises(ValidationError):
        induced_subdivision(const, identity_subdivision(point))


def test_transport_moves_deck_but_rejects_strangers():
    from mpres.complexes import GroupAction

    base = circle(3)
    cover = build_cover(base, 2)
    bary = barycentric_subdivision(base)
    pulled = induced_subdivision(cover.projection, bary)

    carried = transport_action(pulled, cover.deck)
    assert carried.m == cover.deck.m
    q, _ = quotient_by_action(carried)
    assert q.n_vertices == bary.complex.n_vertices

    # a reflection lift permutes the fibers over the swapped base vertices,
    # so it cannot ride along a pullback of the projection
    reflection = GroupAction(cover.total, 2, [[0, 1, 4, 5, 2, 3]])
    with pytest.raises(ValidationError):
        transport_action(pulled, reflection)


def test_depth_one_tower_over_graph_is_trivial():
    th = theta_graph()
    [stage] = build_tower(th, 2, 1)
    assert stage.m == 0
    assert stage.complex == th
    assert stage.bonding == SimplicialMap.identity(th)
    assert stage.projection == stage.bonding
    assert stage.report.passed


def test_depth_one_tower_over_triangle_matches_resolution():
    [stage] = build_tower(triangle(), 2, 1)
    fresh = resolve(triangle(), 2)
    assert stage.complex == fresh.total
    assert stage.projection == fresh.orbit_map
    assert stage.m == 1
    assert stage.report.passed
    names = {c.name for c in stage.report.checks}
    assert "boundary_preimage_injective" in names
    top = [c for c in stage.report.checks if c.subject == "(0, 1, 2)"]
    assert top and top[0].classification == "iso"


def test_tower_rejects_bad_parameters():
    with pytest.raises(ValidationError):
        build_tower(triangle(), 2, 0)
    with pytest.raises(ValidationError, match="is not prime"):
        build_tower(triangle(), 4, 1)


@pytest.fixture(scope="module")
def depth_two():
    return build_tower(triangle(), 2, 2)


def test_depth_two_stage_shape(depth_two):
    first, second = depth_two
    assert first.m == 1
    assert second.index == 2
    assert second.m_stage == 54
    assert second.m == 55
    assert second.complex.n_vertices == 811
    assert len(second.complex.simplices) == 5509
    assert second.base.complex.n_vertices == 247
    assert second.action.m == 55


def test_depth_two_all_checks_pass(depth_two):
    second = depth_two[1]
    assert second.report.passed
    assert len(second.report.checks) == 172
    etas = [c for c in second.report.checks
            if c.name == "boundary_preimage_injective"]
    assert len(etas) == 169
    assert all(c.classification == "iso" for c in etas)


def test_depth_two_bonding_composes_exactly(depth_two):
    second = depth_two[1]
    assert second.previous.compose(second.bonding) == second.projection
    assert second.bonding.codomain.n_vertices == 487


def test_depth_two_vertex_fibers(depth_two):
    from collections import Counter

    second = depth_two[1]
    sizes = Counter()
    for v in range(second.complex.n_vertices):
        sizes[second.projection.vertex_map[v]] += 1
    histogram = Counter(sizes.values())
    assert dict(histogram) == {1: 7, 2: 78, 4: 162}
    bound = 2 ** second.m
    assert all(bound % n == 0 for n in histogram)


def test_depth_two_quotient_is_base(depth_two):
    second = depth_two[1]
    check = [c for c in second.report.checks
             if c.name == "quotient_matches_base"]
    assert check and check[0].passed
    assert check[0].ranks["base_simplices"] == 1465


def test_identity_stage_tower_control():
    stage = tower_stage_from_resolution(identity_stage(triangle(), 2))
    report = verify_tower_stage(stage)
    assert not report.passed
    bad = report.failures()
    assert len(bad) == 1
    assert bad[0].name == "boundary_preimage_injective"
    assert bad[0].subject == "(0, 1, 2)"
    assert bad[0].classification == "epi"
