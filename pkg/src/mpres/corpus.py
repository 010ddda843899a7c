"""Named example complexes and a deterministic random generator.

The fixed complexes are standard minimal triangulations used throughout the
test suite; the random generator drives the cover property suite and the
command line's randomized verification mode.
"""

from __future__ import annotations

import random

from .complexes import SimplicialComplex, closure_from_maximal


def circle(n: int = 3) -> SimplicialComplex:
    """Cycle graph on n >= 3 vertices."""
    if n < 3:
        raise ValueError("a simplicial circle needs at least 3 vertices")
    return closure_from_maximal(
        [(i, (i + 1) % n) for i in range(n)], name=f"circle{n}")


def triangle() -> SimplicialComplex:
    return closure_from_maximal([(0, 1, 2)], name="triangle")


def tetrahedron_boundary() -> SimplicialComplex:
    return closure_from_maximal(
        [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)], name="sphere")


def theta_graph() -> SimplicialComplex:
    """Two junction vertices joined by three arcs, each subdivided once so
    the graph is simplicial: 5 vertices, 6 edges, first Betti number 2."""
    return closure_from_maximal(
        [(0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)], name="theta")


def torus_7() -> SimplicialComplex:
    """Moebius-Kantor style 7-vertex torus: orbits of two triangle shapes
    under the cyclic vertex shift."""
    tris = [tuple(sorted(((i) % 7, (i + 1) % 7, (i + 3) % 7))) for i in range(7)]
    tris += [tuple(sorted(((i) % 7, (i + 2) % 7, (i + 3) % 7))) for i in range(7)]
    return closure_from_maximal(tris, name="torus7")


def projective_plane_6() -> SimplicialComplex:
    """Antipodal quotient of the icosahedron boundary: 6 vertices, 10 faces."""
    faces = [(1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 6), (1, 5, 6),
             (2, 3, 6), (2, 4, 5), (2, 5, 6), (3, 4, 5), (3, 4, 6)]
    return closure_from_maximal(faces, name="rp2")


def klein_bottle_9() -> SimplicialComplex:
    """9-vertex Klein bottle: 3x3 torus grid with one seam glued by a flip."""

    def corner(i: int, j: int) -> int:
        if i < 3:
            return 3 * (j % 3) + i
        return 3 * ((3 - j) % 3)

    tris = []
    for i in range(3):
        for j in range(3):
            a = corner(i, j)
            b = corner(i + 1, j)
            d = corner(i, j + 1)
            e = corner(i + 1, j + 1)
            tris.append(tuple(sorted((a, b, e))))
            tris.append(tuple(sorted((a, e, d))))
    return closure_from_maximal(tris, name="klein9")


def random_connected_two_complex(seed: int,
                                 max_vertices: int = 10) -> SimplicialComplex:
    """Connected 2-complex on at most max_vertices vertices, determined by
    the seed alone: a random spanning tree plus a few extra edges and
    triangles. Equal seeds give equal complexes on every platform."""
    rng = random.Random(seed)
    n = rng.randint(4, max_vertices)
    maximal: list[tuple[int, ...]] = [
        (rng.randrange(v), v) for v in range(1, n)
    ]
    for _ in range(rng.randint(1, 4)):
        u, v = rng.sample(range(n), 2)
        maximal.append((min(u, v), max(u, v)))
    for _ in range(rng.randint(1, 4)):
        maximal.append(tuple(sorted(rng.sample(range(n), 3))))
    k = closure_from_maximal(maximal)
    return SimplicialComplex(k.labels, k.simplices, name=f"random{seed}")


def random_cover_base(seed: int, max_rank: int = 2,
                      primes: tuple[int, ...] = (2, 3)) -> SimplicialComplex:
    """Random connected 2-complex whose mod-p cycle rank stays in
    1..max_rank for every requested prime, so full covers stay small.

    Rejection is deterministic: unusable draws advance the seed by a fixed
    stride, so the result is a function of the input seed only.
    """
    from .homology import homology_basis

    attempt = seed
    while True:
        k = random_connected_two_complex(attempt)
        ranks = [homology_basis(k, 1, p).dim for p in primes]
        if all(1 <= r <= max_rank for r in ranks):
            return k
        attempt += 1000003
