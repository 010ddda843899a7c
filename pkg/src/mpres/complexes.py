"""Finite abstract simplicial complexes, simplicial maps, and group actions.

Vertices of a complex are the positions 0..n-1 in its canonical order; a
simplex is a strictly increasing tuple of positions. Labels travel alongside
for provenance (covers label vertices with (base label, sheet), subdivisions
with the parent simplex they refine) but play no role in the combinatorics.

Everything here is an immutable value: operations return new complexes and
never mutate their inputs, so concurrent readers need no locking.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from .errors import ValidationError
from .fplinalg import check_prime

VertexId = int
Simplex = tuple[VertexId, ...]
Label = Hashable


def canonical_label(value) -> Label:
    """Recursively turn lists into tuples so labels hash and round-trip."""
    if isinstance(value, (list, tuple)):
        return tuple(canonical_label(v) for v in value)
    return value


def _check_simplex(s: Sequence[int], n_vertices: int) -> Simplex:
    t = tuple(int(v) for v in s)
    if not t:
        raise ValidationError("empty simplex")
    if any(t[i] >= t[i + 1] for i in range(len(t) - 1)):
        raise ValidationError(f"simplex {t} is not strictly increasing")
    if t[0] < 0 or t[-1] >= n_vertices:
        raise ValidationError(f"simplex {t} has a vertex outside 0..{n_vertices - 1}")
    return t


class SimplicialComplex:
    """A face-closed set of simplices on an ordered, labelled vertex set."""

    __slots__ = ("labels", "simplices", "name", "_by_dim")

    def __init__(self, n_vertices_or_labels, simplices: Iterable[Sequence[int]],
                 name: str = ""):
        if isinstance(n_vertices_or_labels, int):
            labels: tuple = tuple(range(n_vertices_or_labels))
        else:
            labels = tuple(canonical_label(x) for x in n_vertices_or_labels)
            if len(set(labels)) != len(labels):
                raise ValidationError("duplicate vertex labels")
        n = len(labels)
        simps = frozenset(_check_simplex(s, n) for s in simplices)
        by_dim: list[list[Simplex]] = []
        for s in simps:
            k = len(s) - 1
            while len(by_dim) <= k:
                by_dim.append([])
            by_dim[k].append(s)
        for bucket in by_dim:
            bucket.sort()
        # face closure
        for s in simps:
            if len(s) > 1:
                for f in combinations(s, len(s) - 1):
                    if f not in simps:
                        raise ValidationError(
                            f"face {f} of {s} is missing: not face-closed")
        covered = {s[0] for s in (by_dim[0] if by_dim else [])}
        if len(covered) != n:
            raise ValidationError("every vertex must appear as a 0-simplex")
        self.labels = labels
        self.simplices = simps
        self.name = name
        self._by_dim = tuple(tuple(b) for b in by_dim)

    # -- basic accessors ---------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    def faces(self, k: int) -> tuple[Simplex, ...]:
        """All k-simplices in canonical (lexicographic) order."""
        if k < 0 or k > self.dim:
            return ()
        return self._by_dim[k]

    def all_simplices(self) -> tuple[Simplex, ...]:
        """Every simplex, ordered by (dimension, lex); the enumeration order
        used for subdivision vertices and boundary matrix columns."""
        out: list[Simplex] = []
        for bucket in self._by_dim:
            out.extend(bucket)
        return tuple(out)

    def __contains__(self, s) -> bool:
        return tuple(s) in self.simplices

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimplicialComplex)
            and self.labels == other.labels
            and self.simplices == other.simplices
        )

    def __repr__(self) -> str:
        counts = ",".join(str(len(b)) for b in self._by_dim)
        tag = f" {self.name!r}" if self.name else ""
        return f"SimplicialComplex({tag} {self.n_vertices} vertices; f=({counts}))"

    def label_of(self, v: int) -> Label:
        return self.labels[v]

    def maximal_simplices(self) -> tuple[Simplex, ...]:
        """Simplices that are not a proper face of another, in canonical order."""
        out = []
        for s in self.all_simplices():
            if not any(
                set(s) < set(t)
                for k in range(len(s), self.dim + 1)
                for t in self._by_dim[k]
            ):
                out.append(s)
        return tuple(out)

    # -- derived subobjects --------------------------------------------------

    def subcomplex(self, simplices: Iterable[Simplex],
                   name: str = "") -> tuple["SimplicialComplex", "SimplicialMap"]:
        """Subcomplex on the given simplices (must be face-closed), with the
        inclusion back into self. Vertex order is inherited."""
        simps = {tuple(s) for s in simplices}
        for s in simps:
            if s not in self.simplices:
                raise ValidationError(f"{s} is not a simplex of the complex")
        verts = sorted({v for s in simps for v in s})
        pos = {v: i for i, v in enumerate(verts)}
        relabeled = [tuple(pos[v] for v in s) for s in simps]
        sub = SimplicialComplex([self.labels[v] for v in verts], relabeled, name=name)
        inclusion = SimplicialMap(sub, self, verts)
        return sub, inclusion

    def skeleton(self, k: int) -> tuple["SimplicialComplex", "SimplicialMap"]:
        return self.subcomplex(
            [s for s in self.all_simplices() if len(s) - 1 <= k])


def closure_from_maximal(maximal: Iterable[Sequence[int]],
                         labels=None, name: str = "") -> SimplicialComplex:
    """Complex generated by the given simplices.

    Without labels, vertex ids are the integers that appear, in sorted order.
    With labels, entries of `maximal` index into the label list.
    """
    tops = []
    for s in maximal:
        t = tuple(int(v) for v in s)
        if len(set(t)) != len(t):
            raise ValidationError(f"repeated vertex in simplex {t}")
        tops.append(tuple(sorted(t)))
    if labels is None:
        verts = sorted({v for s in tops for v in s})
        if verts and verts[0] < 0:
            raise ValidationError("negative vertex id")
        pos = {v: i for i, v in enumerate(verts)}
        labels = verts
        tops = [tuple(pos[v] for v in s) for s in tops]
    faces = set()
    for s in tops:
        for k in range(1, len(s) + 1):
            faces.update(combinations(s, k))
    return SimplicialComplex(labels, faces, name=name)


class SimplicialMap:
    """Vertex map between complexes carrying simplices to simplices."""

    __slots__ = ("domain", "codomain", "vertex_map")

    def __init__(self, domain: SimplicialComplex, codomain: SimplicialComplex,
                 vertex_map: Sequence[int]):
        vm = tuple(int(v) for v in vertex_map)
        if len(vm) != domain.n_vertices:
            raise ValidationError(
                f"vertex map has {len(vm)} entries for {domain.n_vertices} vertices")
        if any(v < 0 or v >= codomain.n_vertices for v in vm):
            raise ValidationError("vertex map target out of range")
        for s in domain.simplices:
            if self._image(vm, s) not in codomain.simplices:
                raise ValidationError(
                    f"image of {s} is not a simplex of the codomain")
        self.domain = domain
        self.codomain = codomain
        self.vertex_map = vm

    @staticmethod
    def _image(vm, s) -> Simplex:
        return tuple(sorted(set(vm[v] for v in s)))

    @classmethod
    def identity(cls, k: SimplicialComplex) -> "SimplicialMap":
        return cls(k, k, range(k.n_vertices))

    def __call__(self, v: int) -> int:
        return self.vertex_map[v]

    def image_simplex(self, s: Simplex) -> Simplex:
        return self._image(self.vertex_map, s)

    @property
    def nondegenerate(self) -> bool:
        """True when the map is injective on the vertices of every simplex."""
        return all(
            len(set(self.vertex_map[v] for v in s)) == len(s)
            for s in self.domain.simplices
        )

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """self after other (other first)."""
        if other.codomain is not self.domain and other.codomain != self.domain:
            raise ValidationError("composition domains do not match")
        return SimplicialMap(
            other.domain, self.codomain,
            [self.vertex_map[v] for v in other.vertex_map])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimplicialMap)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.vertex_map == other.vertex_map
        )

    def __repr__(self) -> str:
        return f"SimplicialMap({self.domain!r} -> {self.codomain!r})"


def preimage_subcomplex(f: SimplicialMap, simplices: Iterable[Simplex],
                        name: str = "") -> tuple[SimplicialComplex, SimplicialMap]:
    """Largest subcomplex of the domain mapped into the given codomain
    subcomplex; returned with its inclusion into the domain."""
    target = {tuple(s) for s in simplices}
    for s in target:
        if s not in f.codomain.simplices:
            raise ValidationError(f"{s} is not a simplex of the codomain")
        if len(s) > 1:
            for face in combinations(s, len(s) - 1):
                if face not in target:
                    raise ValidationError("target set is not face-closed")
    hit = [s for s in f.domain.all_simplices() if f.image_simplex(s) in target]
    return f.domain.subcomplex(hit, name=name)


class GroupAction:
    """Commuting simplicial automorphisms of order dividing p.

    Generators are vertex permutations; the group they generate is elementary
    abelian (Z_p)^m when they are independent, which callers may rely on but
    this class does not enforce beyond commutativity and generator order.
    """

    __slots__ = ("complex", "p", "generators")

    def __init__(self, complex_: SimplicialComplex, p: int,
                 generators: Iterable[Sequence[int]]):
        self.p = check_prime(p)
        n = complex_.n_vertices
        gens = []
        for g in generators:
            perm = tuple(int(v) for v in g)
            if len(perm) != n or set(perm) != set(range(n)):
                raise ValidationError("generator is not a permutation of the vertices")
            for s in complex_.simplices:
                img = tuple(sorted(perm[v] for v in s))
                if len(set(img)) != len(s) or img not in complex_.simplices:
                    raise ValidationError(
                        f"generator does not act simplicially on {s}")
            gens.append(perm)
        ident = tuple(range(n))
        for g in gens:
            power = ident
            for _ in range(self.p):
                power = tuple(g[v] for v in power)
            if power != ident:
                raise ValidationError(f"generator order does not divide {self.p}")
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                gi, gj = gens[i], gens[j]
                if tuple(gi[gj[v]] for v in range(n)) != tuple(gj[gi[v]] for v in range(n)):
                    raise ValidationError(f"generators {i} and {j} do not commute")
        self.complex = complex_
        self.generators = tuple(gens)

    @property
    def m(self) -> int:
        return len(self.generators)

    def orbits(self) -> tuple[tuple[int, ...], ...]:
        """Vertex orbits, each sorted, ordered by least member."""
        n = self.complex.n_vertices
        parent = list(range(n))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for g in self.generators:
            for v in range(n):
                rv, rg = find(v), find(g[v])
                if rv != rg:
                    parent[max(rv, rg)] = min(rv, rg)
        buckets: dict[int, list[int]] = {}
        for v in range(n):
            buckets.setdefault(find(v), []).append(v)
        return tuple(tuple(sorted(b)) for _, b in sorted(buckets.items()))

    def fixed_vertices(self) -> tuple[int, ...]:
        return tuple(
            v for v in range(self.complex.n_vertices)
            if all(g[v] == v for g in self.generators)
        )

    def apply_to_simplex(self, gen_index: int, s: Simplex) -> Simplex:
        g = self.generators[gen_index]
        return tuple(sorted(g[v] for v in s))

    def elements(self) -> list[tuple[int, ...]]:
        """All p^m composite permutations (small m only); identity first."""
        n = self.complex.n_vertices
        elems = [tuple(range(n))]
        for g in self.generators:
            new = []
            for e in elems:
                cur = e
                for _ in range(self.p):
                    new.append(cur)
                    cur = tuple(g[v] for v in cur)
            elems = new
        return elems

    def restricted_to(self, sub: SimplicialComplex,
                      inclusion: SimplicialMap) -> "GroupAction":
        """Restriction to an invariant subcomplex (given with its inclusion)."""
        amb_to_sub = {inclusion.vertex_map[v]: v for v in range(sub.n_vertices)}
        gens = []
        for g in self.generators:
            try:
                gens.append([amb_to_sub[g[inclusion.vertex_map[v]]]
                             for v in range(sub.n_vertices)])
            except KeyError:
                raise ValidationError("subcomplex is not invariant under the action")
        return GroupAction(sub, self.p, gens)


def concat_actions(a: GroupAction, b: GroupAction) -> GroupAction:
    """One action from the generators of two commuting actions on one complex."""
    if a.complex != b.complex or a.p != b.p:
        raise ValidationError("actions live on different complexes or primes")
    return GroupAction(a.complex, a.p, list(a.generators) + list(b.generators))


# -- quotients ---------------------------------------------------------------


def quotient_by_action(action: GroupAction,
                       name: str = "") -> tuple[SimplicialComplex, SimplicialMap]:
    """Orbit complex and the quotient map.

    Errors when the vertex-orbit construction would misrepresent the orbit
    space: a simplex with two vertices in one orbit (degenerate image), or
    two simplex orbits landing on the same image simplex. Both are cured by
    subdividing before quotienting.
    """
    k = action.complex
    orbits = action.orbits()
    orbit_of = {}
    for i, orb in enumerate(orbits):
        for v in orb:
            orbit_of[v] = i
    image_of: dict[Simplex, Simplex] = {}
    for s in k.all_simplices():
        img = tuple(sorted(orbit_of[v] for v in s))
        if len(set(img)) != len(s):
            raise ValidationError(
                f"simplex {s} degenerates in the quotient "
                "(two vertices share an orbit); subdivide first")
        image_of[s] = img
    by_image: dict[Simplex, list[Simplex]] = {}
    for s, img in image_of.items():
        by_image.setdefault(img, []).append(s)
    for img, sources in by_image.items():
        if len(sources) == 1:
            continue
        seen = {sources[0]}
        queue = [sources[0]]
        while queue:
            cur = queue.pop()
            for gi in range(action.m):
                nxt = action.apply_to_simplex(gi, cur)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        if set(sources) != seen:
            raise ValidationError(
                f"distinct simplex orbits collapse onto {img} in the quotient; "
                "subdivide first")
    labels = [tuple(k.labels[v] for v in orb) for orb in orbits]
    q = SimplicialComplex(labels, set(image_of.values()), name=name)
    qmap = SimplicialMap(k, q, [orbit_of[v] for v in range(k.n_vertices)])
    return q, qmap


# -- subdivisions ------------------------------------------------------------


@dataclass(frozen=True)
class Subdivision:
    """A subdivided complex plus carrier bookkeeping.

    `carrier[v]` is the simplex of `parent` whose interior holds vertex v of
    `complex`. The carrier of a subdivision simplex is the union of its
    vertex carriers (always a parent simplex). Not itself a simplicial map.
    """

    parent: SimplicialComplex
    complex: SimplicialComplex
    carrier: tuple[Simplex, ...]

    def simplex_carrier(self, s: Simplex) -> Simplex:
        merged = sorted({v for w in s for v in self.carrier[w]})
        t = tuple(merged)
        if t not in self.parent.simplices:
            raise ValidationError(f"carrier union {t} is not a parent simplex")
        return t

    def subcomplex_over(self, parent_simplices: Iterable[Simplex],
                        name: str = "") -> tuple[SimplicialComplex, SimplicialMap]:
        """Subcomplex of the subdivision lying over a parent subcomplex."""
        target = {tuple(s) for s in parent_simplices}
        hit = [
            s for s in self.complex.all_simplices()
            if self.simplex_carrier(s) in target
        ]
        return self.complex.subcomplex(hit, name=name)


def identity_subdivision(k: SimplicialComplex) -> Subdivision:
    return Subdivision(k, k, tuple((v,) for v in range(k.n_vertices)))


def barycentric_subdivision(k: SimplicialComplex) -> Subdivision:
    """Vertices = simplices of k (in canonical order), simplices = chains of
    proper faces; the carrier of a chain vertex is its simplex."""
    order = k.all_simplices()
    pos = {s: i for i, s in enumerate(order)}
    chains: list[tuple[int, ...]] = []

    def extend(chain: tuple[int, ...], top: Simplex):
        chains.append(chain)
        for size in range(1, len(top)):
            for face in combinations(top, size):
                extend(chain + (pos[face],), face)

    for s in order:
        extend((pos[s],), s)
    # chain positions decrease along inclusion; store sorted increasing
    simplices = {tuple(sorted(c)) for c in chains}
    labels = [tuple(k.labels[v] for v in s) for s in order]
    sd = SimplicialComplex(labels, simplices,
                           name=f"sd({k.name})" if k.name else "")
    return Subdivision(k, sd, tuple(order))


def star_subdivision(k: SimplicialComplex, simplex: Simplex) -> Subdivision:
    """Star the given simplex at a new barycenter vertex (appended last).

    Simplices containing `simplex` are replaced by joins of the barycenter
    with proper faces of `simplex` and link simplices; everything else is
    kept. This is the single-simplex starring; iterating it in decreasing
    dimension order yields a full barycentric subdivision.
    """
    sigma = tuple(simplex)
    if sigma not in k.simplices:
        raise ValidationError(f"{sigma} is not a simplex of the complex")
    b = k.n_vertices
    sigma_set = set(sigma)
    keep = [s for s in k.all_simplices() if not sigma_set <= set(s)]
    link = [()]
    for s in k.all_simplices():
        if sigma_set <= set(s) and len(s) > len(sigma):
            rest = tuple(v for v in s if v not in sigma_set)
            link.append(rest)
    new = []
    for rho in link:
        for size in range(len(sigma)):
            for alpha in combinations(sigma, size):
                new.append(tuple(sorted((b,) + alpha + rho)))
    labels = list(k.labels) + [tuple(k.labels[v] for v in sigma)]
    sd = SimplicialComplex(labels, set(keep) | set(new))
    carrier = tuple((v,) for v in range(k.n_vertices)) + (sigma,)
    return Subdivision(k, sd, carrier)


# -- global invariants -------------------------------------------------------


def connected_components(k: SimplicialComplex) -> tuple[tuple[int, ...], ...]:
    """Vertex sets of the components, each sorted, ordered by least vertex."""
    n = k.n_vertices
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for (u, v) in k.faces(1):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    buckets: dict[int, list[int]] = {}
    for v in range(n):
        buckets.setdefault(find(v), []).append(v)
    return tuple(tuple(sorted(b)) for _, b in sorted(buckets.items()))


def is_connected(k: SimplicialComplex) -> bool:
    return len(connected_components(k)) <= 1


def euler_characteristic(k: SimplicialComplex) -> int:
    return sum((-1) ** (len(s) - 1) for s in k.simplices)
