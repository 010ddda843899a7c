"""Equivariant resolution of a complex by iterated covers and mapping cones.

resolve() replaces the interior of every simplex of dimension two and up
with the cone on a (Z_p)^l cover of the (already resolved) boundary
preimage, while the declared base grows a matching collar-plus-cone
subdivision inside that simplex. The result is a complex with an elementary
abelian action whose orbit map hits the subdivided base, together with the
report of every homological property the construction promises.

Vertex bookkeeping keeps three orders aligned: cover vertices are ordered
base-position-major, new total vertices go after all old ones, and new base
vertices (inner copies, then barycenter) go after all old base vertices.
That alignment is what makes every generator order-preserving inside every
simplex, which in turn keeps prism triangulations equivariant.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Callable, Iterable

from .complexes import (
    GroupAction,
    Simplex,
    SimplicialComplex,
    SimplicialMap,
    Subdivision,
    identity_subdivision,
    is_connected,
    preimage_subcomplex,
    quotient_by_action,
)
from .errors import HypothesisError, ValidationError
from .fplinalg import check_prime
from .homology import (
    classify_matrix,
    homology_basis,
    induced_map_on_homology,
)
from .covers import build_cover, lift_action
from .reporting import CheckResult, VerificationReport


# -- mapping cylinders and cones ---------------------------------------------


def _add_with_faces(target: set, simplex: tuple) -> None:
    for k in range(1, len(simplex) + 1):
        target.update(combinations(simplex, k))


def mapping_cylinder(f: SimplicialMap):
    """Ordered simplicial mapping cylinder of f.

    Domain vertices are re-ordered by (image, self), which makes f weakly
    monotone on each simplex; the prisms {f(v_0..v_i)} u {v_i..v_k} then
    triangulate the cylinder. Vertices whose images coincide simply shorten
    their prisms (a constant map yields the cone on its domain).

    Returns (cylinder, domain inclusion, codomain inclusion, retraction).
    """
    dom, cod = f.domain, f.codomain
    order = sorted(range(dom.n_vertices), key=lambda v: (f.vertex_map[v], v))
    slot = {v: i for i, v in enumerate(order)}
    ny = cod.n_vertices

    def dom_id(v: int) -> int:
        return ny + slot[v]

    labels = [("cod", lbl) for lbl in cod.labels]
    labels += [("dom", dom.labels[v]) for v in order]
    simplices: set = set(cod.simplices)
    for s in dom.simplices:
        vs = sorted(s, key=lambda v: slot[v])
        simplices.add(tuple(dom_id(v) for v in vs))
        for i in range(len(vs)):
            cod_part = tuple(sorted(set(f.vertex_map[v] for v in vs[:i + 1])))
            prism = cod_part + tuple(dom_id(v) for v in vs[i:])
            _add_with_faces(simplices, prism)
    cyl = SimplicialComplex(labels, simplices)
    dom_incl = SimplicialMap(dom, cyl, [dom_id(v) for v in range(dom.n_vertices)])
    cod_incl = SimplicialMap(cod, cyl, range(ny))
    retraction = SimplicialMap(
        cyl, cod, list(range(ny)) + [f.vertex_map[v] for v in order])
    return cyl, dom_incl, cod_incl, retraction


def mapping_cone(f: SimplicialMap):
    """Mapping cylinder with the whole domain end coned by a final apex.

    Returns (cone, codomain inclusion); the apex is the last vertex.
    """
    if not is_connected(f.domain):
        raise ValidationError("mapping cone needs a connected domain")
    cyl, dom_incl, cod_incl, _ = mapping_cylinder(f)
    apex = cyl.n_vertices
    labels = list(cyl.labels) + [("apex",)]
    simplices = set(cyl.simplices)
    simplices.add((apex,))
    for s in f.domain.simplices:
        _add_with_faces(simplices,
                        tuple(sorted(dom_incl.vertex_map[v] for v in s)) + (apex,))
    cone = SimplicialComplex(labels, simplices)
    incl = SimplicialMap(f.codomain, cone, cod_incl.vertex_map)
    return cone, incl


# -- stage records ---------------------------------------------------------------


@dataclass(frozen=True)
class ConeRecord:
    """Provenance of one resolved simplex: which cover and cone it produced."""

    simplex: Simplex
    generators: int
    sheets: int
    total_vertices: tuple[int, int]
    base_vertices: tuple[int, int]


@dataclass(frozen=True)
class ResolutionStage:
    """A resolved complex: total, action, and orbit map onto a subdivision."""

    base: Subdivision
    total: SimplicialComplex
    action: GroupAction
    orbit_map: SimplicialMap
    m: int
    provenance: tuple[ConeRecord, ...]
    report: VerificationReport | None = None

    @property
    def p(self) -> int:
        return self.action.p


def identity_stage(k: SimplicialComplex, p: int) -> ResolutionStage:
    """The trivial stage: no covers, no generators, orbit map = identity.

    Valid for 1-dimensional complexes; for anything with 2-simplices the
    verification suite reports exactly which simplices stay unresolved.
    """
    check_prime(p)
    return ResolutionStage(
        base=identity_subdivision(k),
        total=k,
        action=GroupAction(k, p, []),
        orbit_map=SimplicialMap.identity(k),
        m=0,
        provenance=(),
    )


# -- the induction -------------------------------------------------------------


def resolve(k: SimplicialComplex, p: int) -> ResolutionStage:
    """Resolution with an elementary abelian p-group action, skeleton by
    skeleton: each n-simplex (n >= 2), in canonical order, contributes the
    cone on the full cover of its boundary preimage, and the base gains a
    collar and cone inside that simplex. The returned stage carries the
    verification report; failures are reported, never raised.
    """
    check_prime(p)
    if not is_connected(k):
        raise ValidationError("can only resolve a connected complex")
    skel, _ = k.skeleton(min(1, k.dim))
    total = skel
    base = skel
    carrier: tuple[Simplex, ...] = tuple((v,) for v in range(k.n_vertices))
    orbit = SimplicialMap(total, base, range(total.n_vertices))
    gens: list[tuple[int, ...]] = []
    records: list[ConeRecord] = []
    m = 0

    for n in range(2, k.dim + 1):
        for delta in k.faces(n):
            delta_set = set(delta)

            def car(s: Simplex) -> set:
                return {v for w in s for v in carrier[w]}

            bdry = [s for s in base.all_simplices()
                    if car(s) < delta_set]
            bhat, incl = preimage_subcomplex(orbit, bdry)
            current = GroupAction(total, p, gens)
            restricted = current.restricted_to(bhat, incl)
            cover = build_cover(bhat, p)
            try:
                lifted = lift_action(cover, restricted)
            except HypothesisError as e:
                raise HypothesisError(
                    f"resolving simplex {delta}: {e}") from e

            nt = total.n_vertices
            nm = cover.total.n_vertices
            apex = nt + nm
            proj = cover.projection.vertex_map
            to_total = incl.vertex_map

            labels = list(total.labels)
            labels += [("cov", delta, lbl) for lbl in cover.total.labels]
            labels.append(("apex", delta))
            simplices = set(total.simplices)
            for s in cover.total.simplices:
                lifted_ids = tuple(nt + v for v in s)
                simplices.add(lifted_ids)
                for i in range(len(s)):
                    wall = tuple(to_total[proj[v]] for v in s[:i + 1])
                    _add_with_faces(simplices, wall + lifted_ids[i:])
                _add_with_faces(simplices, lifted_ids + (apex,))
            simplices.add((apex,))
            new_total = SimplicialComplex(labels, simplices)

            new_gens = []
            for g, lg in zip(gens, lifted.generators):
                new_gens.append(tuple(g)
                                + tuple(nt + lg[v] for v in range(nm))
                                + (apex,))
            for t in cover.deck.generators:
                new_gens.append(tuple(range(nt))
                                + tuple(nt + t[v] for v in range(nm))
                                + (apex,))

            nb = base.n_vertices
            bdry_vertices = sorted({v for s in bdry for v in s})
            inner = {u: nb + i for i, u in enumerate(bdry_vertices)}
            bary = nb + len(bdry_vertices)
            base_labels = list(base.labels)
            base_labels += [("in", delta, base.labels[u])
                            for u in bdry_vertices]
            base_labels.append(("bary", delta))
            base_simplices = set(base.simplices)
            for s in bdry:
                inner_ids = tuple(inner[u] for u in s)
                for i in range(len(s)):
                    _add_with_faces(base_simplices, s[:i + 1] + inner_ids[i:])
                _add_with_faces(base_simplices, inner_ids + (bary,))
            base_simplices.add((bary,))
            new_base = SimplicialComplex(base_labels, base_simplices)
            new_carrier = carrier + tuple(
                delta for _ in bdry_vertices) + (delta,)

            fmap = list(orbit.vertex_map)
            fmap += [inner[orbit.vertex_map[to_total[proj[v]]]]
                     for v in range(nm)]
            fmap.append(bary)
            orbit = SimplicialMap(new_total, new_base, fmap)
            total, base, carrier = new_total, new_base, new_carrier
            gens = new_gens
            m += cover.l
            records.append(ConeRecord(
                simplex=delta, generators=cover.l, sheets=cover.sheets,
                total_vertices=(nt, apex + 1), base_vertices=(nb, bary + 1)))

    stage = ResolutionStage(
        base=Subdivision(k, base, carrier),
        total=total,
        action=GroupAction(total, p, gens),
        orbit_map=orbit,
        m=m,
        provenance=tuple(records),
    )
    return replace(stage, report=verify_resolution(stage))


# -- verification ---------------------------------------------------------------


def _thread_count() -> int:
    raw = os.environ.get("MPRES_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_jobs(jobs: list[Callable[[], CheckResult]]) -> list[CheckResult]:
    """Run independent checks, optionally on a thread pool; result order is
    the submission order either way."""
    threads = _thread_count()
    if threads == 1 or len(jobs) <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: job(), jobs))


def _inclusion_between(sub: SimplicialMap, sup: SimplicialMap) -> SimplicialMap:
    """Inclusion A -> B given inclusions A -> X and B -> X with A <= B."""
    position = {t: i for i, t in enumerate(sup.vertex_map)}
    return SimplicialMap(sub.domain, sup.domain,
                         [position[t] for t in sub.vertex_map])


def _preimage_over(stage: ResolutionStage, parent_simplices: Iterable[Simplex]):
    """Preimage in the total complex of the base region over a parent
    subcomplex, with its inclusion into the total complex."""
    wanted = {tuple(s) for s in parent_simplices}
    region = [s for s in stage.base.complex.all_simplices()
              if stage.base.simplex_carrier(s) in wanted]
    return preimage_subcomplex(stage.orbit_map, region)


def star_check(stage: ResolutionStage, sigma: Simplex) -> CheckResult:
    """Property (*) at one parent simplex: the boundary preimage must carry
    the same mod-p cycle classes as the full preimage."""
    p = stage.p
    faces = [f for f in stage.base.parent.all_simplices()
             if set(f) <= set(sigma)]
    proper = [f for f in faces if f != sigma]
    pre_s, incl_s = _preimage_over(stage, faces)
    pre_b, incl_b = _preimage_over(stage, proper)
    inc = _inclusion_between(incl_b, incl_s)
    dom = homology_basis(pre_b, 1, p)
    cod = homology_basis(pre_s, 1, p)
    cls = classify_matrix(induced_map_on_homology(inc, dom, cod))
    return CheckResult(
        name="boundary_preimage_iso",
        subject=str(sigma),
        classification=cls,
        ranks={"boundary": dom.dim, "simplex": cod.dim},
        passed=cls == "iso",
    )


def verify_resolution(stage: ResolutionStage) -> VerificationReport:
    """Run every promised check; failures become report entries, not errors."""
    p = stage.p
    jobs = [
        (lambda s=s: star_check(stage, s))
        for s in stage.base.parent.all_simplices()
    ]
    checks = _run_jobs(jobs)

    skeleton_simplices = [s for s in stage.base.parent.all_simplices()
                          if len(s) <= 2]
    pre_sk, incl_sk = _preimage_over(stage, skeleton_simplices)
    target_region = [s for s in stage.base.complex.all_simplices()
                     if stage.base.simplex_carrier(s) in set(skeleton_simplices)]
    image = {stage.orbit_map.image_simplex(
        tuple(incl_sk.vertex_map[v] for v in s)) for s in pre_sk.simplices}
    embeds = (len(pre_sk.simplices) == len(target_region)
              and image == set(target_region))
    dom = homology_basis(pre_sk, 1, p)
    cod = homology_basis(stage.total, 1, p)
    cls = classify_matrix(induced_map_on_homology(incl_sk, dom, cod))
    checks.append(CheckResult(
        name="one_skeleton_embeds",
        subject="1-skeleton",
        classification=cls if embeds else "not-injective",
        ranks={"skeleton": dom.dim, "total": cod.dim},
        passed=embeds and cls == "iso",
    ))

    try:
        q, qmap = quotient_by_action(stage.action)
        matches = (q.simplices == stage.base.complex.simplices
                   and qmap.vertex_map == stage.orbit_map.vertex_map)
        cls = "equal" if matches else "different"
    except ValidationError:
        matches, cls = False, "undefined"
    checks.append(CheckResult(
        name="quotient_matches_base",
        subject="global",
        classification=cls,
        ranks={"base_simplices": len(stage.base.complex.simplices),
               "total_simplices": len(stage.total.simplices)},
        passed=matches,
    ))

    fixed = all(g[v] == v
                for g in stage.action.generators
                for v in incl_sk.vertex_map)
    checks.append(CheckResult(
        name="one_skeleton_fixed",
        subject="1-skeleton",
        classification="fixed" if fixed else "moved",
        ranks={"generators": stage.action.m},
        passed=fixed,
    ))
    return VerificationReport(checks=tuple(checks))
