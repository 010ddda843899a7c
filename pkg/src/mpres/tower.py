"""Finite stages of the iterated pull-back tower with its growing action.

Each stage barycentrically refines the previous base triangulation, resolves
the refinement from scratch, re-triangulates the accumulated stage over the
finer base (twice: once over the barycentric refinement, once over the
resolution's own subdivision), and takes the simplicial fiber product. The
convention is fixed as: the new resolution is pulled back over the
accumulated stage. Generators accumulate as a direct sum, earlier stages
first.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace

from .complexes import (
    GroupAction,
    Simplex,
    SimplicialComplex,
    SimplicialMap,
    Subdivision,
    barycentric_subdivision,
    preimage_subcomplex,
    quotient_by_action,
)
from .errors import ValidationError
from .fplinalg import check_prime, rank
from .homology import classify_matrix, homology_basis, induced_map_on_homology
from .resolution import (
    CheckResult,
    ResolutionStage,
    VerificationReport,
    _inclusion_between,
    _run_jobs,
    resolve,
)


# -- subdivision pullback ------------------------------------------------------


@dataclass(frozen=True)
class PulledBackSubdivision:
    """A subdivision of the domain induced by one of the codomain.

    Vertex i of the new complex is the pair `pairs[i] = (s, w)`: the unique
    point of domain simplex s over subdivision vertex w. `to_fine` sends it
    to w, making the original map simplicial on the refined triangulations.
    """

    subdivision: Subdivision
    to_fine: SimplicialMap
    pairs: tuple[tuple[Simplex, int], ...]


def induced_subdivision(f: SimplicialMap,
                        fine: Subdivision) -> PulledBackSubdivision:
    """Pull a subdivision of the codomain back along a map that is injective
    on every simplex; each domain simplex is refined exactly like its image."""
    if fine.parent != f.codomain:
        raise ValidationError("subdivision does not refine the map's codomain")
    if not f.nondegenerate:
        raise ValidationError(
            "cannot pull a subdivision back along a degenerate map")
    dom = f.domain
    over: dict[Simplex, list[int]] = defaultdict(list)
    for w in range(fine.complex.n_vertices):
        over[fine.carrier[w]].append(w)
    pairs = sorted(
        (s, w)
        for s in dom.all_simplices()
        for w in over.get(f.image_simplex(s), ())
    )
    index = {pair: i for i, pair in enumerate(pairs)}
    by_carrier: dict[Simplex, list[Simplex]] = defaultdict(list)
    for t in fine.complex.all_simplices():
        by_carrier[fine.simplex_carrier(t)].append(t)

    simplices = set()
    for s in dom.all_simplices():
        image = f.image_simplex(s)
        img_set = set(image)
        for c in by_carrier:
            if not set(c) <= img_set:
                continue
            for t in by_carrier[c]:
                simplices.add(tuple(sorted(
                    index[(tuple(v for v in s
                                 if f.vertex_map[v] in set(fine.carrier[w])),
                           w)]
                    for w in t)))
    labels = [
        (tuple(dom.labels[v] for v in s), fine.complex.labels[w])
        for (s, w) in pairs
    ]
    refined = SimplicialComplex(labels, simplices)
    to_fine = SimplicialMap(refined, fine.complex, [w for (_, w) in pairs])
    subdivision = Subdivision(dom, refined, tuple(s for (s, _) in pairs))
    return PulledBackSubdivision(subdivision=subdivision, to_fine=to_fine,
                                 pairs=tuple(pairs))


def transport_action(pb: PulledBackSubdivision,
                     action: GroupAction) -> GroupAction:
    """Carry an action of the original complex to its pulled-back refinement;
    the action must preserve the fibers of the refined map."""
    if action.complex != pb.subdivision.parent:
        raise ValidationError("action does not live on the subdivided complex")
    index = {pair: i for i, pair in enumerate(pb.pairs)}
    gens = []
    for g in action.generators:
        perm = []
        for (s, w) in pb.pairs:
            key = (tuple(sorted(g[v] for v in s)), w)
            if key not in index:
                raise ValidationError(
                    "action moves a fiber of the refined map and cannot be "
                    "transported")
            perm.append(index[key])
        gens.append(perm)
    return GroupAction(pb.subdivision.complex, action.p, gens)


# -- fiber products -------------------------------------------------------------


def fiber_product(f: SimplicialMap, g: SimplicialMap):
    """Simplicial fiber product of f and g over their common codomain.

    Vertices are compatible pairs (x, z) in lexicographic order; over each
    pair of simplices with equal image the simplices are the staircase
    chains: sets of compatible pairs ascending in both per-simplex
    (image, self) orders. For two maps injective on simplices these chains
    are plain diagonals; collapsed simplices contribute their full grids.

    Returns (product, projection to f's domain, projection to g's domain).
    """
    if f.codomain != g.codomain:
        raise ValidationError("fiber product needs a common codomain")
    pairs = [
        (x, z)
        for x in range(f.domain.n_vertices)
        for z in range(g.domain.n_vertices)
        if f.vertex_map[x] == g.vertex_map[z]
    ]
    index = {pair: i for i, pair in enumerate(pairs)}
    by_img_f: dict[Simplex, list[Simplex]] = defaultdict(list)
    for s in f.domain.simplices:
        by_img_f[f.image_simplex(s)].append(s)
    by_img_g: dict[Simplex, list[Simplex]] = defaultdict(list)
    for t in g.domain.simplices:
        by_img_g[g.image_simplex(t)].append(t)

    simplices = set()
    for image, ss in by_img_f.items():
        ts = by_img_g.get(image)
        if not ts:
            continue
        for s in ss:
            s_order = sorted(s, key=lambda x: (f.vertex_map[x], x))
            for t in ts:
                t_order = sorted(t, key=lambda z: (g.vertex_map[z], z))
                grid = [
                    (i, j)
                    for i, x in enumerate(s_order)
                    for j, z in enumerate(t_order)
                    if f.vertex_map[x] == g.vertex_map[z]
                ]

                def grow(chain: list):
                    ids = tuple(sorted(
                        index[(s_order[i], t_order[j])] for (i, j) in chain))
                    simplices.add(ids)
                    last = chain[-1]
                    for nxt in grid:
                        if nxt > last and nxt[0] >= last[0] and nxt[1] >= last[1]:
                            grow(chain + [nxt])

                for start in grid:
                    grow([start])
    labels = [
        (f.domain.labels[x], g.domain.labels[z]) for (x, z) in pairs
    ]
    product = SimplicialComplex(labels, simplices)
    to_f = SimplicialMap(product, f.domain, [x for (x, _) in pairs])
    to_g = SimplicialMap(product, g.domain, [z for (_, z) in pairs])
    if f.compose(to_f) != g.compose(to_g):
        raise ValidationError("fiber product square failed to commute")
    return product, to_f, to_g


# -- tower stages ----------------------------------------------------------------


@dataclass(frozen=True)
class TowerStage:
    """One pull-back stage: its complex, maps, cumulative action, report.

    `base` is the stage resolution's subdivision: its parent is the coarse
    triangulation that was resolved at this stage, its complex the fine one
    the projection hits. `previous` is the accumulated earlier stage
    re-triangulated over the fine base (the bonding map's codomain side).
    """

    index: int
    complex: SimplicialComplex
    bonding: SimplicialMap
    projection: SimplicialMap
    action: GroupAction
    base: Subdivision
    previous: SimplicialMap
    m_stage: int
    m: int
    report: VerificationReport | None = None

    @property
    def p(self) -> int:
        return self.action.p


def tower_stage_from_resolution(r: ResolutionStage) -> TowerStage:
    """Stage 1 of a tower: the resolution itself, pulled back over nothing."""
    return TowerStage(
        index=1,
        complex=r.total,
        bonding=r.orbit_map,
        projection=r.orbit_map,
        action=r.action,
        base=r.base,
        previous=SimplicialMap.identity(r.base.complex),
        m_stage=r.m,
        m=r.m,
    )


def next_tower_stage(prev: TowerStage, p: int) -> TowerStage:
    """One more pull-back: refine, resolve fresh, re-triangulate, multiply."""
    fine_prev = prev.base.complex
    bary = barycentric_subdivision(fine_prev)
    pulled_once = induced_subdivision(prev.projection, bary)
    action_once = transport_action(pulled_once, prev.action)
    stage_res = resolve(bary.complex, p)
    pulled_twice = induced_subdivision(pulled_once.to_fine, stage_res.base)
    action_twice = transport_action(pulled_twice, action_once)
    old_map = pulled_twice.to_fine
    product, to_new, to_old = fiber_product(stage_res.orbit_map, old_map)
    projection = old_map.compose(to_old)
    if projection != stage_res.orbit_map.compose(to_new):
        raise ValidationError("tower square does not commute")
    idx = {
        (to_new.vertex_map[i], to_old.vertex_map[i]): i
        for i in range(product.n_vertices)
    }
    gens = []
    for h in action_twice.generators:
        gens.append([
            idx[(to_new.vertex_map[i], h[to_old.vertex_map[i]])]
            for i in range(product.n_vertices)
        ])
    for g in stage_res.action.generators:
        gens.append([
            idx[(g[to_new.vertex_map[i]], to_old.vertex_map[i])]
            for i in range(product.n_vertices)
        ])
    return TowerStage(
        index=prev.index + 1,
        complex=product,
        bonding=to_old,
        projection=projection,
        action=GroupAction(product, p, gens),
        base=stage_res.base,
        previous=old_map,
        m_stage=stage_res.m,
        m=prev.m + stage_res.m,
    )


def build_tower(base: SimplicialComplex, p: int,
                depth: int) -> list[TowerStage]:
    """Tower stages 1..depth over the given complex; each stage carries its
    own verification report."""
    check_prime(p)
    if depth < 1:
        raise ValidationError("tower depth must be at least 1")
    stage = tower_stage_from_resolution(resolve(base, p))
    stage = replace(stage, report=verify_tower_stage(stage))
    stages = [stage]
    for _ in range(2, depth + 1):
        stage = next_tower_stage(stages[-1], p)
        stage = replace(stage, report=verify_tower_stage(stage))
        stages.append(stage)
    return stages


# -- verification -----------------------------------------------------------------


def _preimage_over_coarse(stage: TowerStage, coarse_simplices):
    wanted = {tuple(s) for s in coarse_simplices}
    region = [s for s in stage.base.complex.all_simplices()
              if stage.base.simplex_carrier(s) in wanted]
    return preimage_subcomplex(stage.projection, region)


def eta_check(stage: TowerStage, eta: Simplex) -> CheckResult:
    """Per-simplex restriction check over the coarse base: boundary cycle
    classes must inject into the full preimage's (the homology transpose of
    the restriction epimorphism on first cohomology)."""
    faces = [s for s in stage.base.parent.all_simplices()
             if set(s) <= set(eta)]
    proper = [s for s in faces if s != eta]
    pre_s, incl_s = _preimage_over_coarse(stage, faces)
    pre_b, incl_b = _preimage_over_coarse(stage, proper)
    inc = _inclusion_between(incl_b, incl_s)
    dom = homology_basis(pre_b, 1, stage.p)
    cod = homology_basis(pre_s, 1, stage.p)
    m = induced_map_on_homology(inc, dom, cod)
    injective = rank(m) == dom.dim
    return CheckResult(
        name="boundary_preimage_injective",
        subject=str(eta),
        classification=classify_matrix(m),
        ranks={"boundary": dom.dim, "simplex": cod.dim},
        passed=injective,
    )


def _quotient_matches_projection(action: GroupAction,
                                 projection: SimplicialMap) -> bool:
    """Quotient equals the projection's codomain up to the canonical vertex
    bijection induced by the projection itself."""
    try:
        q, qmap = quotient_by_action(action)
    except ValidationError:
        return False
    base = projection.codomain
    into_base: dict[int, int] = {}
    for v in range(action.complex.n_vertices):
        o, b = qmap.vertex_map[v], projection.vertex_map[v]
        if into_base.setdefault(o, b) != b:
            return False
    if len(set(into_base.values())) != len(into_base):
        return False
    if len(into_base) != base.n_vertices:
        return False
    mapped = {tuple(sorted(into_base[v] for v in s)) for s in q.simplices}
    return mapped == set(base.simplices)


def verify_tower_stage(stage: TowerStage) -> VerificationReport:
    """All stage checks; failures are entries, never exceptions."""
    jobs = [
        (lambda s=s: eta_check(stage, s))
        for s in stage.base.parent.all_simplices()
    ]
    checks = _run_jobs(jobs)

    bound = stage.p ** stage.m
    fiber_sizes: dict[int, int] = defaultdict(int)
    for v in range(stage.complex.n_vertices):
        fiber_sizes[stage.projection.vertex_map[v]] += 1
    sizes = [fiber_sizes[w] for w in range(stage.base.complex.n_vertices)]
    divides = all(n > 0 and bound % n == 0 for n in sizes)
    checks.append(CheckResult(
        name="vertex_fibers_divide",
        subject="global",
        classification="divides" if divides else "violates",
        ranks={"max_fiber": max(sizes), "bound": bound},
        passed=divides,
    ))

    composed = stage.previous.compose(stage.bonding)
    exact = composed == stage.projection
    checks.append(CheckResult(
        name="bonding_composition",
        subject="global",
        classification="equal" if exact else "different",
        ranks={"generators": stage.action.m},
        passed=exact,
    ))

    matches = _quotient_matches_projection(stage.action, stage.projection)
    checks.append(CheckResult(
        name="quotient_matches_base",
        subject="global",
        classification="equal" if matches else "different",
        ranks={"base_simplices": len(stage.base.complex.simplices)},
        passed=matches,
    ))
    return VerificationReport(checks=tuple(checks))
