"""File formats: JSON for single objects, directories for staged artifacts.

Every writer sorts keys and ends files with a newline so identical inputs
produce byte-identical output. Labels survive the trip through JSON by
canonicalizing lists back to tuples on load.
"""

from __future__ import annotations

import json
import os
from itertools import combinations

from .complexes import (
    GroupAction,
    SimplicialComplex,
    SimplicialMap,
    Subdivision,
    canonical_label,
)
from .covers import Cover, build_cover
from .errors import ValidationError
from .reporting import CheckResult, VerificationReport
from .resolution import ConeRecord, ResolutionStage
from .tower import TowerStage

TOWER_CONVENTION = "new resolution pulled back over the accumulated stage"


def _dump(data, path: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"no such file: {path}")
    except json.JSONDecodeError as err:
        raise ValidationError(f"{path} is not valid JSON: {err}")


# -- single objects ---------------------------------------------------------------


def complex_to_dict(k: SimplicialComplex) -> dict:
    data = {
        "name": k.name,
        "maximal_simplices": [list(s) for s in k.maximal_simplices()],
    }
    if k.labels != tuple(range(k.n_vertices)):
        data["vertices"] = list(k.labels)
    else:
        data["n_vertices"] = k.n_vertices
    return data


def complex_from_dict(data: dict) -> SimplicialComplex:
    if not isinstance(data, dict) or "maximal_simplices" not in data:
        raise ValidationError("complex file needs a maximal_simplices list")
    maximal = [tuple(s) for s in data["maximal_simplices"]]
    simplices = set()
    for s in maximal:
        for r in range(1, len(s) + 1):
            simplices.update(combinations(sorted(s), r))
    if "vertices" in data:
        labels = [canonical_label(v) for v in data["vertices"]]
        n: object = labels
    else:
        n = int(data.get("n_vertices", 0)) or (
            max((v for s in maximal for v in s), default=-1) + 1)
    return SimplicialComplex(n, simplices, name=data.get("name", ""))


def save_complex(k: SimplicialComplex, path: str) -> None:
    _dump(complex_to_dict(k), path)


def load_complex(path: str) -> SimplicialComplex:
    return complex_from_dict(_load(path))


def save_map(f: SimplicialMap, path: str, domain_file: str,
             codomain_file: str) -> None:
    _dump({
        "domain": domain_file,
        "codomain": codomain_file,
        "vertex_map": list(f.vertex_map),
    }, path)


def load_map(path: str) -> SimplicialMap:
    """Load a map along with the complexes its file points at."""
    data = _load(path)
    here = os.path.dirname(os.path.abspath(path))
    dom = load_complex(os.path.join(here, data["domain"]))
    cod = load_complex(os.path.join(here, data["codomain"]))
    return SimplicialMap(dom, cod, [int(v) for v in data["vertex_map"]])


def _map_between(data: dict, dom: SimplicialComplex,
                 cod: SimplicialComplex) -> SimplicialMap:
    return SimplicialMap(dom, cod, [int(v) for v in data["vertex_map"]])


def save_action(action: GroupAction, path: str, complex_file: str) -> None:
    _dump({
        "complex": complex_file,
        "p": action.p,
        "generators": [list(g) for g in action.generators],
    }, path)


def _action_on(data: dict, k: SimplicialComplex) -> GroupAction:
    return GroupAction(k, int(data["p"]),
                       [[int(v) for v in g] for g in data["generators"]])


def load_action(path: str) -> GroupAction:
    data = _load(path)
    here = os.path.dirname(os.path.abspath(path))
    return _action_on(data, load_complex(os.path.join(here, data["complex"])))


# -- verification reports -----------------------------------------------------------


def report_to_dict(report: VerificationReport) -> dict:
    return {
        "checks": [
            {
                "name": c.name,
                "simplex": c.subject,
                "status": "pass" if c.passed else "fail",
                "classification": c.classification,
                "ranks": dict(c.ranks),
            }
            for c in report.checks
        ]
    }


def report_from_dict(data: dict) -> VerificationReport:
    checks = tuple(
        CheckResult(
            name=c["name"],
            subject=c["simplex"],
            classification=c["classification"],
            ranks={key: int(v) for key, v in c["ranks"].items()},
            passed=c["status"] == "pass",
        )
        for c in data["checks"]
    )
    return VerificationReport(checks=checks)


def save_report(report: VerificationReport, path: str) -> None:
    _dump(report_to_dict(report), path)


def report_as_text(report: VerificationReport) -> str:
    lines = []
    for c in report.checks:
        flag = "PASS" if c.passed else "FAIL"
        ranks = " ".join(f"{k}={v}" for k, v in sorted(c.ranks.items()))
        lines.append(f"{flag} {c.name} {c.subject} [{c.classification}] {ranks}")
    lines.append(f"{'OK' if report.passed else 'FAILED'}: "
                 f"{sum(c.passed for c in report.checks)}/{len(report.checks)} "
                 "checks passed")
    return "\n".join(lines)


# -- covers -----------------------------------------------------------------------


def save_cover(cover: Cover, directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    save_complex(cover.voltage.base, os.path.join(directory, "base.json"))
    save_complex(cover.total, os.path.join(directory, "total.json"))
    _dump({
        "p": cover.p,
        "l": cover.voltage.l,
        "projection": list(cover.projection.vertex_map),
        "deck_generators": [list(g) for g in cover.deck.generators],
        "voltage": {
            f"{u},{v}": [int(c) for c in coeffs]
            for (u, v), coeffs in sorted(cover.voltage.voltage.items())
        },
    }, os.path.join(directory, "cover.json"))


def load_cover(directory: str) -> Cover:
    """Rebuild the canonical cover of the saved base and insist the files
    describe exactly that cover; covers are deterministic, so anything else
    does not round-trip."""
    base = load_complex(os.path.join(directory, "base.json"))
    data = _load(os.path.join(directory, "cover.json"))
    cover = build_cover(base, int(data["p"]))
    total = load_complex(os.path.join(directory, "total.json"))
    same = (
        total == cover.total
        and list(cover.projection.vertex_map) == [int(v) for v in data["projection"]]
        and [list(g) for g in cover.deck.generators]
        == [[int(v) for v in g] for g in data["deck_generators"]]
    )
    if not same:
        raise ValidationError(
            f"{directory} does not hold the canonical cover of its own base")
    return cover


# -- resolution stages ---------------------------------------------------------------


def save_resolution_stage(stage: ResolutionStage, directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    save_complex(stage.base.parent, os.path.join(directory, "parent.json"))
    save_complex(stage.base.complex, os.path.join(directory, "base.json"))
    save_complex(stage.total, os.path.join(directory, "total.json"))
    _dump({"carrier": [list(s) for s in stage.base.carrier]},
          os.path.join(directory, "carriers.json"))
    save_action(stage.action, os.path.join(directory, "action.json"),
                "total.json")
    save_map(stage.orbit_map, os.path.join(directory, "orbit_map.json"),
             "total.json", "base.json")
    if stage.report is not None:
        _dump(report_to_dict(stage.report),
              os.path.join(directory, "report.json"))
    _dump({
        "kind": "resolution",
        "p": stage.p,
        "m": stage.m,
        "provenance": [
            {
                "simplex": list(r.simplex),
                "generators": r.generators,
                "sheets": r.sheets,
                "total_vertices": list(r.total_vertices),
                "base_vertices": list(r.base_vertices),
            }
            for r in stage.provenance
        ],
    }, os.path.join(directory, "stage.json"))


def load_resolution_stage(directory: str) -> ResolutionStage:
    meta = _load(os.path.join(directory, "stage.json"))
    if meta.get("kind") != "resolution":
        raise ValidationError(f"{directory} does not hold a resolution stage")
    parent = load_complex(os.path.join(directory, "parent.json"))
    base = load_complex(os.path.join(directory, "base.json"))
    total = load_complex(os.path.join(directory, "total.json"))
    carrier = tuple(
        tuple(int(v) for v in s)
        for s in _load(os.path.join(directory, "carriers.json"))["carrier"])
    action = _action_on(_load(os.path.join(directory, "action.json")), total)
    orbit = _map_between(_load(os.path.join(directory, "orbit_map.json")),
                         total, base)
    report = None
    report_path = os.path.join(directory, "report.json")
    if os.path.exists(report_path):
        report = report_from_dict(_load(report_path))
    provenance = tuple(
        ConeRecord(
            simplex=tuple(int(v) for v in r["simplex"]),
            generators=int(r["generators"]),
            sheets=int(r["sheets"]),
            total_vertices=tuple(int(v) for v in r["total_vertices"]),
            base_vertices=tuple(int(v) for v in r["base_vertices"]),
        )
        for r in meta["provenance"]
    )
    return ResolutionStage(
        base=Subdivision(parent, base, carrier),
        total=total,
        action=action,
        orbit_map=orbit,
        m=int(meta["m"]),
        provenance=provenance,
        report=report,
    )


# -- towers ---------------------------------------------------------------------------


def save_tower_stage(stage: TowerStage, directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    save_complex(stage.complex, os.path.join(directory, "complex.json"))
    save_complex(stage.previous.domain,
                 os.path.join(directory, "previous_complex.json"))
    save_complex(stage.base.parent, os.path.join(directory, "parent.json"))
    save_complex(stage.base.complex, os.path.join(directory, "base.json"))
    _dump({"carrier": [list(s) for s in stage.base.carrier]},
          os.path.join(directory, "carriers.json"))
    save_map(stage.bonding, os.path.join(directory, "bonding.json"),
             "complex.json", "previous_complex.json")
    save_map(stage.projection, os.path.join(directory, "projection.json"),
             "complex.json", "base.json")
    save_map(stage.previous, os.path.join(directory, "previous.json"),
             "previous_complex.json", "base.json")
    save_action(stage.action, os.path.join(directory, "action.json"),
                "complex.json")
    if stage.report is not None:
        _dump(report_to_dict(stage.report),
              os.path.join(directory, "report.json"))
    _dump({
        "kind": "tower_stage",
        "index": stage.index,
        "p": stage.p,
        "m_stage": stage.m_stage,
        "m": stage.m,
    }, os.path.join(directory, "stage.json"))


def load_tower_stage(directory: str) -> TowerStage:
    meta = _load(os.path.join(directory, "stage.json"))
    if meta.get("kind") != "tower_stage":
        raise ValidationError(f"{directory} does not hold a tower stage")
    total = load_complex(os.path.join(directory, "complex.json"))
    prev_complex = load_complex(os.path.join(directory, "previous_complex.json"))
    parent = load_complex(os.path.join(directory, "parent.json"))
    base = load_complex(os.path.join(directory, "base.json"))
    carrier = tuple(
        tuple(int(v) for v in s)
        for s in _load(os.path.join(directory, "carriers.json"))["carrier"])
    report = None
    report_path = os.path.join(directory, "report.json")
    if os.path.exists(report_path):
        report = report_from_dict(_load(report_path))
    return TowerStage(
        index=int(meta["index"]),
        complex=total,
        bonding=_map_between(_load(os.path.join(directory, "bonding.json")),
                             total, prev_complex),
        projection=_map_between(
            _load(os.path.join(directory, "projection.json")), total, base),
        action=_action_on(_load(os.path.join(directory, "action.json")),
                          total),
        base=Subdivision(parent, base, carrier),
        previous=_map_between(_load(os.path.join(directory, "previous.json")),
                              prev_complex, base),
        m_stage=int(meta["m_stage"]),
        m=int(meta["m"]),
        report=report,
    )


def save_tower(stages, directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    entries = []
    for stage in stages:
        sub = f"stage{stage.index}"
        save_tower_stage(stage, os.path.join(directory, sub))
        entries.append({
            "index": stage.index,
            "m_stage": stage.m_stage,
            "m": stage.m,
            "directory": sub,
        })
    _dump({"convention": TOWER_CONVENTION, "stages": entries},
          os.path.join(directory, "manifest.json"))


def load_tower(directory: str) -> list[TowerStage]:
    manifest = _load(os.path.join(directory, "manifest.json"))
    return [
        load_tower_stage(os.path.join(directory, entry["directory"]))
        for entry in manifest["stages"]
    ]


# -- subdivisions -----------------------------------------------------------------------


def save_subdivision(sub: Subdivision, directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    save_complex(sub.parent, os.path.join(directory, "parent.json"))
    save_complex(sub.complex, os.path.join(directory, "complex.json"))
    _dump({"carrier": [list(s) for s in sub.carrier]},
          os.path.join(directory, "carriers.json"))


def load_subdivision(directory: str) -> Subdivision:
    parent = load_complex(os.path.join(directory, "parent.json"))
    complex_ = load_complex(os.path.join(directory, "complex.json"))
    carrier = tuple(
        tuple(int(v) for v in s)
        for s in _load(os.path.join(directory, "carriers.json"))["carrier"])
    return Subdivision(parent, complex_, carrier)
