"""Simplicial complexes with odd symmetry: covers, resolutions, towers.

The pieces compose in one direction: finite complexes and their maps,
homology over a prime field, voltage covers with lifted actions, cone
resolutions verified simplex by simplex, and iterated pull-back towers.
"""

from .complexes import (
    GroupAction,
    SimplicialComplex,
    SimplicialMap,
    Subdivision,
    barycentric_subdivision,
    closure_from_maximal,
    connected_components,
    euler_characteristic,
    identity_subdivision,
    is_connected,
    preimage_subcomplex,
    quotient_by_action,
    star_subdivision,
)
from .covers import Cover, build_cover, lift_action, verify_cover, voltage_assignment
from .errors import HypothesisError, ValidationError
from .fplinalg import FpMatrix, check_prime, is_prime
from .homology import (
    HomologyBasis,
    betti_numbers,
    homology_basis,
    induced_map_on_cohomology,
    induced_map_on_homology,
    restriction_classification,
)
from .reporting import CheckResult, VerificationReport
from .resolution import (
    ResolutionStage,
    identity_stage,
    mapping_cone,
    mapping_cylinder,
    resolve,
    verify_resolution,
)
from .tower import (
    TowerStage,
    build_tower,
    fiber_product,
    induced_subdivision,
    transport_action,
    verify_tower_stage,
)

__all__ = [
    "GroupAction",
    "SimplicialComplex",
    "SimplicialMap",
    "Subdivision",
    "barycentric_subdivision",
    "closure_from_maximal",
    "connected_components",
    "euler_characteristic",
    "identity_subdivision",
    "is_connected",
    "preimage_subcomplex",
    "quotient_by_action",
    "star_subdivision",
    "Cover",
    "build_cover",
    "lift_action",
    "verify_cover",
    "voltage_assignment",
    "HypothesisError",
    "ValidationError",
    "FpMatrix",
    "check_prime",
    "is_prime",
    "HomologyBasis",
    "betti_numbers",
    "homology_basis",
    "induced_map_on_cohomology",
    "induced_map_on_homology",
    "restriction_classification",
    "CheckResult",
    "VerificationReport",
    "ResolutionStage",
    "identity_stage",
    "mapping_cone",
    "mapping_cylinder",
    "resolve",
    "verify_resolution",
    "TowerStage",
    "build_tower",
    "fiber_product",
    "induced_subdivision",
    "transport_action",
    "verify_tower_stage",
]

__version__ = "0.1.0"
