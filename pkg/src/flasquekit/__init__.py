"""Exact computations with lattices over finite groups: Tate cohomology,
flasque and coflasque resolutions, and the character-level invariants of
algebraic tori and homogeneous spaces."""
from .cohomology import is_coflasque, is_flasque, tate_cohomology
from .errors import (
    ConstructionFailure,
    FlasqueKitError,
    GroupMismatch,
    GroupTooLarge,
    NotAPermutation,
    NotARepresentation,
    NotASubgroup,
    NotUnimodular,
    ParseError,
    ShiftBoundExceeded,
    TorsionInput,
    TorsionUnsupportedDegree,
    ValidationError,
)
from .groups import FiniteGroup, Subgroup, all_subgroups, by_name, close_generators, coset_action
from .lattice import (
    FinAbGroup,
    GLattice,
    GMap,
    GModule,
    PermutationStructure,
    character_lattice,
    cokernel_of_map,
    direct_sum,
    dual,
    fixed_sublattice,
    kernel_of_map,
    norm_endomorphism,
    permutation_lattice,
    trivial_lattice,
    validate_lattice,
    validate_module,
)
from .resolutions import (
    Resolution,
    Verdict,
    Verdict3,
    coflasque_resolution,
    flasque_resolution,
    is_permutation_bounded,
    is_stably_permutation_bounded,
    permutation_embedding,
    similarity_fingerprint,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
