"""Exact invariants of finite posets and their incidence algebras."""

from ._backend import BACKEND
from .chains import FinAbGroup, OrderComplex, boundary_matrix, homology, smith_normal_form
from .cocycles import (
    MultCochain,
    coboundary,
    cohomology_structure,
    cohomology_transversal,
    is_coboundary,
    is_cocycle,
    normalize_2cocycle,
    reduce_modulo_coboundaries,
    universal_coefficients,
)
from .deformation import (
    annihilator_ideals,
    build_deformed,
    deformations_isomorphic,
    is_trivial_deformation,
    recognize_incidence,
    standard_automorphism,
    two_sided_ideals,
)
from .diag import canonical_form, diag_conjugate_test, orbit_invariant, quiver_quotient_preorder
from .errors import PosetForgeError
from .fields import FiniteField, Rationals, parse_field
from .poset import (
    ClosedSubposet,
    Poset,
    Preorder,
    automorphism_group,
    closed_subposets,
    components,
    hasse_covers,
    is_connected,
    parse_poset,
    removable_extremal,
    wedge,
)
from .tensor import k0_table, tensor
from .thin import (
    ThinRep,
    accessibility_chain,
    annihilator_support,
    classify_thin,
    defining_representation,
    rebase_to_defining,
    reps_isomorphic,
    submodule_lattice,
)

__version__ = "0.1.0"
