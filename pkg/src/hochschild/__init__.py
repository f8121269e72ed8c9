"""Hochschild cohomology of finite-dimensional algebras over prime fields.

The package computes HH^*(A, A) for a finite-dimensional algebra (or k-linear
category with finitely many objects) over F_p from its cochain complex, with
the brace operations, cup product, Gerstenhaber bracket and the
characteristic-p power operation; extracts HH^1 as a restricted Lie algebra;
packages the isomorphism invariants used to separate algebras; and verifies
the chain-level identities all of this rests on, exactly.
"""

from .catalog import (
    elem_abelian,
    full_two_object,
    matrix_over,
    morita_pair_category,
    opposite,
    qci,
    standard_catalog,
    truncated_poly,
)
from .cochains import (
    Cochain,
    CochainSpace,
    CohomologyClass,
    HHSpace,
    brace,
    bracket,
    circle,
    cochain_space,
    cohomology,
    cup,
    differential,
    identity_cochain,
    iterated_circle,
    multiplication_cochain,
    p_power_class,
    reduced_square,
    restriction,
    unit_cochain,
    zeta_class,
    zeta_cochain,
)
from .exactla import (
    PrimeField,
    PrimeMatrix,
    QuotientBasis,
    kernel_basis,
    quotient,
    quotient_coords,
    rref,
)
from .fdcat import (
    FDCategory,
    center,
    derivations,
    full_subcategory,
    inner_derivations,
    validate_category,
)
from .hh1 import HH1Result, crosscheck_hh1, hh1_restricted
from .identities import (
    DEFAULT_SIGN_CONVENTION,
    SignConvention,
    check_morita_instance,
    check_power_welldefined,
    check_rel1,
    check_rel2,
    check_turchin,
    resolve_signs,
    zeta_experiment,
)
from .quiver import Arrow, QuiverPresentation, from_quiver
from .restricted import (
    InvariantFingerprint,
    RestrictedLie,
    fingerprint,
    is_torus,
    iso_search,
    max_torus_dim,
    p_eval,
    restricted_enveloping,
    verify_restricted,
    witt_lie,
)

__version__ = "0.1.0"
