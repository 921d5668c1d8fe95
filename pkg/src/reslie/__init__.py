"""Restricted simple Lie algebras over GF(p): structure constants, second
cohomology H^2 and restricted cohomology H^2_*, and central extensions."""

from .algebra import (
    AlgebraDescription,
    CheckReport,
    bracket_eval,
    jacobi_check,
    jacobson_terms,
    p_power_eval,
    restrictedness_check,
    simplicity_check,
)
from .cohomology import TwoCochain, delta_map, h2_basis, is_coboundary, is_cocycle
from .constructors import (
    ResourceGuardError,
    construct,
    construct_contact,
    construct_hamiltonian,
    construct_psl,
    construct_sl,
    construct_special,
    construct_witt,
)
from .extensions import CentralExtension, build_extension, corollary_extension, verify_extension_axioms, witt1_extension
from .gfp import FieldSpec, SparseMatrix, kernel_basis, rank
from .io import parse_algebra, parse_cocycles, write_algebra, write_cocycles
from .restricted import RestrictedTwoCochain, h2star_basis, restricted_cocycle_check, star_defect

__version__ = "0.1.0"

__all__ = [
    "AlgebraDescription",
    "CheckReport",
    "CentralExtension",
    "FieldSpec",
    "ResourceGuardError",
    "RestrictedTwoCochain",
    "SparseMatrix",
    "TwoCochain",
    "bracket_eval",
    "build_extension",
    "construct",
    "construct_contact",
    "construct_hamiltonian",
    "construct_psl",
    "construct_sl",
    "construct_special",
    "construct_witt",
    "corollary_extension",
    "delta_map",
    "h2_basis",
    "h2star_basis",
    "is_coboundary",
    "is_cocycle",
    "jacobi_check",
    "jacobson_terms",
    "kernel_basis",
    "p_power_eval",
    "parse_algebra",
    "parse_cocycles",
    "rank",
    "restricted_cocycle_check",
    "restrictedness_check",
    "simplicity_check",
    "star_defect",
    "verify_extension_axioms",
    "witt1_extension",
    "write_algebra",
    "write_cocycles",
]
