"""Hecke-algebra machinery over positively weighted Coxeter systems.

Canonical bases and their structure constants, the a-function (structural
stratification plus a brute-force oracle), quotient algebras with the
one-sided factor decomposition, explicit cell partitions, and an automated
checker for the standard list of positivity/cell properties P1-P15.
"""

from .conjectures import (
    CellReport,
    ConjectureResult,
    Verifier,
    check_conjecture,
    check_gamma_core_factorization,
    compute_cells,
    dn_involutions_check,
)
from .coxeter import INFINITY, CoxeterSystem, Element
from .dihedral import DihedralParams, classify_nf_degree
from .errors import (
    BasisMismatchError,
    BraidOverflowError,
    ConfigError,
    InvariantViolationError,
    OutOfBallError,
)
from .hecke import (
    HeckeElement,
    anti_involution,
    bar_involution,
    f_const,
    mul_T,
    t_element,
    t_one,
    tau,
)
from .kl import (
    AValueRecord,
    KLTable,
    a_oracle,
    a_oracle_scan,
    delta_and_n,
    distinguished_involutions_in_ball,
    gamma,
    get_table,
    h_const,
    kl_basis,
)
from .laurent import LaurentPoly, xi
from .quotient import (
    DecompositionReport,
    NFactorPair,
    QuotientContext,
    n_beta,
    n_tau,
    nc_image,
    nf_const,
    nt_image,
    verify_decomposition,
)
from .strata import (
    DistinguishedElement,
    Stratification,
    a_structural,
    build_D,
    compute_Bd,
    compute_Ud,
    get_stratification,
    omega_level,
)

__version__ = "0.1.0"

__all__ = [
    "INFINITY",
    "AValueRecord",
    "BasisMismatchError",
    "BraidOverflowError",
    "CellReport",
    "ConfigError",
    "ConjectureResult",
    "CoxeterSystem",
    "DecompositionReport",
    "DihedralParams",
    "DistinguishedElement",
    "Element",
    "HeckeElement",
    "InvariantViolationError",
    "KLTable",
    "LaurentPoly",
    "NFactorPair",
    "OutOfBallError",
    "QuotientContext",
    "Stratification",
    "Verifier",
    "a_oracle",
    "a_oracle_scan",
    "a_structural",
    "anti_involution",
    "bar_involution",
    "build_D",
    "check_conjecture",
    "check_gamma_core_factorization",
    "classify_nf_degree",
    "compute_Bd",
    "compute_Ud",
    "compute_cells",
    "delta_and_n",
    "distinguished_involutions_in_ball",
    "dn_involutions_check",
    "f_const",
    "gamma",
    "get_stratification",
    "get_table",
    "h_const",
    "kl_basis",
    "mul_T",
    "n_beta",
    "n_tau",
    "nc_image",
    "nf_const",
    "nt_image",
    "omega_level",
    "t_element",
    "t_one",
    "tau",
    "verify_decomposition",
    "xi",
]
