"""Exceptional sets {t : lambda0 in sigma_p(H0 + tV)} for Hermitian matrix
families: linear pencil analysis, Birman-Schwinger cross-checks, cyclicity
tests and persistent-eigenvalue counterexample construction."""

from ._accel import BACKEND
from .birman_schwinger import BSReduction, bs_reduce, count_in_unit_interval
from .config import ToleranceConfig
from .corpus import corpus_list, corpus_run, get_instance, hunt
from .errors import *  # noqa: F401,F403
from .linalg import (
    EigenDecomposition,
    det,
    eigen_general,
    eigen_hermitian,
    eigenprojection,
    hermitian_sqrt,
    nullspace_basis,
    rank,
    solve,
    split_positive_negative,
)
from .pencil import (
    CharPoly,
    ExceptionalSet,
    Kind,
    PencilProblem,
    char_poly,
    exceptional_set,
    generic_kernel_dimension,
    kernel_witness,
    pencil_from_eigenproblem,
    reduce_to_pencil,
)
from .persistence import (
    CyclicityVerdict,
    PersistenceReport,
    PersistentFamilyWitness,
    PerturbationFamily,
    VClassification,
    analyze,
    classify_v,
    construct_persistent_family,
    cyclicity_check,
    measure_estimate,
    projection_vanishing_check,
)

__version__ = "0.1.0"
