"""Construction, verification and use of general SIC POVMs."""
from ._jacobi import BACKEND, ConvergenceError
from .basis import (
    OrthogonalParam,
    TracelessBasis,
    gell_mann_basis,
    pauli_basis,
    rotate_basis,
    rotated_basis,
    validate_basis,
)
from .hermitian import eig, eigvals, hermitian, hs_inner, is_psd, min_eigenvalue
from .sic import (
    DualFrame,
    NotPositiveError,
    SicFamily,
    SicPovm,
    construct_sic,
    dual_frame,
    make_family,
    max_sic,
    overlap_b,
    purity,
    recover_basis,
    verify_sic,
)

__version__ = "0.1.0"
