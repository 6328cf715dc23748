"""anomcancel: exact verification of anomaly cancellation identities.

A computer-algebra engine for the characteristic-form q-series of twisted
elliptic-genus bundles.  All cancellation identities are verified as literal
zeros in a truncated graded ring with exact rational arithmetic; the theta
and Eisenstein transformation laws are additionally checked numerically.
"""

from .algebra import (
    GradedPoly,
    PontryaginPoly,
    QSeries,
    Rational,
    RingSpec,
    apply_series,
    ideal_reduce,
    pontryagin_all,
    qs_arith,
    to_pontryagin,
)
from .bundles import (
    Family,
    GenusKind,
    GeometrySpec,
    QFormId,
    Route,
    ch_spinor_pow,
    ch_theta_bundle,
    genus_form,
    p1_combo,
    q_form,
)
from .decomp import BrBetarKind, DecompResult, Group, basis_series, decompose, extract_br_betar
from .errors import DomainError, InvertError, SymmetryError, UsageError
from .theta import (
    ModularFormId,
    ThetaKind,
    jacobi_identity_check,
    modular_form,
    theta_eval,
    theta_logderiv_ratio,
    theta_ratio,
    transformation_residuals,
)
from .verifier import CaseId, CaseRequest, Report, default_grid, run_suite, verify_case

__version__ = "0.1.0"

__all__ = [
    "BrBetarKind", "CaseId", "CaseRequest", "DecompResult", "DomainError",
    "Family", "GenusKind", "GeometrySpec", "GradedPoly", "Group",
    "InvertError", "ModularFormId", "PontryaginPoly", "QFormId", "QSeries",
    "Rational", "Report", "RingSpec", "Route", "SymmetryError", "ThetaKind",
    "UsageError", "apply_series", "basis_series", "ch_spinor_pow",
    "ch_theta_bundle", "decompose", "default_grid", "extract_br_betar",
    "genus_form", "ideal_reduce", "jacobi_identity_check", "modular_form",
    "p1_combo", "pontryagin_all", "q_form", "qs_arith", "run_suite",
    "theta_eval", "theta_logderiv_ratio", "theta_ratio", "to_pontryagin",
    "transformation_residuals", "verify_case",
]
