"""Matrix perspectives of operator convex functions.

Left/right multiplication perspectives, quantum relative entropy and Lieb
trace functionals, and randomized Loewner-order checks of the
Hansen-Pedersen-Jensen and joint convexity inequalities.
"""

from .entropy import (
    LiebParameters,
    lieb_functional,
    lieb_pq_functional,
    lieb_pq_via_marechal,
    lieb_via_perspective,
    relative_entropy,
    relative_entropy_via_perspective,
    von_neumann_entropy,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    MatPerspError,
    NonPositiveH,
    ParameterError,
    PreconditionError,
)
from .funcat import ScalarFunctionSpec, catalog, parse_function, shift_reduce
from .jensen import (
    check_affine_jensen,
    check_joint_convexity_loewner,
    check_joint_convexity_scalar,
    check_subhom_jensen,
    counterexample_search,
    derive_affine_via_shift,
    verify_suite,
)
from .linalg import BACKEND, DEFAULT_TOL, ToleranceConfig, eig_hermitian, loewner_leq, matrix_function
from .reports import InequalityReport, VerificationReport, Witness
from .superop import LeftRightPair, marechal_form, perspective_form

__version__ = "0.1.0"
