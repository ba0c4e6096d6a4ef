"""Trotter-Suzuki splitting of the semiclassical Schrodinger equation.

Desk-scale tooling for uniform-in-h observable error studies: discrete
operators, arbitrary-order Suzuki schedules, exact vs Trotterized
Heisenberg evolution, nested-commutator coefficients, and a symbolic
height/width verifier for the underlying operator algebra.
"""

from .commutator_lab import (
    compute_alpha_comm,
    compute_alpha_tilde,
    compute_beta_comm,
    nested_comm,
)
from .discretize import (
    Grid,
    SchemeKind,
    build_backward_diff,
    build_diag,
    build_Dk,
    build_forward_diff,
    build_laplacian,
    build_spectral_derivative,
)
from .expr import ExprError, ExprEvalError, ExprSyntaxError, eval_expr, parse_expr, to_source
from .linalg import (
    ConvergenceError,
    DimensionMismatchError,
    NonHermitianError,
    adjoint,
    circulant_exp,
    commutator,
    hermitian_eig,
    matmul,
    spectral_norm,
    unitary_exp,
    unitarity_defect,
)
from .model import (
    ModelParams,
    PolyObservableSpec,
    build_A,
    build_B,
    build_H,
    build_observable,
)
from .splitting import (
    StagePlan,
    compute_steps,
    exact_unitary,
    heisenberg_evolve,
    suzuki_plan,
    trotter_step,
)
from .symbolic_lie import (
    SymOp,
    VerificationReport,
    discrete_height_estimate,
    grade_n_commutator,
    height,
    kinetic_symbol,
    observable_symbol,
    potential_symbol,
    sym_commutator,
    to_string,
    verify_height_width,
    width,
)

__version__ = "0.1.0"
