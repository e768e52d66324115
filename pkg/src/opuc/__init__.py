"""Orthogonal polynomials on the unit circle: measures, Verblunsky coefficients,
Schur and Carathéodory functions, sum rules and transfer-matrix dynamics."""
from .analytic import (
    SchurChain,
    boundary_caratheodory,
    boundary_weight,
    caratheodory,
    caratheodory_from_alphas,
    pure_point_mass,
    r_function,
    radial_divergence,
    schur_from_alphas,
    schur_from_caratheodory,
    schur_step_down,
    schur_step_up,
    szego_condition,
    szego_function,
)
from .errors import OpucError
from .measure import (
    BernsteinSzegoWeight,
    CircleMeasure,
    FourierWeight,
    LebesgueWeight,
    SampledWeight,
    inner_product,
    load_measure,
    moments,
    normalize,
    toeplitz_matrix,
)
from .recursion import (
    VerblunskySeq,
    aleksandrov,
    load_alphas,
    measure_from_alphas,
    monic_polys_from_verblunsky,
    phi_values,
    polys_from_verblunsky,
    star,
    szego_recursion,
    verblunsky_from_measure,
)
from .relative import (
    delta0D,
    delta0D_as_polynomial_limit,
    nonlocal_sum_rule,
    ratio_identity_check,
    step_sum_rule,
    szego_theorem_check,
    weight_ratio_boundary,
)
from .transfer import (
    a_matrix,
    cmv_green,
    cocycle,
    f_limit_check,
    lyapunov_deterministic,
    lyapunov_stochastic,
    m_plus,
    m_tilde,
    second_kind_polys,
    weyl_beta,
    weyl_solution,
)

__version__ = "0.1.0"
