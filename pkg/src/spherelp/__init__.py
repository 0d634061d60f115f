"""Linear programming bounds for spherical codes with inner products in
[ell, s], and universal lower bounds for the potential energy of codes with
inner products in [ell, 1).

The public surface mirrors the pipeline: orthogonal families for the base
and signed measures (`orthopoly`, `signed`), the degree-2k feasible
polynomial with its quadrature and the cardinality bound (`levenshtein`),
the product-positivity condition gating everything (`krein`), and the
energy bound through Hermite interpolation of the potential (`energy`).
"""

from .errors import (
    ArgumentError,
    ConditionError,
    DegenerateConfigurationError,
    HypothesisViolation,
    InvariantViolation,
    MOutOfRangeError,
    NumericError,
    PotentialDomainError,
    PreconditionError,
    RangeError,
    SphereLPError,
)
from .precision import get_working_dps, set_working_dps
from .orthopoly import (
    BaseQuadrature,
    GegenbauerExpansion,
    OrthoFamily,
    PDResult,
    adjacent10_family,
    expand_gegenbauer,
    gauss_rule,
    gegenbauer_eval,
    gegenbauer_family,
    gegenbauer_to_power,
    is_positive_definite,
    mu_moments,
    radau_right_rule,
)
from .signed import (
    AdmissibleResult,
    KernelPoly1LS,
    SignedFamily1L,
    admissible,
    build_1l_family,
    build_1ls_poly,
    max_k_for_ell,
    s_window,
)
from .levenshtein import (
    BoundReport,
    LevPolynomial,
    QuadratureRule,
    bound_L2k,
    bound_u4,
    build_f2k,
    build_quadrature,
    classical_odd_bound,
    bound_curves,
    regime_crossover,
)
from .krein import EllStar, KreinReport, conjecture_scan, ell_star, lsk_check, ratio_root, sweep_table
from .energy import (
    EnergyReport,
    HermiteInterpolant,
    Potential,
    energy_lower_bound,
    gaussian,
    hermite_interpolate,
    log_potential,
    newton,
    parse_potential,
    potential_from_file,
    riesz,
    solve_s_for_M,
    verify_g_in_G,
)

__version__ = "0.1.0"
