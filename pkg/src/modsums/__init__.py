"""Exact and numerical toolkit for complete character/exponential sums
over odd moduli, square-root counting, bilinear sum stress tests, and
the square-moduli large-sieve side.

Submodules:

  arith     factorization, Jacobi symbol, CRT, gcd averages
  sqrtmod   complete square-root sets modulo odd integers
  gauss     quadratic Gauss sums: direct and closed form
  expsum    the complete twisted sums, multiplicativity, and the
            prime-power stationary-phase classification
  bilinear  bilinear forms over root sets with their bounds
  sieve     Farey counting, the large-sieve quadratic forms, the
            parameter pipeline, and the modulus-structure bound
  cli       config-driven verification sweeps
"""

from .arith import (
    FactoredModulus,
    NoInverseError,
    ResidueClass,
    as_modulus,
    crt_combine,
    factorize,
    gcd_average,
    inv_mod,
    is_prime,
    jacobi,
)
from .bilinear import (
    BilinearInstance,
    EnergyCount,
    PhaseSpec,
    Thm2Bound,
    bound_thm1,
    bound_thm2,
    bound_trivial,
    energy_count,
    energy_spectrum,
    ones,
    read_coeffs,
    sigma_eval,
    symmetric_residue,
    unit_phases,
    write_coeffs,
)
from .expsum import (
    LAMBDA,
    BoundCheck,
    CochraneContext,
    ExpSumParams,
    MultiplicativityResult,
    cochrane_alpha_bound,
    critical_points,
    esum_bound_check,
    esum_eval,
    esum_multiplicativity_check,
    esum_prime_power_product,
    mixed_sum_eval,
    mixed_sum_grid,
    partial_sum_alpha,
    partial_sums_by_class,
    sample_structured_params,
)
from .gauss import (
    GaussSumParams,
    epsilon_c,
    gauss_closed_form,
    gauss_closed_form_grid,
    gauss_direct,
    gauss_direct_grid,
)
from .rng import SplitMix64, derive
from .sieve import (
    OPS_GUARD,
    FareyQuery,
    LsBounds,
    LsInstance,
    LsParams,
    OversizeError,
    RelationCheck,
    farey_count,
    lemma41_bound,
    ls_bound_eval,
    ls_quadform_classical,
    ls_quadform_square_moduli,
    ls_relation_check,
    params_pipeline,
    thm3_bound,
    z_breakpoints,
    z_range,
)
from .sqrtmod import (
    SquareRootSet,
    sqrt_mod,
    sqrt_mod_prime,
    sqrt_mod_prime_power,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # arith
    "FactoredModulus",
    "NoInverseError",
    "ResidueClass",
    "as_modulus",
    "crt_combine",
    "factorize",
    "gcd_average",
    "inv_mod",
    "is_prime",
    "jacobi",
    # sqrtmod
    "SquareRootSet",
    "sqrt_mod",
    "sqrt_mod_prime",
    "sqrt_mod_prime_power",
    # gauss
    "GaussSumParams",
    "epsilon_c",
    "gauss_closed_form",
    "gauss_closed_form_grid",
    "gauss_direct",
    "gauss_direct_grid",
    # expsum
    "LAMBDA",
    "BoundCheck",
    "CochraneContext",
    "ExpSumParams",
    "MultiplicativityResult",
    "cochrane_alpha_bound",
    "critical_points",
    "esum_bound_check",
    "esum_eval",
    "esum_multiplicativity_check",
    "esum_prime_power_product",
    "mixed_sum_eval",
    "mixed_sum_grid",
    "partial_sum_alpha",
    "partial_sums_by_class",
    "sample_structured_params",
    # bilinear
    "BilinearInstance",
    "EnergyCount",
    "PhaseSpec",
    "Thm2Bound",
    "bound_thm1",
    "bound_thm2",
    "bound_trivial",
    "energy_count",
    "energy_spectrum",
    "ones",
    "read_coeffs",
    "sigma_eval",
    "symmetric_residue",
    "unit_phases",
    "write_coeffs",
    # sieve
    "OPS_GUARD",
    "FareyQuery",
    "LsBounds",
    "LsInstance",
    "LsParams",
    "OversizeError",
    "RelationCheck",
    "farey_count",
    "lemma41_bound",
    "ls_bound_eval",
    "ls_quadform_classical",
    "ls_quadform_square_moduli",
    "ls_relation_check",
    "params_pipeline",
    "thm3_bound",
    "z_breakpoints",
    "z_range",
    # rng
    "SplitMix64",
    "derive",
]
