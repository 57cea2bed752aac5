# Copyright 2025 The casimir-piston authors.
# SPDX-License-Identifier: Apache-2.0


from .piston import (
    DielectricProfile,
    Mode,
    PistonGeometry,
    Regulator,
    Side,
    mode_field,
    mode_intensity,
    omega0,
)
from .transfer_matrix import LayeredCavity, transfer_matrix_eigenfrequencies
from .specfun import (
    EULER_GAMMA,
    LerchArgs,
    bernoulli_number,
    bernoulli_poly,
    coth_remainder,
    digamma,
    exp_cosech_kernel,
    lerch_phi,
    lerch_difference_derivative,
    lerch_phi_derivative,
    lerch_small_xi,
)
from .ideal_piston import (
    ENERGY_UNITS,
    PRESSURE_UNITS,
    EnergyPerArea,
    cutoff_antiderivative,
    energy_asymptotic,
    energy_closed,
    energy_numeric,
    energy_principal_part,
    force_finite_difference,
    force_per_area,
    position_energy,
    regularized_mode_integral,
    side_position_energy,
)
from .perturbation import (
    DEFAULT_ORACLE_ALPHA,
    DEFAULT_ORACLE_LAYERS,
    EnergyDerivative,
    ForceDerivative,
    IntegralResult,
    ShiftComparison,
    ShiftResult,
    appendix_integral_closed,
    appendix_integral_quadrature,
    compare_shift,
    denergy_dalpha_asymptotic,
    denergy_dalpha_closed,
    denergy_dalpha_regular,
    denergy_dalpha_sum,
    denergy_laurent_coefficients,
    denergy_principal_part,
    dforce_dalpha_asymptotic,
    dforce_dalpha_closed,
    dforce_dalpha_regular,
    dforce_laurent_coefficients,
    dforce_principal_part,
    side_dforce_coefficients,
    side_laurent_coefficients,
    first_order_shift_closed,
    first_order_shift_quadrature,
    lerch_difference_asymptotic,
    lerch_difference_d2_over_xi,
    oracle_shift,
)


__all__ = [
    'DielectricProfile',
    'Mode',
    'PistonGeometry',
    'Regulator',
    'Side',
    'mode_field',
    'mode_intensity',
    'omega0',
    'LayeredCavity',
    'transfer_matrix_eigenfrequencies',
    'EULER_GAMMA',
    'LerchArgs',
    'bernoulli_number',
    'bernoulli_poly',
    'coth_remainder',
    'digamma',
    'exp_cosech_kernel',
    'lerch_phi',
    'lerch_difference_derivative',
    'lerch_phi_derivative',
    'lerch_small_xi',
    'ENERGY_UNITS',
    'PRESSURE_UNITS',
    'EnergyPerArea',
    'cutoff_antiderivative',
    'energy_asymptotic',
    'energy_closed',
    'energy_numeric',
    'energy_principal_part',
    'force_finite_difference',
    'force_per_area',
    'position_energy',
    'regularized_mode_integral',
    'side_position_energy',
    'DEFAULT_ORACLE_ALPHA',
    'DEFAULT_ORACLE_LAYERS',
    'EnergyDerivative',
    'ForceDerivative',
    'IntegralResult',
    'ShiftComparison',
    'ShiftResult',
    'appendix_integral_closed',
    'appendix_integral_quadrature',
    'compare_shift',
    'denergy_dalpha_asymptotic',
    'denergy_dalpha_closed',
    'denergy_dalpha_regular',
    'denergy_dalpha_sum',
    'denergy_laurent_coefficients',
    'denergy_principal_part',
    'dforce_dalpha_asymptotic',
    'dforce_dalpha_closed',
    'dforce_dalpha_regular',
    'dforce_laurent_coefficients',
    'dforce_principal_part',
    'side_dforce_coefficients',
    'side_laurent_coefficients',
    'first_order_shift_closed',
    'first_order_shift_quadrature',
    'lerch_difference_asymptotic',
    'lerch_difference_d2_over_xi',
    'oracle_shift',
]
