# Copyright 2025 The casimir-piston authors.
# SPDX-License-Identifier: Apache-2.0


from .asymptotics import (
    C0Extraction,
    DivergenceReport,
    LaurentFit,
    LaurentSamples,
    divergence_report,
    extract_c0,
    laurent_fit,
    log_xi_grid,
    sample_quantity,
)
from .configuration import RunConfig, env_verbosity, get_verbosity, set_verbosity
from .errors import (
    BracketingError,
    CasimirPistonError,
    DomainError,
    FitError,
    QuadratureError,
    ResourceError,
)
from .modeling import *  # noqa: F401,F403
from .modeling import __all__ as _modeling_all
from .reproduce import CriterionResult, Reproducer


__version__ = "0.1.0"

set_verbosity(env_verbosity())

__all__ = [
    'C0Extraction',
    'DivergenceReport',
    'LaurentFit',
    'LaurentSamples',
    'divergence_report',
    'extract_c0',
    'laurent_fit',
    'log_xi_grid',
    'sample_quantity',
    'RunConfig',
    'get_verbosity',
    'set_verbosity',
    'BracketingError',
    'CasimirPistonError',
    'DomainError',
    'FitError',
    'QuadratureError',
    'ResourceError',
    'CriterionResult',
    'Reproducer',
] + list(_modeling_all)
