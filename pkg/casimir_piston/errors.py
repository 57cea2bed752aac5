# Copyright 2025 The casimir-piston authors.
# SPDX-License-Identifier: Apache-2.0

"""Exception hierarchy shared by every module."""

from typing import Any, Dict, List, Optional, Sequence


class CasimirPistonError(Exception):
    """Base class for all errors raised by the library."""


class DomainError(CasimirPistonError, ValueError):
    """An argument lies outside the domain of the quantity being computed."""


class ResourceError(CasimirPistonError, RuntimeError):
    """A truncation index exceeds the configured cap."""


class QuadratureError(CasimirPistonError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    ``trace`` holds the refinement record returned by ``scipy.integrate.quad``
    (subinterval bounds, partial results and error estimates).
    """

    def __init__(self, message: str, trace: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.trace = trace or {}


class BracketingError(CasimirPistonError, RuntimeError):
    """The eigenfrequency scan found fewer sign changes than there must be roots."""

    def __init__(self, message: str, grid: Sequence[float] = (), found: Sequence[float] = ()):
        super().__init__(message)
        self.grid = list(grid)
        self.found = list(found)


class FitError(CasimirPistonError, ValueError):
    """A Laurent fit is rank deficient or too ill-conditioned to be used."""

    def __init__(self, message: str, columns: Optional[List[str]] = None):
        super().__init__(message)
        self.columns = columns or []
