# Copyright 2025 The casimir-piston authors.
# SPDX-License-Identifier: Apache-2.0

"""Special functions behind the closed forms.

Lerch transcendent at unit middle index ``Phi(z, 1, v)``, digamma, Bernoulli
numbers and polynomials, and the kernel ``f(u) = e^u cosech(u)`` with its first
two derivatives. Real arguments only. Coefficient tables are built once at
import and never mutated.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List

import numpy as np
from transformers.utils import logging

from ..errors import DomainError


logger = logging.get_logger(__name__)

EULER_GAMMA = 0.57721566490153286060651209

MAX_BERNOULLI_ORDER = 30
MAX_SMALL_XI_ORDER = 25

# z above this value is evaluated through the small-eps expansion
LERCH_SWITCH_Z = 0.999
LERCH_SWITCH_EPS = -math.log(LERCH_SWITCH_Z)

_LERCH_EXPANSION_TERMS = 20
COTH_SERIES_TERMS = 15
_DIGAMMA_SHIFT = 8.0


def _bernoulli_numbers(n_max: int) -> List[Fraction]:
    # B_n = -1/(n+1) sum_{k<n} C(n+1, k) B_k, with B_1 = -1/2
    numbers = [Fraction(1)]
    for n in range(1, n_max + 1):
        acc = sum(math.comb(n + 1, k) * numbers[k] for k in range(n))
        numbers.append(-acc / (n + 1))
    return numbers


_BERNOULLI = _bernoulli_numbers(MAX_BERNOULLI_ORDER)

# _BERNOULLI_POLY[n][j] is the coefficient of x**j in B_n(x)
_BERNOULLI_POLY = tuple(
    tuple(float(math.comb(n, j) * _BERNOULLI[n - j]) for j in range(n + 1))
    for n in range(MAX_BERNOULLI_ORDER + 1)
)

# coth(u) - 1/u = sum_{n>=1} c_n u**(2n-1)
_COTH_COEFFS = tuple(
    float(Fraction(2) ** (2 * n) * _BERNOULLI[2 * n] / math.factorial(2 * n))
    for n in range(1, COTH_SERIES_TERMS + 1)
)


def _is_pole(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def coth_series_coefficient(n: int) -> float:
    """Coefficient of ``u**(2n-1)`` in ``coth(u) - 1/u``, ``1 <= n <= 15``."""
    if not 1 <= n <= COTH_SERIES_TERMS:
        raise DomainError(f"coth series index must lie in [1, {COTH_SERIES_TERMS}], got {n}")
    return _COTH_COEFFS[n - 1]


def bernoulli_number(n: int) -> float:
    """Bernoulli number ``B_n = B_n(0)`` (so ``B_1 = -1/2``)."""
    if not 0 <= n <= MAX_BERNOULLI_ORDER:
        raise DomainError(f"Bernoulli order must lie in [0, {MAX_BERNOULLI_ORDER}], got {n}")
    return float(_BERNOULLI[n])


def bernoulli_poly(n: int, x: float) -> float:
    """Bernoulli polynomial ``B_n(x)`` for ``0 <= n <= 30``."""
    if int(n) != n or not 0 <= n <= MAX_BERNOULLI_ORDER:
        raise DomainError(f"Bernoulli order must lie in [0, {MAX_BERNOULLI_ORDER}], got {n}")
    value = 0.0
    for coeff in reversed(_BERNOULLI_POLY[int(n)]):
        value = value * x + coeff
    return value


def digamma(x: float) -> float:
    """Logarithmic derivative of the gamma function.

    Negative arguments go through the reflection formula; positive ones are
    shifted above 8 with the recurrence and finished with the asymptotic series.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"digamma needs a finite argument, got {x}")
    if _is_pole(x):
        raise DomainError(f"digamma has a pole at {x}")

    if x < 0.0:
        # psi(x) = psi(1 - x) - pi cot(pi x)
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)

    value = 0.0
    while x < _DIGAMMA_SHIFT:
        value -= 1.0 / x
        x += 1.0

    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for k in range(1, 9):
        series += float(_BERNOULLI[2 * k]) / (2 * k) * power
        power *= inv2
    return value + math.log(x) - 0.5 / x - series


def coth_remainder(u: float, d: int = 0) -> float:
    """``d``-th derivative of ``coth(u) - 1/u`` for ``u > 0`` and ``d`` in {0, 1, 2}."""
    if d not in (0, 1, 2):
        raise DomainError(f"Derivative order must be 0, 1 or 2, got {d}")
    if not u > 0.0:
        raise DomainError(f"coth remainder needs u > 0, got {u}")

    if u < 1.0:
        # smallest terms first
        value = 0.0
        for n in range(COTH_SERIES_TERMS, 0, -1):
            p = 2 * n - 1
            c = _COTH_COEFFS[n - 1]
            if d == 0:
                value += c * u ** p
            elif d == 1:
                value += c * p * u ** (p - 1)
            elif p > 1:
                value += c * p * (p - 1) * u ** (p - 2)
        return value

    t = math.exp(-2.0 * u)
    den = -math.expm1(-2.0 * u)
    coth = (1.0 + t) / den
    csch2 = 4.0 * t / (den * den)
    if d == 0:
        return coth - 1.0 / u
    if d == 1:
        return -csch2 + 1.0 / (u * u)
    return 2.0 * csch2 * coth - 2.0 / u ** 3


def exp_cosech_kernel(u: float, d: int = 0) -> float:
    """``d``-th derivative of ``f(u) = e^u cosech(u) = 1 + coth(u)``.

    Assembled as the pole part ``1/u`` (and its derivatives) plus
    `coth_remainder`, which keeps it accurate as ``u -> 0``.
    """
    if not u > 0.0:
        raise DomainError(f"exp_cosech_kernel needs u > 0, got {u}")
    if d == 0:
        return 1.0 / u + 1.0 + coth_remainder(u, 0)
    if d == 1:
        return -1.0 / (u * u) + coth_remainder(u, 1)
    if d == 2:
        return 2.0 / u ** 3 + coth_remainder(u, 2)
    raise DomainError(f"Derivative order must be 0, 1 or 2, got {d}")


@dataclass(frozen=True)
class LerchArgs:
    """Arguments of ``Phi(z, 1, v)``: ``0 < z < 1`` and ``v`` not a non-positive integer."""

    z: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.z) and 0.0 < self.z < 1.0):
            raise DomainError(f"Lerch argument z must satisfy 0 < z < 1, got {self.z}")
        if not math.isfinite(self.v) or _is_pole(self.v):
            raise DomainError(f"Lerch parameter v must not be a non-positive integer, got {self.v}")

    @classmethod
    def from_eps(cls, eps: float, v: float) -> "LerchArgs":
        return cls(z=math.exp(-eps), v=v)

    @property
    def eps(self) -> float:
        return -math.log(self.z)


def _lerch_direct(eps: float, v: float, d: int) -> float:
    # terms beyond M are below 2 M**(d-1) exp(-50) and decay geometrically
    n_terms = int(math.ceil(50.0 / eps)) + 10 + 2 * int(math.ceil(abs(v)))
    m = np.arange(n_terms, dtype=float)
    terms = np.exp(-eps * m) / (m + v)
    if d:
        terms = terms * (-m) ** d
    logger.debug(f"Direct Lerch sum with {n_terms} terms at eps={eps}, v={v}, d={d}")
    return math.fsum(terms.tolist())


def _lerch_series_parts(eps: float, v: float, n_terms: int):
    # S, S', S'' of  S(eps) = sum_{n>=1} (-1)**n B_n(v) eps**n / (n n!)
    s0 = s1 = s2 = 0.0
    for n in range(1, n_terms + 1):
        b = (-1) ** n * bernoulli_poly(n, v) / math.factorial(n)
        s0 += b * eps ** n / n
        s1 += b * eps ** (n - 1)
        if n >= 2:
            s2 += b * (n - 1) * eps ** (n - 2)
    return s0, s1, s2


def _lerch_expansion(eps: float, v: float, d: int, n_terms: int) -> float:
    s0, s1, s2 = _lerch_series_parts(eps, v, n_terms)
    f0 = -math.log(eps) - EULER_GAMMA - digamma(v) - s0
    f1 = -1.0 / eps - s1
    f2 = 1.0 / (eps * eps) - s2
    scale = math.exp(eps * v)
    if d == 0:
        return scale * f0
    if d == 1:
        return scale * (v * f0 + f1)
    return scale * (v * v * f0 + 2.0 * v * f1 + f2)


def lerch_phi_derivative(eps: float, v: float, d: int = 0) -> float:
    """``d``-th derivative in ``eps`` of ``Phi(exp(-eps), 1, v)``, ``d`` in {0, 1, 2}.

    Each derivative inserts a factor ``-m`` into the sum. Summed directly while
    ``exp(-eps) <= 0.999``, otherwise through the small-eps expansion in
    Bernoulli polynomials.
    """
    if d not in (0, 1, 2):
        raise DomainError(f"Derivative order must be 0, 1 or 2, got {d}")
    if not (math.isfinite(eps) and eps > 0.0):
        raise DomainError(f"Lerch argument needs eps = -log z > 0, got {eps}")
    if not math.isfinite(v) or _is_pole(v):
        raise DomainError(f"Lerch parameter v must not be a non-positive integer, got {v}")

    if eps >= LERCH_SWITCH_EPS:
        return _lerch_direct(eps, v, d)
    return _lerch_expansion(eps, v, d, _LERCH_EXPANSION_TERMS)


def _lerch_difference_direct(eps: float, v: float, d: int) -> float:
    n_terms = int(math.ceil(50.0 / eps)) + 10 + 2 * int(math.ceil(abs(v)))
    m = np.arange(1, n_terms, dtype=float)
    # 1/(m+v) - 1/(m-v) taken as one fraction
    terms = np.exp(-eps * m) * (-2.0 * v) / (m * m - v * v)
    if d:
        terms = terms * (-m) ** d
    head = [2.0 / v] if d == 0 else []
    return math.fsum(head + terms.tolist())


def _lerch_difference_expansion(eps: float, v: float, d: int, n_terms: int) -> float:
    # F(v) = e^{v eps} (P + Q(v)); the v-free part P is paired across +-v by hand
    log_part = (-math.log(eps) - EULER_GAMMA, -1.0 / eps, 1.0 / (eps * eps))
    parts = {}
    for sign in (1.0, -1.0):
        s0, s1, s2 = _lerch_series_parts(eps, sign * v, n_terms)
        parts[sign] = (-digamma(sign * v) - s0, -s1, -s2)
    grow, decay = math.exp(v * eps), math.exp(-v * eps)
    total = 0.0
    for j in range(d + 1):
        k = d - j
        weight = math.comb(d, j)
        pair = 2.0 * math.sinh(v * eps) if k % 2 == 0 else 2.0 * math.cosh(v * eps)
        total += weight * v ** k * log_part[j] * pair
        total += weight * (v ** k * grow * parts[1.0][j] - (-v) ** k * decay * parts[-1.0][j])
    return total


def lerch_difference_derivative(eps: float, v: float, d: int = 0) -> float:
    """``d``-th eps-derivative of ``Phi(exp(-eps), 1, v) - Phi(exp(-eps), 1, -v)``.

    The two transcendents share the ``-log(eps)`` singularity and its
    derivatives, which cancel in the difference. Both branches form the
    difference before summing, so the result keeps full relative accuracy as
    ``eps -> 0`` where subtracting two separate `lerch_phi_derivative` values
    loses it. ``v`` must not be an integer.
    """
    if d not in (0, 1, 2):
        raise DomainError(f"Derivative order must be 0, 1 or 2, got {d}")
    if not (math.isfinite(eps) and eps > 0.0):
        raise DomainError(f"Lerch argument needs eps = -log z > 0, got {eps}")
    if not math.isfinite(v) or _is_pole(v) or _is_pole(-v):
        raise DomainError(f"Lerch difference needs a non-integer v, got {v}")

    if eps >= LERCH_SWITCH_EPS:
        return _lerch_difference_direct(eps, v, d)
    return _lerch_difference_expansion(eps, v, d, _LERCH_EXPANSION_TERMS)


def lerch_phi(args: LerchArgs) -> float:
    """``Phi(z, 1, v) = sum_{m>=0} z**m / (m + v)``."""
    return lerch_phi_derivative(args.eps, args.v, 0)


def lerch_small_xi(v: float, s: float, xi: float, order: int) -> float:
    """``Phi(exp(-pi xi / s), 1, v)`` from its small-xi expansion kept up to ``eps**order``."""
    if int(order) != order or not 0 <= order <= MAX_SMALL_XI_ORDER:
        raise DomainError(f"Expansion order must lie in [0, {MAX_SMALL_XI_ORDER}], got {order}")
    if not (s > 0.0 and xi > 0.0):
        raise DomainError(f"Need s > 0 and xi > 0, got s={s}, xi={xi}")
    if not math.isfinite(v) or _is_pole(v):
        raise DomainError(f"Lerch parameter v must not be a non-positive integer, got {v}")
    eps = math.pi * xi / s
    if eps >= 2.0 * math.pi:
        raise DomainError(f"Small-xi expansion diverges for pi xi / s >= 2 pi, got {eps}")
    return _lerch_expansion(eps, v, 0, int(order))
