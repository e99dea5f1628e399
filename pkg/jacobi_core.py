"""
Jacobi polynomial core
======================

Parameters, normalization constants and numerically stable evaluation of the
Jacobi polynomials P_n^(a,b) and their orthonormal versions with respect to the
weight w(t) = (1-t)^a (1+t)^b on [-1, 1].

Gamma ratios are always formed from log-gamma differences; Gamma itself
overflows near n = 170 in double precision.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.special import gammaln

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Sup-norm grid policy: max(64, 10 n + 1) Chebyshev points, both endpoints included
MIN_GRID_POINTS = 64
GRID_POINTS_PER_DEGREE = 10


class JacobiDomainError(ValueError):
    """Raised when a polynomial is evaluated outside [-1, 1]"""


class PreconditionError(ValueError):
    """Raised when an operation is called with inputs outside its valid range"""


class ConvergenceError(RuntimeError):
    """Raised when a numerical kernel (eigensolve) fails to converge"""


@dataclass(frozen=True)
class JacobiParams:
    """The pair (alpha, beta) of a Jacobi weight, both > -1"""
    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise PreconditionError(
                f"alpha and beta must be finite, got ({self.alpha}, {self.beta})"
            )
        if self.alpha <= -1 or self.beta <= -1:
            raise PreconditionError(
                f"Jacobi parameters must satisfy alpha, beta > -1, got ({self.alpha}, {self.beta})"
            )

    @property
    def sigma(self) -> float:
        return sigma(self)

    def swapped(self) -> "JacobiParams":
        """Parameters (beta, alpha); P_n^(a,b)(-t) = (-1)^n P_n^(b,a)(t)"""
        return JacobiParams(self.beta, self.alpha)

    def __str__(self) -> str:
        return f"(alpha={self.alpha:g}, beta={self.beta:g})"


@dataclass(frozen=True)
class NormalizationConstant:
    """L2(w) norm h_n of the classical Jacobi polynomial P_n"""
    n: int
    h: float


def sigma(params: JacobiParams) -> float:
    """Growth exponent max(0, 1/2 + max(alpha, beta)) of the orthonormal sup norms"""
    return max(0.0, 0.5 + max(params.alpha, params.beta))


def log_weight_mass(params: JacobiParams) -> float:
    a, b = params.alpha, params.beta
    return (a + b + 1) * math.log(2.0) + gammaln(a + 1) + gammaln(b + 1) - gammaln(a + b + 2)


def weight_mass(params: JacobiParams) -> float:
    """Total mass of the weight, 2^(a+b+1) G(a+1) G(b+1) / G(a+b+2)"""
    return math.exp(log_weight_mass(params))


def _check_index(n: int) -> int:
    if int(n) != n or n < 0:
        raise PreconditionError(f"Polynomial index must be a non-negative integer, got {n}")
    return int(n)


def log_normalization_squared(params: JacobiParams, n: np.ndarray) -> np.ndarray:
    """log h_n^2 for an array of indices"""
    a, b = params.alpha, params.beta
    n = np.asarray(n, dtype=float)
    out = np.empty_like(n)
    zero = n == 0
    # (a+b+1) G(a+b+1) = G(a+b+2) removes the 0/0 at n = 0, a + b = -1
    out[zero] = log_weight_mass(params)
    k = n[~zero]
    out[~zero] = (
        (a + b + 1) * math.log(2.0)
        + gammaln(k + a + 1)
        + gammaln(k + b + 1)
        - np.log(2 * k + a + b + 1)
        - gammaln(k + 1)
        - gammaln(k + a + b + 1)
    )
    return out


def normalization(params: JacobiParams, n: int) -> NormalizationConstant:
    n = _check_index(n)
    log_h2 = float(log_normalization_squared(params, np.array([n]))[0])
    return NormalizationConstant(n=n, h=math.exp(0.5 * log_h2))


def normalizations(params: JacobiParams, n_max: int) -> np.ndarray:
    """h_0 .. h_{n_max} as an array"""
    return np.exp(0.5 * log_normalization_squared(params, np.arange(n_max + 1)))


def as_domain_points(t: ArrayLike) -> np.ndarray:
    x = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(np.abs(x) > 1.0):
        raise JacobiDomainError("Jacobi polynomials are evaluated on [-1, 1] only")
    return x


def eval_jacobi(params: JacobiParams, n: int, t: ArrayLike) -> ArrayLike:
    """Classical P_n^(a,b)(t) by the forward three-term recurrence in n"""
    n = _check_index(n)
    x = as_domain_points(t)
    a, b = params.alpha, params.beta

    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev if x.ndim else float(p_prev)
    p_curr = (a + 1) + (a + b + 2) * (x - 1) / 2
    for k in range(2, n + 1):
        c = 2 * k + a + b
        a1 = 2 * k * (k + a + b) * (c - 2)
        a2 = (c - 1) * (c * (c - 2) * x + a * a - b * b)
        a3 = 2 * (k + a - 1) * (k + b - 1) * c
        p_prev, p_curr = p_curr, (a2 * p_curr - a3 * p_prev) / a1
    return p_curr if x.ndim else float(p_curr)


def eval_orthonormal(params: JacobiParams, n: int, t: ArrayLike) -> ArrayLike:
    """Orthonormal P~_n = P_n / h_n"""
    return eval_jacobi(params, n, t) / normalization(params, n).h


def endpoint_value(params: JacobiParams, n: int) -> float:
    """P~_n(1) = binom(n + a, n) / h_n, in log space"""
    n = _check_index(n)
    a = params.alpha
    log_p1 = gammaln(n + a + 1) - gammaln(n + 1) - gammaln(a + 1)
    log_h = 0.5 * float(log_normalization_squared(params, np.array([n]))[0])
    return math.exp(log_p1 - log_h)


def endpoint_values(params: JacobiParams, n_max: int) -> np.ndarray:
    """P~_n(1) for n = 0 .. n_max"""
    n = np.arange(n_max + 1, dtype=float)
    a = params.alpha
    log_p1 = gammaln(n + a + 1) - gammaln(n + 1) - gammaln(a + 1)
    return np.exp(log_p1 - 0.5 * log_normalization_squared(params, n))


def recurrence_coefficients(params: JacobiParams, m: int) -> Tuple[np.ndarray, np.ndarray]:
    """Jacobi matrix of the orthonormal recurrence.

    Returns the diagonal a_0..a_{m-1} and off-diagonal s_1..s_{m-1} with
    t p_k = s_{k+1} p_{k+1} + a_k p_k + s_k p_{k-1}.
    """
    if m < 1:
        raise PreconditionError(f"Recurrence size must be at least 1, got {m}")
    a, b = params.alpha, params.beta
    ab = a + b

    diag = np.empty(m)
    diag[0] = (b - a) / (ab + 2)
    if m > 1:
        k = np.arange(1, m, dtype=float)
        diag[1:] = (b * b - a * a) / ((2 * k + ab) * (2 * k + ab + 2))

    off_sq = np.empty(max(m - 1, 0))
    if m > 1:
        # k = 1 separately: the general form is 0/0 when a + b = -1
        off_sq[0] = 4 * (a + 1) * (b + 1) / ((ab + 2) ** 2 * (ab + 3))
        if m > 2:
            k = np.arange(2, m, dtype=float)
            c = 2 * k + ab
            off_sq[1:] = 4 * k * (k + a) * (k + b) * (k + ab) / (c * c * (c + 1) * (c - 1))
    return diag, np.sqrt(off_sq)


def orthonormal_table(params: JacobiParams, n_max: int, t: ArrayLike) -> np.ndarray:
    """Rows P~_0 .. P~_{n_max} evaluated at t, shape (n_max + 1, len(t))"""
    x = as_domain_points(np.atleast_1d(t))
    diag, off = recurrence_coefficients(params, n_max + 1)
    table = np.empty((n_max + 1, x.size))
    table[0] = math.exp(-0.5 * log_weight_mass(params))
    if n_max >= 1:
        table[1] = (x - diag[0]) * table[0] / off[0]
    for k in range(1, n_max):
        table[k + 1] = ((x - diag[k]) * table[k] - off[k - 1] * table[k - 1]) / off[k]
    return table


def chebyshev_grid(n: int) -> np.ndarray:
    """Ascending Chebyshev-spaced points on [-1, 1] resolving degree-n oscillations"""
    count = max(MIN_GRID_POINTS, GRID_POINTS_PER_DEGREE * n + 1)
    grid = -np.cos(np.pi * np.arange(count) / (count - 1))
    grid[0], grid[-1] = -1.0, 1.0
    return grid


def sup_norm_orthonormal(params: JacobiParams, n: int) -> float:
    """Grid estimate of max |P~_n| on [-1, 1]"""
    grid = chebyshev_grid(n)
    return float(np.max(np.abs(eval_orthonormal(params, n, grid))))


def conjugate_exponent(p: float) -> float:
    """p' with 1/p + 1/p' = 1"""
    if p < 1:
        raise PreconditionError(f"Exponent must be >= 1, got {p}")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)
