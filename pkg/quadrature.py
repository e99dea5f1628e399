"""
Gauss-Jacobi quadrature
=======================

Gauss rules for integrals against w(t) = (1-t)^a (1+t)^b, built from the
symmetric tridiagonal Jacobi matrix by a symmetric eigensolve (Golub-Welsch),
plus the window rules and the adaptive doubling protocol used for
non-polynomial integrands.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal, eigvalsh_tridiagonal

from jacobi_core import (
    ConvergenceError,
    JacobiParams,
    PreconditionError,
    log_weight_mass,
    recurrence_coefficients,
    weight_mass,
)

logger = logging.getLogger(__name__)

# Above this size the full eigenvector matrix is too large; weights then come
# from the Christoffel function of the orthonormal recurrence.
EIGENVECTOR_MAX_NODES = 1024
SAFETY_NODES = 8


@dataclass(frozen=True)
class AdaptiveConfig:
    """Doubling protocol for integrands that are not polynomials of known degree"""
    rel_tol: float = 1e-9
    start_nodes: int = 32
    max_nodes: int = 2 ** 14


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes strictly increasing in (-1, 1) with positive weights"""
    params: JacobiParams
    m: int
    nodes: np.ndarray
    weights: np.ndarray
    breakpoints: Tuple[float, ...] = ()

    @property
    def exact_degree(self) -> int:
        return 2 * self.m - 1


@dataclass(frozen=True)
class IntegralEstimate:
    """Result of the adaptive doubling protocol"""
    value: np.ndarray
    nodes_used: int
    converged: bool

    def __float__(self) -> float:
        return float(np.asarray(self.value).reshape(-1)[0])


def rule_size_for_degree(degree: int) -> int:
    """Nodes needed to integrate degree <= d products exactly, with safety margin"""
    if degree < 0:
        raise PreconditionError(f"Degree must be non-negative, got {degree}")
    return math.ceil((degree + 1) / 2) + SAFETY_NODES


def _christoffel_weights(params: JacobiParams, nodes: np.ndarray, diag, off) -> np.ndarray:
    m = nodes.size
    p_prev = np.zeros_like(nodes)
    p_curr = np.full_like(nodes, math.exp(-0.5 * log_weight_mass(params)))
    total = p_curr ** 2
    for k in range(m - 1):
        s_k = off[k - 1] if k > 0 else 0.0
        p_prev, p_curr = p_curr, ((nodes - diag[k]) * p_curr - s_k * p_prev) / off[k]
        total += p_curr ** 2
    return 1.0 / total


@lru_cache(maxsize=64)
def _cached_rule(alpha: float, beta: float, m: int) -> Tuple[np.ndarray, np.ndarray]:
    params = JacobiParams(alpha, beta)
    diag, off = recurrence_coefficients(params, m)
    try:
        if m <= EIGENVECTOR_MAX_NODES:
            nodes, vectors = eigh_tridiagonal(diag, off)
            weights = weight_mass(params) * vectors[0] ** 2
        else:
            nodes = eigvalsh_tridiagonal(diag, off)
            weights = _christoffel_weights(params, nodes, diag, off)
    except LinAlgError as e:
        raise ConvergenceError(f"Jacobi matrix eigensolve failed for {params}, m={m}: {e}") from e

    nodes.setflags(write=False)
    weights.setflags(write=False)
    logger.debug(f"Built {m}-point Gauss-Jacobi rule for {params}")
    return nodes, weights


def gauss_jacobi_rule(params: JacobiParams, m: int) -> QuadratureRule:
    """m-point Gauss rule for w_(a,b), exact for polynomials of degree <= 2m - 1"""
    if int(m) != m or m < 1:
        raise PreconditionError(f"Node count must be a positive integer, got {m}")
    nodes, weights = _cached_rule(float(params.alpha), float(params.beta), int(m))
    return QuadratureRule(params=params, m=int(m), nodes=nodes, weights=weights)


def window_rule(
    params: JacobiParams, lo: float, hi: float, m: int
) -> Tuple[np.ndarray, np.ndarray]:
    """m-point rule for w_(a,b) restricted to [lo, hi].

    A window touching t = 1 (t = -1) folds (1-t)^a ((1+t)^b) into the Jacobi rule
    on the reference interval; otherwise the weight factor is evaluated at the nodes.
    """
    if not -1.0 <= lo < hi <= 1.0:
        raise PreconditionError(f"Window must satisfy -1 <= lo < hi <= 1, got [{lo}, {hi}]")
    a, b = params.alpha, params.beta
    fold_hi, fold_lo = hi == 1.0, lo == -1.0
    reference = gauss_jacobi_rule(JacobiParams(a if fold_hi else 0.0, b if fold_lo else 0.0), m)

    half = (hi - lo) / 2
    nodes = lo + half * (1 + reference.nodes)
    weights = reference.weights * half
    if fold_hi:
        weights = weights * half ** a
    else:
        weights = weights * (1 - nodes) ** a
    if fold_lo:
        weights = weights * half ** b
    else:
        weights = weights * (1 + nodes) ** b
    return nodes, weights


def composite_rule(
    params: JacobiParams, m: int, breakpoints: Sequence[float] = ()
) -> QuadratureRule:
    """Gauss rule split at fixed interior breakpoints, m nodes per piece"""
    cuts = sorted(c for c in set(breakpoints) if -1.0 < c < 1.0)
    if not cuts:
        return gauss_jacobi_rule(params, m)
    edges = [-1.0] + cuts + [1.0]
    pieces = [window_rule(params, lo, hi, m) for lo, hi in zip(edges[:-1], edges[1:])]
    nodes = np.concatenate([p[0] for p in pieces])
    weights = np.concatenate([p[1] for p in pieces])
    return QuadratureRule(params=params, m=m, nodes=nodes, weights=weights, breakpoints=tuple(cuts))


def integrate(rule: QuadratureRule, f: Callable[[np.ndarray], np.ndarray]) -> float:
    """Sum of weights_i * f(nodes_i)"""
    values = np.asarray(f(rule.nodes), dtype=float)
    return float(np.dot(rule.weights, values))


def adaptive_quadrature(
    params: JacobiParams,
    evaluate: Callable[[QuadratureRule], np.ndarray],
    start_nodes: Optional[int] = None,
    breakpoints: Sequence[float] = (),
    config: AdaptiveConfig = AdaptiveConfig(),
) -> IntegralEstimate:
    """Double the rule until two successive estimates agree.

    `evaluate` maps a rule to a scalar or a vector of integrals. Agreement is
    measured against the largest entry, so vectors of coefficients converge
    together. Past `max_nodes` the last estimate is returned unconverged.
    """
    def estimate(m):
        value = evaluate(composite_rule(params, m, breakpoints))
        return np.atleast_1d(np.asarray(value, dtype=float))

    m = max(start_nodes or config.start_nodes, 1)
    previous = estimate(m)
    while 2 * m <= config.max_nodes:
        m *= 2
        current = estimate(m)
        scale = max(float(np.max(np.abs(current))), np.finfo(float).tiny)
        if float(np.max(np.abs(current - previous))) <= config.rel_tol * scale:
            return IntegralEstimate(value=current, nodes_used=m, converged=True)
        previous = current

    logger.warning(f"Adaptive quadrature for {params} did not converge within {m} nodes")
    return IntegralEstimate(value=previous, nodes_used=m, converged=False)
