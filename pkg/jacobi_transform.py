"""
Jacobi transforms
=================

Analysis (coefficients f^_n), synthesis (partial sums Phi_N by Clenshaw
summation) and the weighted norms used on both sides of the coefficient
inequalities.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from numpy.polynomial import Chebyshev

from jacobi_core import (
    JacobiParams,
    PreconditionError,
    as_domain_points,
    chebyshev_grid,
    log_weight_mass,
    recurrence_coefficients,
)
from quadrature import (
    AdaptiveConfig,
    QuadratureRule,
    adaptive_quadrature,
    composite_rule,
    rule_size_for_degree,
)

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], np.ndarray]
Multiplier = Union[Callable[[np.ndarray], np.ndarray], np.ndarray]

FUNCTION_KINDS = ("polynomial", "piecewise", "endpoint_singular", "analytic")

# Chebyshev fits used to locate sign changes of g
ROOT_FIT_DEGREE = 128
ROOT_TRIM_TOLERANCE = 1e-13
ROOT_IMAG_TOLERANCE = 1e-7
ROOT_MERGE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FunctionSpec:
    """A corpus function f = (1 - t)^gamma * g(t) on [-1, 1].

    `degree` is the polynomial degree of g (of every piece of g when
    `breakpoints` are given), or None when g is not a polynomial.
    """
    id: str
    evaluator: Evaluator
    kind: str = "analytic"
    degree: Optional[int] = None
    endpoint_exponent: float = 0.0
    smooth_part: Optional[Evaluator] = None
    breakpoints: Tuple[float, ...] = ()
    valid_p: Tuple[float, float] = (1.0, math.inf)
    tail_bound: Optional[float] = None

    def __post_init__(self):
        if self.kind not in FUNCTION_KINDS:
            raise PreconditionError(f"Unknown function kind '{self.kind}' for {self.id}")
        if self.endpoint_exponent != 0.0 and self.smooth_part is None:
            raise PreconditionError(f"Endpoint-singular item {self.id} needs its smooth part")

    def __call__(self, t: np.ndarray) -> np.ndarray:
        return self.evaluator(t)

    @property
    def g(self) -> Evaluator:
        return self.smooth_part if self.smooth_part is not None else self.evaluator

    def accepts(self, p: float) -> bool:
        lo, hi = self.valid_p
        return lo <= p <= hi

    def rule_params(self, params: JacobiParams, power: float = 1.0) -> JacobiParams:
        """Weight with the endpoint factor (1 - t)^(power * gamma) folded in"""
        shifted = params.alpha + power * self.endpoint_exponent
        if shifted <= -1:
            raise PreconditionError(
                f"{self.id}: (1-t)^{power * self.endpoint_exponent:g} w "
                f"is not integrable for {params}"
            )
        return JacobiParams(shifted, params.beta)


@dataclass(frozen=True, eq=False)
class CoefficientSequence:
    """Expansion coefficients c_0 .. c_N in the orthonormal basis of `params`"""
    params: JacobiParams
    values: np.ndarray
    low_confidence: bool = False
    source: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if values.size == 0:
            raise PreconditionError("A coefficient sequence needs at least one entry")
        if not np.all(np.isfinite(values)):
            raise PreconditionError(
                f"Coefficient sequence {self.source or ''} has non-finite entries"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def N(self) -> int:
        return self.values.size - 1

    def __len__(self) -> int:
        return self.values.size

    def truncated(self, N: int) -> "CoefficientSequence":
        return replace(self, values=self.values[: N + 1])

    def padded(self, N: int) -> np.ndarray:
        out = np.zeros(N + 1)
        out[: min(N, self.N) + 1] = self.values[: N + 1]
        return out

    @classmethod
    def unit(cls, params: JacobiParams, n: int, N: Optional[int] = None) -> "CoefficientSequence":
        """e_n, with trailing zeros up to N"""
        values = np.zeros((N if N is not None else n) + 1)
        values[n] = 1.0
        return cls(params=params, values=values, source=f"e_{n}")


def _project(params: JacobiParams, N: int, rule: QuadratureRule, values: np.ndarray) -> np.ndarray:
    """sum_i w_i values_i P~_n(x_i) for n = 0..N, one recurrence step at a time"""
    x = rule.nodes
    weighted = rule.weights * values
    diag, off = recurrence_coefficients(params, N + 1)
    out = np.empty(N + 1)
    p_prev = np.zeros_like(x)
    p_curr = np.full_like(x, math.exp(-0.5 * log_weight_mass(params)))
    out[0] = np.dot(weighted, p_curr)
    for k in range(N):
        s_k = off[k - 1] if k > 0 else 0.0
        p_prev, p_curr = p_curr, ((x - diag[k]) * p_curr - s_k * p_prev) / off[k]
        out[k + 1] = np.dot(weighted, p_curr)
    return out


def analyze(
    f: FunctionSpec,
    N: int,
    params: JacobiParams,
    config: AdaptiveConfig = AdaptiveConfig(),
) -> CoefficientSequence:
    """f^_n = int f P~_n w dt for n = 0..N.

    Polynomial g of known degree uses one exact rule; anything else runs the
    adaptive doubling protocol over the whole coefficient vector.
    """
    if N < 0:
        raise PreconditionError(f"Truncation degree must be non-negative, got {N}")
    rule_params = f.rule_params(params)

    def evaluate(rule: QuadratureRule) -> np.ndarray:
        return _project(params, N, rule, np.asarray(f.g(rule.nodes), dtype=float))

    if f.degree is not None:
        rule = composite_rule(rule_params, rule_size_for_degree(f.degree + N), f.breakpoints)
        return CoefficientSequence(params=params, values=evaluate(rule), source=f.id)

    estimate = adaptive_quadrature(
        rule_params,
        evaluate,
        start_nodes=max(config.start_nodes, rule_size_for_degree(2 * N)),
        breakpoints=f.breakpoints,
        config=config,
    )
    if not estimate.converged:
        logger.warning(f"Coefficients of {f.id} up to N={N} are low-confidence")
    return CoefficientSequence(
        params=params, values=estimate.value, low_confidence=not estimate.converged, source=f.id
    )


def clenshaw(params: JacobiParams, values: np.ndarray, t: np.ndarray) -> np.ndarray:
    """sum_n values_n P~_n(t) by backward Clenshaw recurrence"""
    N = values.size - 1
    diag, off = recurrence_coefficients(params, N + 3)
    b1 = np.zeros_like(t)
    b2 = np.zeros_like(t)
    for k in range(N, -1, -1):
        b1, b2 = values[k] + (t - diag[k]) / off[k] * b1 - off[k] / off[k + 1] * b2, b1
    return b1 * math.exp(-0.5 * log_weight_mass(params))


def synthesize(
    coeffs: CoefficientSequence, t: Union[float, np.ndarray]
) -> Union[float, np.ndarray]:
    """Phi_N(t) = sum_{n<=N} c_n P~_n(t)"""
    x = as_domain_points(t)
    out = clenshaw(coeffs.params, coeffs.values, np.atleast_1d(x))
    return out if x.ndim else float(out[0])


def polynomial_spec(coeffs: CoefficientSequence, item_id: Optional[str] = None) -> FunctionSpec:
    """The partial sum Phi_N as a polynomial corpus function"""
    return FunctionSpec(
        id=item_id or coeffs.source or f"Phi_{coeffs.N}",
        evaluator=lambda t: clenshaw(coeffs.params, coeffs.values, np.atleast_1d(t)),
        kind="polynomial",
        degree=coeffs.N,
    )


def sign_changes(f: FunctionSpec) -> Tuple[float, ...]:
    """Real roots of g inside the pieces of f, from a Chebyshev interpolant per piece.

    Polynomial pieces are interpolated at their own degree, anything else at
    ROOT_FIT_DEGREE. Roots at a piece edge are left out.
    """
    if f.degree == 0:
        return ()
    degree = f.degree if f.degree is not None else ROOT_FIT_DEGREE
    edges = [-1.0] + sorted(c for c in set(f.breakpoints) if -1.0 < c < 1.0) + [1.0]
    found = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        series = Chebyshev.interpolate(
            lambda t: np.asarray(f.g(t), dtype=float), degree, domain=[lo, hi]
        )
        scale = float(np.max(np.abs(series.coef)))
        if scale == 0.0:
            continue
        series = series.trim(ROOT_TRIM_TOLERANCE * scale)
        if series.degree() < 1:
            continue
        roots = series.roots()
        width = hi - lo
        real = roots[np.abs(roots.imag) <= ROOT_IMAG_TOLERANCE * width].real
        inside = (real > lo + ROOT_MERGE_TOLERANCE) & (real < hi - ROOT_MERGE_TOLERANCE)
        found.extend(float(r) for r in real[inside])

    cuts: List[float] = []
    for r in sorted(found):
        if not cuts or r - cuts[-1] > ROOT_MERGE_TOLERANCE:
            cuts.append(r)
    return tuple(cuts)


def lp_norm_estimate(
    f: FunctionSpec,
    p: float,
    params: JacobiParams,
    config: AdaptiveConfig = AdaptiveConfig(),
) -> Tuple[float, bool]:
    """(||f||_{L_p(w)}, converged)

    Unless p is an even integer, |g|^p has kinks where g changes sign; the
    adaptive rule is split there so every piece is smooth inside.
    """
    if p < 1 or math.isinf(p):
        raise PreconditionError(f"L_p norms need 1 <= p < inf, got {p}")
    rule_params = f.rule_params(params, power=p)

    def evaluate(rule: QuadratureRule) -> float:
        return float(np.dot(rule.weights, np.abs(np.asarray(f.g(rule.nodes), dtype=float)) ** p))

    if f.degree is not None and (float(p).is_integer() and int(p) % 2 == 0 or f.degree == 0):
        rule = composite_rule(rule_params, rule_size_for_degree(int(p) * f.degree), f.breakpoints)
        return evaluate(rule) ** (1.0 / p), True

    cuts = tuple(f.breakpoints) + sign_changes(f)
    start = config.start_nodes
    if f.degree is not None:
        # the node budget of one whole-interval rule, spread over the pieces
        pieces = len({c for c in cuts if -1.0 < c < 1.0}) + 1
        start = math.ceil(rule_size_for_degree(math.ceil(p) * f.degree) / pieces)
    estimate = adaptive_quadrature(
        rule_params, evaluate, start_nodes=max(start, config.start_nodes),
        breakpoints=cuts, config=config,
    )
    if not estimate.converged:
        logger.warning(f"L_{p:g} norm of {f.id} is low-confidence")
    return float(estimate) ** (1.0 / p), estimate.converged


def lp_norm(f: FunctionSpec, p: float, params: JacobiParams) -> float:
    """(int |f|^p w dt)^(1/p)"""
    return lp_norm_estimate(f, p, params)[0]


def sup_norm(coeffs: CoefficientSequence) -> float:
    """max |Phi_N| over the Chebyshev grid, endpoints included"""
    grid = chebyshev_grid(coeffs.N)
    return float(np.max(np.abs(clenshaw(coeffs.params, coeffs.values, grid))))


def weighted_coeff_norm(
    coeffs: Union[CoefficientSequence, np.ndarray], s: float, weight: Multiplier
) -> float:
    """(sum_n (weight(n) |c_n|)^s)^(1/s)"""
    if s < 1:
        raise PreconditionError(f"Coefficient norm exponent must be >= 1, got {s}")
    if isinstance(coeffs, CoefficientSequence):
        values = coeffs.values
    else:
        values = np.asarray(coeffs, dtype=float)
    n = np.arange(values.size)
    multiplier = weight(n) if callable(weight) else np.asarray(weight, dtype=float)[: values.size]
    terms = np.abs(multiplier * values)
    if not np.all(np.isfinite(terms)):
        raise PreconditionError("Coefficient multiplier is not finite at every index")
    top = float(np.max(terms)) if terms.size else 0.0
    if top == 0.0:
        return 0.0
    if math.isinf(s):
        return top
    return top * float(np.sum((terms / top) ** s)) ** (1.0 / s)


def tail_indicator(coeffs: CoefficientSequence, s: float = 2.0) -> float:
    """Share of the l^s coefficient mass carried by indices in (N/10, N]"""
    total = weighted_coeff_norm(coeffs, s, np.ones(coeffs.N + 1))
    if total == 0.0:
        return 0.0
    tail = coeffs.values[coeffs.N // 10 + 1:]
    if tail.size == 0:
        return 0.0
    return (weighted_coeff_norm(tail, s, np.ones(tail.size)) / total) ** s


def parseval_partial_norms(coeffs: CoefficientSequence) -> np.ndarray:
    """(sum_{n<=k} c_n^2)^(1/2) for k = 0..N"""
    return np.sqrt(np.cumsum(coeffs.values ** 2))
