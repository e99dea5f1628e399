"""
Paley inequality failure at p = 1
=================================

Builds the polynomials g_N with coefficients omega(n) (n+1)^sigma and traces
their sup norms against the budgets S_N = sum_{n<=N} omega(n) (n+1)^(2 sigma).
When S_N diverges while M_omega stays finite, ||g_N||_inf grows without bound
and no constant can make the p = 1 Paley inequality hold. The duality
identity ||g||_inf = sup { int g f w : ||f||_L1(w) = 1 } is checked with
normalized bump functions concentrating at the endpoint.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from jacobi_core import JacobiParams, PreconditionError, endpoint_values, sigma, weight_mass
from jacobi_transform import (
    CoefficientSequence,
    FunctionSpec,
    clenshaw,
    lp_norm,
    sup_norm,
)
from quadrature import (
    QuadratureRule,
    adaptive_quadrature,
    composite_rule,
    rule_size_for_degree,
    window_rule,
)
from inequalities import DIVERGENCE_INCREMENT_RATIO, PaleyConstant, WeightSequence, compute_m_omega

logger = logging.getLogger(__name__)

DEFAULT_LADDER = tuple(2 ** k for k in range(4, 13))
DEFAULT_BUMP_WIDTHS = (1e-1, 1e-2, 1e-3)
ENDPOINT_TOLERANCE = 1e-8
TRIAL_NORM_TOLERANCE = 1e-6
BUMP_MASS_NODES = 32


class InconsistencyError(RuntimeError):
    """Raised when the grid sup of g_N exceeds its value at the dominant endpoint"""


def oriented_params(params: JacobiParams) -> JacobiParams:
    """Parameters with alpha >= beta; P_n^(a,b)(-t) = (-1)^n P_n^(b,a)(t) moves the peak to t = 1"""
    return params.swapped() if params.beta > params.alpha else params


def build_gn(omega: WeightSequence, params: JacobiParams, N: int) -> CoefficientSequence:
    """Coefficients omega(n) (n + 1)^sigma for n = 0..N"""
    if max(params.alpha, params.beta) < -0.5:
        raise PreconditionError(f"g_N needs max(alpha, beta) >= -1/2, got {params}")
    if N < 0:
        raise PreconditionError(f"Truncation degree must be non-negative, got {N}")
    n = np.arange(N + 1, dtype=float)
    values = omega.values(N, allow_underflow=True) * (n + 1.0) ** sigma(params)
    return CoefficientSequence(params=params, values=values, source=f"g_{N}[{omega.id}]")


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares growth model: log (a + b log N) or power (c N^b)"""
    model: str
    rate: float
    intercept: float
    residual: float
    residuals: Dict[str, float]

    def predict(self, Ns: Sequence[float]) -> np.ndarray:
        x = np.log(np.asarray(Ns, dtype=float))
        if self.model == "log":
            return self.intercept + self.rate * x
        return np.exp(self.intercept + self.rate * x)


def fit_growth(Ns: Sequence[float], values: Sequence[float]) -> GrowthFit:
    """Fit both growth models and keep the one with the smaller relative residual"""
    x = np.log(np.asarray(Ns, dtype=float))
    y = np.asarray(values, dtype=float)
    if x.size < 2 or np.any(y <= 0):
        raise PreconditionError("Growth fits need at least two positive values")
    scale = float(np.linalg.norm(y))

    fits = {}
    b, a = np.polyfit(x, y, 1)
    fits["log"] = (b, a, float(np.linalg.norm(y - (a + b * x))) / scale)
    b, a = np.polyfit(x, np.log(y), 1)
    fits["power"] = (b, a, float(np.linalg.norm(y - np.exp(a + b * x))) / scale)

    model = min(fits, key=lambda name: fits[name][2])
    rate, intercept, residual = fits[model]
    return GrowthFit(
        model=model, rate=float(rate), intercept=float(intercept), residual=residual,
        residuals={name: fit[2] for name, fit in fits.items()},
    )


TRACE_COLUMNS = ["N", "budget", "sup_norm", "grid_sup_norm", "ratio", "paley_ratio",
                 "growth_model", "growth_rate", "flags"]
INCONSISTENCY_FLAG = "endpoint_inconsistency"


@dataclass(frozen=True)
class DivergenceTrace:
    """sup norms of g_N against the budgets S_N along a truncation ladder"""
    params: JacobiParams
    omega: str
    Ns: np.ndarray
    sup_norms: np.ndarray
    grid_sup_norms: Optional[np.ndarray]
    budgets: np.ndarray
    ratios: np.ndarray
    m_omega: PaleyConstant
    growth: Optional[GrowthFit]
    budgets_diverging: bool
    inconsistent: Optional[np.ndarray] = None

    @property
    def is_consistent(self) -> bool:
        return self.inconsistent is None or not bool(np.any(self.inconsistent))

    @property
    def ratio_window(self) -> Tuple[float, float]:
        return float(np.min(self.ratios)), float(np.max(self.ratios))

    @property
    def window_spread(self) -> float:
        lo, hi = self.ratio_window
        return hi / lo

    @property
    def paley_ratios(self) -> np.ndarray:
        """||g_N||_inf / M_omega; any p = 1 Paley constant would bound this"""
        return self.sup_norms / self.m_omega.value

    def to_frame(self) -> pd.DataFrame:
        grid = self.grid_sup_norms
        if grid is None:
            grid = np.full(self.Ns.size, np.nan)
        frame = pd.DataFrame({
            "N": self.Ns,
            "budget": self.budgets,
            "sup_norm": self.sup_norms,
            "grid_sup_norm": grid,
            "ratio": self.ratios,
            "paley_ratio": self.paley_ratios,
        })
        frame["growth_model"] = self.growth.model if self.growth else None
        frame["growth_rate"] = self.growth.rate if self.growth else np.nan
        bad = self.inconsistent
        if bad is None:
            bad = np.zeros(self.Ns.size, dtype=bool)
        frame["flags"] = [[INCONSISTENCY_FLAG] if flag else [] for flag in bad]
        return frame[TRACE_COLUMNS]


def _budgets_diverging(budgets: np.ndarray) -> bool:
    if budgets.size < 3:
        return bool(budgets.size > 1 and budgets[-1] > budgets[0])
    increments = np.diff(budgets)
    return bool(increments[-1] >= DIVERGENCE_INCREMENT_RATIO * increments[-2])


def divergence_trace(
    omega: WeightSequence,
    params: JacobiParams,
    Ns: Sequence[int] = DEFAULT_LADDER,
    check_grid: bool = True,
    progress: bool = False,
    strict: bool = True,
) -> DivergenceTrace:
    """||g_N||_inf = g_N(1) and S_N along the ladder, grid-checked against the endpoint value.

    A grid sup above the endpoint value raises InconsistencyError, or with
    `strict=False` marks that ladder point in `inconsistent` and carries on.
    """
    Ns = np.array(sorted(set(int(n) for n in Ns)))
    if Ns.size == 0 or Ns[0] < 0:
        raise PreconditionError(f"Ladder must be a non-empty list of degrees, got {list(Ns)}")
    oriented = oriented_params(params)
    N_max = int(Ns[-1])

    gn = build_gn(omega, oriented, N_max)
    sup_all = np.cumsum(gn.values * endpoint_values(oriented, N_max))
    n = np.arange(N_max + 1, dtype=float)
    weights = omega.values(N_max, allow_underflow=True)
    budget_all = np.cumsum(weights * (n + 1.0) ** (2 * sigma(oriented)))
    sup_norms, budgets = sup_all[Ns], budget_all[Ns]

    grid_sup_norms, inconsistent = None, None
    if check_grid:
        grid_sup_norms = np.empty(Ns.size)
        inconsistent = np.zeros(Ns.size, dtype=bool)
        for i, N in enumerate(tqdm(Ns, desc="Grid sup check", disable=not progress)):
            grid_sup_norms[i] = sup_norm(gn.truncated(int(N)))
            if grid_sup_norms[i] > sup_norms[i] * (1 + ENDPOINT_TOLERANCE):
                message = (
                    f"Grid sup {grid_sup_norms[i]:.15g} of g_{N} exceeds "
                    f"endpoint value {sup_norms[i]:.15g}"
                )
                if strict:
                    raise InconsistencyError(message)
                logger.error(message)
                inconsistent[i] = True

    diverging = _budgets_diverging(budgets)
    positive = Ns > 0
    growth = None
    if np.count_nonzero(positive) >= 2:
        growth = fit_growth(Ns[positive], sup_norms[positive])
    if not diverging:
        logger.warning(
            f"Budgets for {omega.id} look bounded along the ladder; no divergence to show"
        )
    trace = DivergenceTrace(
        params=params,
        omega=omega.id,
        Ns=Ns,
        sup_norms=sup_norms,
        grid_sup_norms=grid_sup_norms,
        budgets=budgets,
        ratios=sup_norms / budgets,
        m_omega=compute_m_omega(omega, params),
        growth=growth,
        budgets_diverging=diverging,
        inconsistent=inconsistent,
    )
    lo, hi = trace.ratio_window
    logger.info(f"g_N trace for {omega.id} {params}: ratio window [{lo:.4g}, {hi:.4g}]")
    if trace.growth is not None:
        growth = trace.growth
        logger.info(f"sup ||g_N|| follows {growth.model} growth, rate {growth.rate:.4g}")
    return trace


def constant_trial(params: JacobiParams) -> FunctionSpec:
    """f = 1 / mass, of unit L_1(w) norm"""
    mass = weight_mass(params)
    return FunctionSpec(
        id="constant",
        evaluator=lambda t: np.full_like(np.asarray(t, dtype=float), 1.0 / mass),
        kind="polynomial",
        degree=0,
    )


def bump_trials(
    params: JacobiParams, widths: Sequence[float] = DEFAULT_BUMP_WIDTHS
) -> List[FunctionSpec]:
    """Indicators of [1 - delta, 1] scaled by 1 / (w-mass of the window)"""
    trials = []
    for delta in widths:
        if not 0 < delta < 2:
            raise PreconditionError(f"Bump width must lie in (0, 2), got {delta}")
        lo = 1.0 - delta
        mass = float(np.sum(window_rule(params, lo, 1.0, BUMP_MASS_NODES)[1]))
        trials.append(FunctionSpec(
            id=f"bump:{delta:g}",
            evaluator=lambda t, lo=lo, mass=mass: np.where(np.asarray(t) >= lo, 1.0 / mass, 0.0),
            kind="piecewise",
            degree=0,
            breakpoints=(lo,),
        ))
    return trials


def duality_profile(coeffs: CoefficientSequence, trials: Sequence[FunctionSpec]) -> np.ndarray:
    """int g f w for every trial f, each checked to have ||f||_L1(w) = 1"""
    params = coeffs.params
    values = np.empty(len(trials))
    for i, trial in enumerate(trials):
        norm = lp_norm(trial, 1.0, params)
        if abs(norm - 1.0) > TRIAL_NORM_TOLERANCE:
            raise PreconditionError(f"Trial {trial.id} has L_1(w) norm {norm:.8g}, expected 1")

        def evaluate(rule: QuadratureRule) -> float:
            series = clenshaw(params, coeffs.values, rule.nodes)
            integrand = series * np.asarray(trial(rule.nodes), dtype=float)
            return float(np.dot(rule.weights, integrand))

        if trial.degree is not None:
            m = rule_size_for_degree(coeffs.N + trial.degree)
            rule = composite_rule(params, m, trial.breakpoints)
            values[i] = evaluate(rule)
        else:
            values[i] = float(adaptive_quadrature(
                params, evaluate, start_nodes=rule_size_for_degree(2 * coeffs.N),
                breakpoints=trial.breakpoints,
            ))
        logger.debug(f"Duality trial {trial.id} on {coeffs.source}: {values[i]:.10g}")
    return values


def duality_check(coeffs: CoefficientSequence, trials: Sequence[FunctionSpec]) -> float:
    """Lower bound max_f int g f w on ||g||_inf"""
    if not trials:
        return -math.inf
    return float(np.max(duality_profile(coeffs, trials)))
