"""
Paley, Hausdorff-Young and Hausdorff-Young-Paley coefficient inequalities
=========================================================================

Paley weight constant M_omega, the left-hand sides and normalizers of the
analysis (a) and synthesis (b) inequalities, and the sweeps that turn them
into verification reports with empirical constants.

The empirical constants are running maxima of lhs / normalizer over a
corpus. They are lower bounds on the best constants, never the sharp values.
"""

import logging
import math
from dataclasses import asdict, dataclass, replace
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from jacobi_core import JacobiParams, PreconditionError, conjugate_exponent, sigma
from jacobi_transform import (
    CoefficientSequence,
    FunctionSpec,
    analyze,
    lp_norm_estimate,
    polynomial_spec,
    weighted_coeff_norm,
)

logger = logging.getLogger(__name__)

DEFAULT_WEIGHT_TRUNCATION = 4096
TRUNCATION_TOLERANCE = 1e-3
# Increment ratio between successive doublings above which growth counts as divergence
DIVERGENCE_INCREMENT_RATIO = 0.9
EXPONENT_TOLERANCE = 1e-12
FLOAT_TINY = float(np.finfo(float).tiny)

ANALYSIS_THEOREMS = ("Paley-a", "HY-a", "HYP-a")
SYNTHESIS_THEOREMS = ("Paley-b", "HY-b", "HYP-b")
THEOREM_ORDER = {name: i for i, name in enumerate(ANALYSIS_THEOREMS + SYNTHESIS_THEOREMS)}


class NegativeCoefficientError(PreconditionError):
    """Raised when a (b)-part that needs phi >= 0 receives signed coefficients"""


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """A positive sequence on the non-negative integers (Paley weight or coefficient family)"""
    id: str
    rule: Callable[[np.ndarray], np.ndarray]
    truncation: int = DEFAULT_WEIGHT_TRUNCATION
    family: str = "power"
    exponent: Optional[float] = None
    table: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.truncation < 0:
            raise PreconditionError(
                f"Weight truncation must be non-negative, got {self.truncation}"
            )

    @classmethod
    def power(cls, exponent: float, truncation: int = DEFAULT_WEIGHT_TRUNCATION,
              id: Optional[str] = None) -> "WeightSequence":
        """omega(n) = (n + 1)^exponent"""
        return cls(
            id=id or f"pow:{exponent:g}",
            rule=lambda n: (np.asarray(n, dtype=float) + 1.0) ** exponent,
            truncation=truncation,
            family="power",
            exponent=exponent,
        )

    @classmethod
    def geometric(cls, ratio: float, truncation: int = DEFAULT_WEIGHT_TRUNCATION,
                  id: Optional[str] = None) -> "WeightSequence":
        """omega(n) = ratio^n"""
        if not 0 < ratio <= 1:
            raise PreconditionError(f"Geometric ratio must lie in (0, 1], got {ratio}")
        return cls(
            id=id or f"geo:{ratio:g}",
            rule=lambda n: ratio ** np.asarray(n, dtype=float),
            truncation=truncation,
            family="geometric",
            exponent=ratio,
        )

    @classmethod
    def from_table(cls, values: Sequence[float], id: str = "table") -> "WeightSequence":
        table = np.asarray(values, dtype=float)
        if table.size == 0 or np.any(~np.isfinite(table)) or np.any(table <= 0):
            raise PreconditionError(f"Weight table {id} must be non-empty, finite and positive")
        frozen = tuple(float(v) for v in table)
        return cls(
            id=id,
            rule=lambda n: table[np.asarray(n, dtype=int)],
            truncation=table.size - 1,
            family="table",
            table=frozen,
        )

    def values(self, n_max: int, allow_underflow: bool = False) -> np.ndarray:
        """omega(0) .. omega(n_max)

        With `allow_underflow`, entries past `positive_extent` may be zero.
        """
        if self.table is not None and n_max >= len(self.table):
            raise PreconditionError(
                f"Weight table {self.id} has {len(self.table)} entries, index {n_max} requested"
            )
        out = np.asarray(self.rule(np.arange(n_max + 1)), dtype=float)
        if allow_underflow:
            extent = self._extent(out)
            out[extent + 1:] = 0.0
            return out
        if np.any(~np.isfinite(out)) or np.any(out <= 0):
            raise PreconditionError(f"Weight {self.id} is not positive and finite on 0..{n_max}")
        return out

    def positive_extent(self, n_max: int) -> int:
        """Largest n <= n_max such that omega(0..n) are all positive normal floats"""
        if self.table is not None:
            n_max = min(n_max, len(self.table) - 1)
        return self._extent(np.asarray(self.rule(np.arange(n_max + 1)), dtype=float))

    def _extent(self, raw: np.ndarray) -> int:
        good = np.isfinite(raw) & (raw >= FLOAT_TINY)
        bad = np.flatnonzero(~good)
        if bad.size == 0:
            return raw.size - 1
        if bad[0] == 0 or np.any(~np.isfinite(raw[bad])) or np.any(raw[bad] < 0):
            raise PreconditionError(
                f"Weight {self.id} is not positive and finite on 0..{raw.size - 1}"
            )
        return int(bad[0]) - 1

    def __call__(self, n: np.ndarray) -> np.ndarray:
        return np.asarray(self.rule(np.asarray(n)), dtype=float)

    def scaled(self, c: float) -> "WeightSequence":
        if c <= 0:
            raise PreconditionError(f"Weight scale must be positive, got {c}")
        base = self.rule
        table = tuple(c * v for v in self.table) if self.table is not None else None
        return replace(self, id=f"{c:g}*{self.id}", rule=lambda n: c * base(n), table=table)


@dataclass(frozen=True)
class PaleyConstant:
    """M_omega = sup_t t * sum_{omega(n) >= t} (n + 1)^(2 sigma)"""
    value: float
    attained_at: float
    truncated: bool
    divergent: bool
    truncation: int
    truncated_value: float

    @property
    def is_finite(self) -> bool:
        return not self.divergent


def _m_omega_scan(levels: np.ndarray, growth: float) -> Tuple[float, float]:
    """Max over candidate levels t in {omega(n)} of t * sum_{omega(n) >= t} (n+1)^(2 sigma)"""
    counts = (np.arange(levels.size, dtype=float) + 1.0) ** (2.0 * growth)
    order = np.argsort(-levels, kind="stable")
    sorted_levels = levels[order]
    partial = np.cumsum(counts[order])
    # last position of each run of equal levels carries the full sum for that level
    last_of_run = np.r_[sorted_levels[1:] != sorted_levels[:-1], True]
    candidates = sorted_levels[last_of_run] * partial[last_of_run]
    best = int(np.argmax(candidates))
    return float(candidates[best]), float(sorted_levels[last_of_run][best])


def m_omega_brute_force(levels: np.ndarray, params: JacobiParams, t_grid: np.ndarray) -> float:
    """Direct evaluation of t * sum_{omega(n) >= t} (n+1)^(2 sigma) over an explicit t grid"""
    counts = (np.arange(levels.size, dtype=float) + 1.0) ** (2.0 * sigma(params))
    return float(max(t * counts[levels >= t].sum() for t in t_grid))


def compute_m_omega(omega: WeightSequence, params: JacobiParams) -> PaleyConstant:
    """Paley weight constant, with a doubling check on the truncation N_omega"""
    growth = sigma(params)

    def scan(n_max: int) -> Tuple[float, float]:
        # indices where omega underflows add t * (n+1)^(2 sigma) ~ 0 to every level t
        return _m_omega_scan(omega.values(omega.positive_extent(n_max)), growth)

    N = omega.truncation
    value, level = scan(N)
    extent = omega.positive_extent(N)
    if omega.table is not None or extent < N:
        if extent < N:
            logger.debug(f"{omega.id} underflows after n={extent}; M_omega is exact at N_omega={N}")
        return PaleyConstant(value, level, False, False, N, value)

    doubled, _ = scan(2 * N + 1)
    truncated = abs(doubled - value) > TRUNCATION_TOLERANCE * value
    divergent = False
    if truncated:
        quadrupled, _ = scan(4 * N + 3)
        divergent = (quadrupled - doubled) >= DIVERGENCE_INCREMENT_RATIO * (doubled - value)
        if divergent:
            logger.warning(f"M_omega for {omega.id} grows without bound with N_omega ({params})")
        else:
            logger.warning(f"M_omega for {omega.id} still moves at N_omega={N}; value is truncated")
    return PaleyConstant(
        value=math.inf if divergent else value,
        attained_at=level,
        truncated=truncated,
        divergent=divergent,
        truncation=N,
        truncated_value=value,
    )


@dataclass(frozen=True)
class NormSpec:
    """Weighted coefficient norm of one inequality side.

    multiplier(n) = (n + 1)^(index_power * sigma) * omega(n)^omega_power,
    summed with `sum_exponent`; the normalizer carries M_omega^m_power.
    """
    theorem: str
    index_power: float
    omega_power: float
    sum_exponent: float
    m_power: float

    @property
    def uses_omega(self) -> bool:
        return self.omega_power != 0.0 or self.m_power != 0.0

    def multiplier(self, params: JacobiParams, n_max: int,
                   omega: Optional[WeightSequence] = None) -> np.ndarray:
        n = np.arange(n_max + 1, dtype=float)
        out = (n + 1.0) ** (self.index_power * sigma(params))
        if self.omega_power != 0.0:
            if omega is None:
                raise PreconditionError(f"{self.theorem} needs a weight sequence")
            weights = omega.values(n_max, allow_underflow=self.omega_power > 0)
            out = out * weights ** self.omega_power
        return out

    def norm(self, coeffs: CoefficientSequence, omega: Optional[WeightSequence] = None) -> float:
        multiplier = self.multiplier(coeffs.params, coeffs.N, omega)
        return weighted_coeff_norm(coeffs, self.sum_exponent, multiplier)

    def m_factor(self, m_omega: Optional[PaleyConstant]) -> float:
        if self.m_power == 0.0:
            return 1.0
        if m_omega is None:
            raise PreconditionError(f"{self.theorem} needs M_omega")
        return m_omega.value ** self.m_power


def _gap(x: float) -> float:
    """1/x - 1/x'"""
    return 1.0 / x - 1.0 / conjugate_exponent(x)


def _check_analysis_exponent(p: float) -> None:
    if not 1 < p <= 2:
        raise PreconditionError(f"Analysis inequalities need 1 < p <= 2, got {p}")


def _check_synthesis_exponent(q: float) -> None:
    if not 2 <= q < math.inf:
        raise PreconditionError(f"Synthesis inequalities need 2 <= q < inf, got {q}")


def _check_between(x: float, lo: float, hi: float, name: str) -> None:
    if not lo - EXPONENT_TOLERANCE <= x <= hi + EXPONENT_TOLERANCE:
        raise PreconditionError(f"{name}={x} must lie in [{lo}, {hi}]")


def paley_analysis_spec(p: float) -> NormSpec:
    _check_analysis_exponent(p)
    e = _gap(p)
    return NormSpec("Paley-a", e, e, p, e)


def hausdorff_young_analysis_spec(p: float) -> NormSpec:
    _check_analysis_exponent(p)
    p_conj = conjugate_exponent(p)
    return NormSpec("HY-a", 1.0 / p_conj - 1.0 / p, 0.0, p_conj, 0.0)


def hyp_analysis_spec(p: float, s: float) -> NormSpec:
    _check_analysis_exponent(p)
    p_conj = conjugate_exponent(p)
    _check_between(s, p, p_conj, "s")
    e = 1.0 / s - 1.0 / p_conj
    return NormSpec("HYP-a", _gap(s), e, s, e)


def paley_synthesis_spec(q: float) -> NormSpec:
    _check_synthesis_exponent(q)
    e = _gap(q)
    return NormSpec("Paley-b", e, e, q, -e)


def hausdorff_young_synthesis_spec(q: float) -> NormSpec:
    _check_synthesis_exponent(q)
    q_conj = conjugate_exponent(q)
    return NormSpec("HY-b", 1.0 / q_conj - 1.0 / q, 0.0, q_conj, 0.0)


def hyp_synthesis_spec(q: float, r: float) -> NormSpec:
    _check_synthesis_exponent(q)
    q_conj = conjugate_exponent(q)
    _check_between(r, q_conj, q, "r")
    return NormSpec("HYP-b", -_gap(r), 1.0 / q - 1.0 / r, conjugate_exponent(r), 1.0 / r - 1.0 / q)


def paley_lhs(coeffs: CoefficientSequence, p: float, omega: WeightSequence) -> float:
    """{sum ((n+1)^((1/p-1/p') sigma) omega(n)^(1/p-1/p') |c_n|)^p}^(1/p)"""
    return paley_analysis_spec(p).norm(coeffs, omega)


def hausdorff_young_lhs(coeffs: CoefficientSequence, p: float) -> float:
    """{sum ((n+1)^((1/p'-1/p) sigma) |c_n|)^p'}^(1/p')"""
    return hausdorff_young_analysis_spec(p).norm(coeffs)


def hyp_lhs(coeffs: CoefficientSequence, p: float, s: float, omega: WeightSequence) -> float:
    """{sum ((n+1)^((2/s-1) sigma) omega(n)^(1/s-1/p') |c_n|)^s}^(1/s), p <= s <= p'"""
    return hyp_analysis_spec(p, s).norm(coeffs, omega)


@dataclass(frozen=True)
class InequalityReport:
    """One verification record: lhs / normalizer for a single item and exponent choice"""
    theorem: str
    p: Optional[float]
    s: Optional[float]
    q: Optional[float]
    r: Optional[float]
    alpha: float
    beta: float
    omega: Optional[str]
    item: str
    lhs: float
    normalizer: float
    ratio: float
    truncation: int
    m_omega: Optional[float]
    flags: Tuple[str, ...] = ()

    def to_record(self) -> Dict:
        record = asdict(self)
        record["flags"] = list(self.flags)
        return record

    def sort_key(self) -> Tuple:
        def key(x: Optional[float]) -> float:
            return -1.0 if x is None else x

        return (THEOREM_ORDER.get(self.theorem, 99), key(self.p), key(self.s), key(self.q),
                key(self.r), self.item, self.omega or "")


def _ratio(lhs: float, normalizer: float) -> float:
    if normalizer > 0:
        return lhs / normalizer
    return 0.0 if lhs == 0 else math.inf


def _m_flags(m_omega: Optional[PaleyConstant]) -> List[str]:
    flags = []
    if m_omega is not None and m_omega.divergent:
        flags.append("m_omega_divergent")
    elif m_omega is not None and m_omega.truncated:
        flags.append("m_omega_truncated")
    return flags


def analysis_report(
    spec: NormSpec,
    item_id: str,
    coeffs: CoefficientSequence,
    f_norm: float,
    p: float,
    s: Optional[float] = None,
    omega: Optional[WeightSequence] = None,
    m_omega: Optional[PaleyConstant] = None,
    norm_converged: bool = True,
) -> InequalityReport:
    """(a)-part record: weighted coefficient norm against M_omega^power * ||f||_p"""
    lhs = spec.norm(coeffs, omega)
    normalizer = spec.m_factor(m_omega) * f_norm
    flags = _m_flags(m_omega) if spec.uses_omega else []
    if coeffs.low_confidence:
        flags.append("low_confidence_coefficients")
    if not norm_converged:
        flags.append("low_confidence_norm")
    return InequalityReport(
        theorem=spec.theorem, p=p, s=s, q=None, r=None,
        alpha=coeffs.params.alpha, beta=coeffs.params.beta,
        omega=omega.id if omega is not None else None,
        item=item_id, lhs=lhs, normalizer=normalizer, ratio=_ratio(lhs, normalizer),
        truncation=coeffs.N,
        m_omega=m_omega.value if m_omega is not None else None,
        flags=tuple(flags),
    )


def default_ladder(N: int) -> List[int]:
    """Truncations N/8, N/4, N/2, N"""
    return sorted({N // 8, N // 4, N // 2, N})


def _synthesis_report(
    spec: NormSpec,
    phi: CoefficientSequence,
    q: float,
    r: Optional[float],
    omega: Optional[WeightSequence],
    m_omega: Optional[PaleyConstant],
    ladder: Optional[Sequence[int]],
    permissive: bool,
    requires_non_negative: bool,
) -> InequalityReport:
    """Ladder protocol shared by the (b)-parts"""
    flags = _m_flags(m_omega) if spec.uses_omega else []
    if requires_non_negative and np.any(phi.values < 0):
        if not permissive:
            raise NegativeCoefficientError(f"{spec.theorem} needs non-negative phi ({phi.source})")
        flags.append("outside_theorem_scope")
        logger.warning(f"{spec.theorem} report for signed {phi.source} is outside theorem scope")

    params = phi.params
    steps = sorted({n for n in ladder if 0 <= n <= phi.N}) if ladder else default_ladder(phi.N)
    if not steps:
        steps = [phi.N]
    if steps[-1] != phi.N:
        steps.append(phi.N)

    norms, converged = [], True
    for N in steps:
        value, ok = lp_norm_estimate(polynomial_spec(phi.truncated(N)), q, params)
        norms.append(value)
        converged &= ok

    distances = []
    for lo, hi in zip(steps[:-1], steps[1:]):
        block = phi.padded(hi)
        block[: lo + 1] = 0.0
        value, ok = lp_norm_estimate(polynomial_spec(CoefficientSequence(params, block)), q, params)
        distances.append(value)
        converged &= ok
    if any(b > a * (1 + 1e-9) + 1e-14 for a, b in zip(distances[:-1], distances[1:])):
        flags.append("non_convergent_ladder")
        logger.warning(f"L_{q:g} ladder for {phi.source} is not decreasing: {distances}")

    reanalysis = analyze(polynomial_spec(phi), phi.N, params)
    scale = max(1.0, float(np.max(np.abs(phi.values))))
    if float(np.max(np.abs(reanalysis.values - phi.values))) > 1e-8 * scale:
        flags.append("reanalysis_mismatch")
    if not converged:
        flags.append("low_confidence_norm")

    lhs = norms[-1]
    normalizer = spec.m_factor(m_omega) * spec.norm(phi, omega)
    logger.debug(f"{spec.theorem} {phi.source}: ladder {steps} norms {norms}")
    return InequalityReport(
        theorem=spec.theorem, p=None, s=None, q=q, r=r,
        alpha=params.alpha, beta=params.beta,
        omega=omega.id if omega is not None else None,
        item=phi.source, lhs=lhs, normalizer=normalizer, ratio=_ratio(lhs, normalizer),
        truncation=phi.N,
        m_omega=m_omega.value if m_omega is not None else None,
        flags=tuple(flags),
    )


def paley_synthesis_bound(
    phi: CoefficientSequence,
    q: float,
    omega: WeightSequence,
    m_omega: Optional[PaleyConstant] = None,
    ladder: Optional[Sequence[int]] = None,
    permissive: bool = False,
) -> InequalityReport:
    """||Phi_N||_q against M_omega^(1/q'-1/q) times the weighted q-sum of phi"""
    m_omega = m_omega or compute_m_omega(omega, phi.params)
    return _synthesis_report(paley_synthesis_spec(q), phi, q, None, omega, m_omega, ladder,
                             permissive, requires_non_negative=True)


def hausdorff_young_synthesis_bound(
    phi: CoefficientSequence,
    q: float,
    ladder: Optional[Sequence[int]] = None,
) -> InequalityReport:
    """||Phi_N||_q against the power-weighted q'-sum of phi (signed phi allowed)"""
    return _synthesis_report(hausdorff_young_synthesis_spec(q), phi, q, None, None, None, ladder,
                             permissive=True, requires_non_negative=False)


def hyp_synthesis_bound(
    phi: CoefficientSequence,
    q: float,
    r: float,
    omega: WeightSequence,
    m_omega: Optional[PaleyConstant] = None,
    ladder: Optional[Sequence[int]] = None,
    permissive: bool = False,
) -> InequalityReport:
    """||Phi_N||_q against M_omega^(1/r-1/q) times the weighted r'-sum of phi, q' <= r <= q"""
    spec = hyp_synthesis_spec(q, r)
    m_omega = m_omega or compute_m_omega(omega, phi.params)
    return _synthesis_report(spec, phi, q, r, omega, m_omega, ladder, permissive,
                             requires_non_negative=True)


def interpolation_grid(lo: float, hi: float, points: int) -> List[float]:
    """`points` evenly spaced exponents on [lo, hi], endpoints exact, duplicates removed"""
    if points <= 1 or math.isclose(lo, hi):
        return [lo]
    return sorted(set(float(x) for x in np.linspace(lo, hi, points)))


@dataclass
class SweepConfig:
    """Exponent grid and truncation of a verification sweep"""
    p_grid: Tuple[float, ...] = (1.25, 1.5, 1.75, 2.0)
    s_points: int = 5
    q_grid: Tuple[float, ...] = (2.0, 7.0 / 3.0, 3.0, 5.0)
    r_points: int = 5
    s_values: Optional[Tuple[float, ...]] = None
    r_values: Optional[Tuple[float, ...]] = None
    theorems: Tuple[str, ...] = ANALYSIS_THEOREMS
    max_degree: int = 200
    permissive: bool = False
    progress: bool = True

    def s_grid(self, p: float) -> List[float]:
        p_conj = conjugate_exponent(p)
        if self.s_values:
            lo, hi = p - EXPONENT_TOLERANCE, p_conj + EXPONENT_TOLERANCE
            return [s for s in self.s_values if lo <= s <= hi]
        return interpolation_grid(p, p_conj, self.s_points)

    def r_grid(self, q: float) -> List[float]:
        q_conj = conjugate_exponent(q)
        if self.r_values:
            lo, hi = q_conj - EXPONENT_TOLERANCE, q + EXPONENT_TOLERANCE
            return [r for r in self.r_values if lo <= r <= hi]
        return interpolation_grid(q_conj, q, self.r_points)


def _check_corpus(corpus: Sequence[FunctionSpec], p_grid: Iterable[float]) -> None:
    invalid = [f"{f.id}@p={p:g}" for f in corpus for p in p_grid if not f.accepts(p)]
    if invalid:
        raise PreconditionError(f"Corpus items outside their valid p range: {', '.join(invalid)}")


def verify_sweep(
    corpus: Sequence[FunctionSpec],
    params: JacobiParams,
    omegas: Sequence[WeightSequence],
    config: SweepConfig = SweepConfig(),
) -> List[InequalityReport]:
    """(a)-part reports for every (item, theorem, p, s, omega) combination"""
    _check_corpus(corpus, config.p_grid)
    for p in config.p_grid:
        _check_analysis_exponent(p)
    m_values = {omega.id: compute_m_omega(omega, params) for omega in omegas}

    reports: List[InequalityReport] = []
    for f in tqdm(corpus, desc="Verifying corpus", disable=not config.progress):
        coeffs = analyze(f, config.max_degree, params)
        for p in config.p_grid:
            f_norm, converged = lp_norm_estimate(f, p, params)
            common = dict(item_id=f.id, coeffs=coeffs, f_norm=f_norm, p=p, norm_converged=converged)
            if "HY-a" in config.theorems:
                reports.append(analysis_report(hausdorff_young_analysis_spec(p), **common))
            for omega in omegas:
                m_omega = m_values[omega.id]
                if "Paley-a" in config.theorems:
                    reports.append(analysis_report(paley_analysis_spec(p), omega=omega,
                                                   m_omega=m_omega, **common))
                if "HYP-a" in config.theorems:
                    for s in config.s_grid(p):
                        reports.append(analysis_report(hyp_analysis_spec(p, s), s=s, omega=omega,
                                                       m_omega=m_omega, **common))
        logger.debug(f"Verified {f.id} (N={coeffs.N})")
    reports.sort(key=InequalityReport.sort_key)
    logger.info(f"Sweep produced {len(reports)} reports over {len(corpus)} items")
    return reports


def verify_synthesis_sweep(
    phis: Sequence[WeightSequence],
    params: JacobiParams,
    omegas: Sequence[WeightSequence],
    config: SweepConfig = SweepConfig(theorems=SYNTHESIS_THEOREMS),
    ladder: Optional[Sequence[int]] = None,
) -> List[InequalityReport]:
    """(b)-part ladder reports for every (phi family, theorem, q, r, omega) combination"""
    for q in config.q_grid:
        _check_synthesis_exponent(q)
    m_values = {omega.id: compute_m_omega(omega, params) for omega in omegas}

    reports: List[InequalityReport] = []
    for family in tqdm(phis, desc="Verifying coefficient families", disable=not config.progress):
        phi = CoefficientSequence(
            params=params, values=family.values(config.max_degree), source=family.id
        )
        for q in config.q_grid:
            if "HY-b" in config.theorems:
                reports.append(hausdorff_young_synthesis_bound(phi, q, ladder=ladder))
            for omega in omegas:
                m_omega = m_values[omega.id]
                if "Paley-b" in config.theorems:
                    reports.append(paley_synthesis_bound(phi, q, omega, m_omega, ladder=ladder,
                                                         permissive=config.permissive))
                if "HYP-b" in config.theorems:
                    for r in config.r_grid(q):
                        reports.append(hyp_synthesis_bound(phi, q, r, omega, m_omega, ladder=ladder,
                                                           permissive=config.permissive))
    reports.sort(key=InequalityReport.sort_key)
    logger.info(f"Synthesis sweep produced {len(reports)} reports over {len(phis)} families")
    return reports


def running_max_ratio(reports: Sequence[InequalityReport]) -> np.ndarray:
    """Running maximum of the ratios in report order"""
    ratios = np.array([r.ratio for r in reports], dtype=float)
    return np.maximum.accumulate(ratios) if ratios.size else ratios


SUMMARY_COLUMNS = [
    "theorem", "p", "s", "q", "r", "omega", "max_ratio", "argmax_item", "items", "flags",
]


def summarize_reports(reports: Sequence[InequalityReport]) -> pd.DataFrame:
    """Empirical constant per (theorem, exponents, omega): max ratio and its arg-max item"""
    groups: Dict[Tuple, List[InequalityReport]] = {}
    for report in sorted(reports, key=InequalityReport.sort_key):
        key = (report.theorem, report.p, report.s, report.q, report.r, report.omega)
        groups.setdefault(key, []).append(report)

    rows = []
    for key, members in groups.items():
        best = max(members, key=lambda r: r.ratio)
        flags = sorted({flag for r in members for flag in r.flags})
        rows.append(list(key) + [best.ratio, best.item, len(members), ";".join(flags)])
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
