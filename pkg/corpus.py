"""
Test-function corpora and weight families
=========================================

Builds the corpus functions the inequality sweeps run over (polynomials,
step and kink functions, endpoint-singular powers, analytic profiles), the
Paley weights omega and the (b)-part coefficient families phi, either from
the built-in corpora or from a JSON corpus config file.
"""

import json
import logging
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial

from jacobi_core import JacobiParams, PreconditionError, orthonormal_table
from jacobi_transform import (
    CoefficientSequence,
    FunctionSpec,
    lp_norm,
    parseval_partial_norms,
)
from inequalities import DEFAULT_WEIGHT_TRUNCATION, WeightSequence

logger = logging.getLogger(__name__)

OMEGA_PATTERN = re.compile(r"^(pow|geo|table):(.+)$")


class CorpusConfigError(PreconditionError):
    """Raised for malformed corpus config files and weight specifications"""


# Built-in corpora, in the corpus config entry format
POLYS_CORPUS = [
    {"id": f"onb:{k}", "family": "orthonormal", "parameters": {"degree": k}} for k in range(6)
] + [
    {"id": "poly:one", "family": "polynomial", "parameters": {"coefficients": [1.0]}},
    {"id": "poly:t", "family": "polynomial", "parameters": {"coefficients": [0.0, 1.0]}},
    {"id": "poly:t2", "family": "polynomial", "parameters": {"coefficients": [0.0, 0.0, 1.0]}},
    {"id": "poly:t3-t", "family": "polynomial",
     "parameters": {"coefficients": [0.0, -1.0, 0.0, 1.0]}},
    {"id": "poly:quartic", "family": "polynomial",
     "parameters": {"coefficients": [1.0, 0.0, -8.0, 0.0, 8.0]}},
    {"id": "poly:sextic", "family": "polynomial", "parameters": {"coefficients": [1.0] * 7}},
]

DEFAULT_CORPUS = [
    {"id": "sign", "family": "step", "parameters": {"jump": 0.0, "low": -1.0, "high": 1.0},
     "tail_bound": 1e-2},
    {"id": "step:0.3", "family": "step", "parameters": {"jump": 0.3, "low": 0.0, "high": 1.0},
     "tail_bound": 1e-2},
    {"id": "abs", "family": "abs", "parameters": {"center": 0.0}, "tail_bound": 1e-5},
    {"id": "abs:-0.4", "family": "abs", "parameters": {"center": -0.4}, "tail_bound": 1e-5},
    {"id": "endpoint:-0.2", "family": "endpoint", "parameters": {"gamma": -0.2},
     "tail_bound": 5e-3},
    {"id": "endpoint:0.5", "family": "endpoint", "parameters": {"gamma": 0.5}, "tail_bound": 1e-5},
    {"id": "exp", "family": "exp", "parameters": {"rate": 1.0}, "tail_bound": 1e-8},
    {"id": "runge:0.2", "family": "runge", "parameters": {"width": 0.2}, "tail_bound": 1e-8},
    {"id": "cos:4", "family": "cos", "parameters": {"frequency": 4.0}, "tail_bound": 1e-8},
] + POLYS_CORPUS[6:]

BUILTIN_CORPORA = {"polys": POLYS_CORPUS, "default": DEFAULT_CORPUS}
DEFAULT_OMEGAS = ("pow:-2", "pow:-3")
DEFAULT_PHIS = ("pow:-1.5", "pow:-3", "geo:0.5")


@dataclass
class CorpusConfig:
    """Corpus entries plus the weight and coefficient families of one run"""
    entries: List[Dict]
    omegas: List[WeightSequence] = field(default_factory=list)
    phis: List[WeightSequence] = field(default_factory=list)
    source: str = "builtin"


class CorpusBuilder:
    """Turn corpus config entries into FunctionSpec items for one weight"""

    FAMILIES = ("orthonormal", "polynomial", "step", "abs", "endpoint", "exp", "runge", "cos")

    def __init__(self, params: JacobiParams):
        self.params = params

    def build(self, entries: Sequence[Dict]) -> List[FunctionSpec]:
        items = [self.build_item(entry) for entry in entries]
        ids = [item.id for item in items]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise CorpusConfigError(f"Duplicate corpus ids: {', '.join(duplicates)}")
        logger.info(f"Built corpus of {len(items)} items for {self.params}")
        return items

    def build_item(self, entry: Dict) -> FunctionSpec:
        try:
            item_id = str(entry["id"])
            family = entry["family"]
        except KeyError as e:
            raise CorpusConfigError(f"Corpus entry {entry} is missing {e}") from e
        if family not in self.FAMILIES:
            raise CorpusConfigError(f"Unknown corpus family '{family}' for {item_id}")

        parameters = dict(entry.get("parameters", {}))
        try:
            item = getattr(self, f"_{family}")(item_id, **parameters)
        except TypeError as e:
            raise CorpusConfigError(f"Bad parameters for {item_id} ({family}): {e}") from e

        valid_p = tuple(float(v) for v in entry.get("valid_p", (1.0, math.inf)))
        if len(valid_p) != 2 or valid_p[0] < 1 or valid_p[0] > valid_p[1]:
            raise CorpusConfigError(f"valid_p for {item_id} must be [lo, hi] with 1 <= lo <= hi")
        return FunctionSpec(
            id=item.id,
            evaluator=item.evaluator,
            kind=item.kind,
            degree=item.degree,
            endpoint_exponent=item.endpoint_exponent,
            smooth_part=item.smooth_part,
            breakpoints=item.breakpoints,
            valid_p=self._integrable_range(item, valid_p),
            tail_bound=entry.get("tail_bound"),
        )

    def _integrable_range(
        self, item: FunctionSpec, valid_p: Tuple[float, float]
    ) -> Tuple[float, float]:
        """Narrow valid_p so that alpha + p * gamma > -1"""
        gamma = item.endpoint_exponent
        if gamma >= 0:
            return valid_p
        p_limit = (self.params.alpha + 1) / -gamma
        if p_limit <= valid_p[0]:
            raise CorpusConfigError(f"{item.id} is not in L_{valid_p[0]:g}(w) for {self.params}")
        if p_limit <= valid_p[1]:
            logger.debug(f"{item.id}: valid p narrowed below {p_limit:g} for {self.params}")
            return valid_p[0], math.nextafter(p_limit, 0.0)
        return valid_p

    def _orthonormal(self, item_id: str, degree: int) -> FunctionSpec:
        params, degree = self.params, int(degree)
        return FunctionSpec(
            id=item_id,
            evaluator=lambda t: orthonormal_table(params, degree, t)[degree],
            kind="polynomial",
            degree=degree,
        )

    def _polynomial(self, item_id: str, coefficients: Sequence[float]) -> FunctionSpec:
        """Monomial coefficients, lowest degree first"""
        poly = Polynomial(np.asarray(coefficients, dtype=float))
        return FunctionSpec(
            id=item_id, evaluator=poly, kind="polynomial", degree=max(poly.degree(), 0)
        )

    def _step(
        self, item_id: str, jump: float = 0.0, low: float = -1.0, high: float = 1.0
    ) -> FunctionSpec:
        if not -1.0 < jump < 1.0:
            raise CorpusConfigError(f"Step {item_id} needs its jump inside (-1, 1), got {jump}")
        return FunctionSpec(
            id=item_id,
            evaluator=lambda t: np.where(np.asarray(t) < jump, low, high).astype(float),
            kind="piecewise",
            degree=0,
            breakpoints=(float(jump),),
        )

    def _abs(self, item_id: str, center: float = 0.0) -> FunctionSpec:
        if not -1.0 < center < 1.0:
            raise CorpusConfigError(f"Kink {item_id} needs its center inside (-1, 1), got {center}")
        return FunctionSpec(
            id=item_id,
            evaluator=lambda t: np.abs(np.asarray(t, dtype=float) - center),
            kind="piecewise",
            degree=1,
            breakpoints=(float(center),),
        )

    def _endpoint(self, item_id: str, gamma: float) -> FunctionSpec:
        """(1 - t)^gamma"""
        if self.params.alpha + gamma <= -1:
            raise CorpusConfigError(
                f"{item_id}: (1-t)^{gamma:g} is not integrable for {self.params}"
            )

        def evaluate(t):
            with np.errstate(divide="ignore"):
                return (1.0 - np.asarray(t, dtype=float)) ** gamma

        return FunctionSpec(
            id=item_id,
            evaluator=evaluate,
            kind="endpoint_singular",
            degree=0,
            endpoint_exponent=float(gamma),
            smooth_part=lambda t: np.ones_like(np.asarray(t, dtype=float)),
        )

    def _exp(self, item_id: str, rate: float = 1.0) -> FunctionSpec:
        return FunctionSpec(
            id=item_id, evaluator=lambda t: np.exp(rate * np.asarray(t, dtype=float))
        )

    def _runge(self, item_id: str, width: float = 0.2) -> FunctionSpec:
        """1 / (1 + (t / width)^2)"""
        if width <= 0:
            raise CorpusConfigError(f"Runge width must be positive, got {width}")
        return FunctionSpec(
            id=item_id,
            evaluator=lambda t: 1.0 / (1.0 + (np.asarray(t, dtype=float) / width) ** 2),
        )

    def _cos(self, item_id: str, frequency: float = 1.0) -> FunctionSpec:
        return FunctionSpec(
            id=item_id,
            evaluator=lambda t: np.cos(frequency * np.pi * np.asarray(t, dtype=float)),
        )


def load_weight_table(path: Union[str, Path]) -> np.ndarray:
    """Positive weights from a JSON list or a one-value-per-line text file"""
    path = Path(path)
    try:
        if path.suffix == ".json":
            values = np.asarray(json.loads(path.read_text()), dtype=float)
        else:
            values = np.loadtxt(path, ndmin=1, comments="#")
    except (OSError, ValueError) as e:
        raise CorpusConfigError(f"Cannot read weight table {path}: {e}") from e
    return values.reshape(-1)


def parse_omega(text: str, truncation: int = DEFAULT_WEIGHT_TRUNCATION) -> WeightSequence:
    """`pow:e`, `geo:r` or `table:path` to a weight sequence"""
    match = OMEGA_PATTERN.match(text.strip())
    if not match:
        raise CorpusConfigError(f"Weight '{text}' must look like pow:e, geo:r or table:path")
    kind, argument = match.groups()
    try:
        if kind == "pow":
            return WeightSequence.power(float(argument), truncation, id=text)
        if kind == "geo":
            return WeightSequence.geometric(float(argument), truncation, id=text)
    except ValueError as e:
        raise CorpusConfigError(f"Bad weight '{text}': {e}") from e
    return WeightSequence.from_table(load_weight_table(argument), id=text)


def weight_from_entry(entry: Dict, truncation: int = DEFAULT_WEIGHT_TRUNCATION) -> WeightSequence:
    """Weight family from a config entry {id, family, exponent | ratio | values | path}"""
    family = entry.get("family", "power")
    try:
        if family == "power":
            weight = WeightSequence.power(float(entry["exponent"]), truncation)
        elif family == "geometric":
            weight = WeightSequence.geometric(float(entry["ratio"]), truncation)
        elif family == "table":
            values = entry["values"] if "values" in entry else load_weight_table(entry["path"])
            weight = WeightSequence.from_table(values)
        else:
            raise CorpusConfigError(f"Unknown weight family '{family}'")
    except KeyError as e:
        raise CorpusConfigError(f"Weight entry {entry} is missing {e}") from e
    except (TypeError, ValueError) as e:
        raise CorpusConfigError(f"Bad weight entry {entry}: {e}") from e
    return replace(weight, id=str(entry["id"])) if "id" in entry else weight


def _weights(raw: Sequence[Union[str, Dict]], truncation: int) -> List[WeightSequence]:
    return [
        parse_omega(w, truncation) if isinstance(w, str) else weight_from_entry(w, truncation)
        for w in raw
    ]


def load_corpus_config(
    path: Union[str, Path], truncation: int = DEFAULT_WEIGHT_TRUNCATION
) -> CorpusConfig:
    """Read a JSON corpus config with keys corpus, omegas and phis"""
    path = Path(path)
    try:
        document = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise CorpusConfigError(f"Cannot read corpus config {path}: {e}") from e
    if not isinstance(document, dict) or "corpus" not in document:
        raise CorpusConfigError(f"Corpus config {path} needs a top-level 'corpus' list")

    unknown = set(document) - {"corpus", "omegas", "phis"}
    if unknown:
        logger.warning(f"Ignoring unknown keys in {path}: {', '.join(sorted(unknown))}")
    entries = document["corpus"]
    if not isinstance(entries, list):
        raise CorpusConfigError(f"'corpus' in {path} must be a list")
    return CorpusConfig(
        entries=entries,
        omegas=_weights(document.get("omegas", DEFAULT_OMEGAS), truncation),
        phis=_weights(document.get("phis", DEFAULT_PHIS), truncation),
        source=str(path),
    )


def resolve_corpus(name_or_path: str, truncation: int = DEFAULT_WEIGHT_TRUNCATION) -> CorpusConfig:
    """A built-in corpus by name, otherwise a corpus config file"""
    if name_or_path in BUILTIN_CORPORA:
        return CorpusConfig(
            entries=list(BUILTIN_CORPORA[name_or_path]),
            omegas=_weights(DEFAULT_OMEGAS, truncation),
            phis=_weights(DEFAULT_PHIS, truncation),
            source=name_or_path,
        )
    return load_corpus_config(name_or_path, truncation)


def parseval_gap(item: FunctionSpec, coeffs: CoefficientSequence) -> float:
    """||f||_{L_2(w)} minus the l^2 norm of the partial coefficients"""
    return lp_norm(item, 2.0, coeffs.params) - float(parseval_partial_norms(coeffs)[-1])


def find_item(items: Sequence[FunctionSpec], item_id: str) -> Optional[FunctionSpec]:
    return next((item for item in items if item.id == item_id), None)
