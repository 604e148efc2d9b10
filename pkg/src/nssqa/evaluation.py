"""Subjective-correlation protocol.

Five-parameter logistic mapping from objective scores to predicted MOS,
Pearson and Spearman correlations, and the per-distortion improvement
classifier used to compare color variants against grayscale.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import DegenerateInput, DegenerateScores, DivisionByZero

_EXP_CAP = 700.0  # exp overflow guard; beyond this the logistic saturates


@dataclass(frozen=True)
class LogisticParams:
    beta1: float
    beta2: float
    beta3: float
    beta4: float
    beta5: float

    def as_array(self) -> np.ndarray:
        return np.array([self.beta1, self.beta2, self.beta3, self.beta4, self.beta5])


@dataclass(frozen=True)
class CorrelationReport:
    plcc: float
    srcc: float
    n: int
    fitted: LogisticParams


class ImprovementLevel(enum.Enum):
    NEGLIGIBLE = "negligible"
    MEDIUM = "medium"
    HIGH = "high"


class Direction(enum.Enum):
    COLOR_BETTER = "color_better"
    GRAY_BETTER = "gray_better"
    TIE = "tie"


@dataclass(frozen=True)
class ImprovementClass:
    per: float
    level: ImprovementLevel
    direction: Direction


def logistic(tau: float, d: float) -> float:
    """1/2 - 1/(1 + exp(tau * d)), saturating instead of overflowing."""
    t = np.clip(tau * d, -_EXP_CAP, _EXP_CAP)
    return 0.5 - 1.0 / (1.0 + np.exp(t))


def predict(params: LogisticParams, d: np.ndarray) -> np.ndarray:
    """The five-parameter mapping from objective score to predicted MOS."""
    d = np.asarray(d, dtype=np.float64)
    t = np.clip(params.beta2 * (d - params.beta3), -_EXP_CAP, _EXP_CAP)
    core = 0.5 - 1.0 / (1.0 + np.exp(t))
    return params.beta1 * core + params.beta4 * d + params.beta5


def _sse(vec: np.ndarray, d: np.ndarray, mos: np.ndarray) -> float:
    pred = predict(LogisticParams(*vec), d)
    return float(np.sum((pred - mos) ** 2))


def _initializations(d: np.ndarray, mos: np.ndarray):
    """Five deterministic starting points for the simplex search."""
    slope, intercept = np.polyfit(d, mos, 1)
    amplitude = float(mos.max() - mos.min()) or 1.0
    rate = 1.0 / (float(d.std()) or 1.0)
    lo, med, hi = float(d.min()), float(np.median(d)), float(d.max())
    for b3, sign in ((med, 1.0), (med, -1.0), (lo, 1.0), (hi, 1.0), (hi, -1.0)):
        yield np.array([amplitude, sign * rate, b3, slope, intercept])


def fit_logistic(scores, mos) -> LogisticParams:
    """Least-squares fit of the five-parameter mapping by simplex search.

    Nelder-Mead from five deterministic multi-start points; the returned
    parameters are never worse (in SSE) than the best initialization.
    """
    d = np.asarray(scores, dtype=np.float64)
    y = np.asarray(mos, dtype=np.float64)
    if d.size != y.size:
        raise ValueError("scores and mos must have equal length")
    if d.size < 10:
        raise ValueError(f"need at least 10 points, got {d.size}")
    if d.std() < 1e-12:
        raise DegenerateScores("objective scores have zero variance")

    best_vec, best_sse = None, np.inf
    for start in _initializations(d, y):
        vec, sse = start, _sse(start, d, y)
        if sse < best_sse:
            best_vec, best_sse = vec, sse
        # restarting the simplex from its own optimum escapes the
        # degenerate-simplex stalls Nelder-Mead is prone to
        for _ in range(4):
            result = minimize(
                _sse,
                vec,
                args=(d, y),
                method="Nelder-Mead",
                options={"maxiter": 5000, "fatol": 1e-12, "xatol": 1e-10},
            )
            vec = result.x
            if result.fun < best_sse:
                best_vec, best_sse = vec, result.fun
    return LogisticParams(*best_vec)


def plcc(x, y) -> float:
    """Pearson linear correlation coefficient."""
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if a.size != b.size or a.size < 3:
        raise ValueError("need equal-length vectors of size >= 3")
    ac = a - a.mean()
    bc = b - b.mean()
    denom = np.sqrt(np.sum(ac**2)) * np.sqrt(np.sum(bc**2))
    if denom == 0.0:
        raise DegenerateInput("constant input vector")
    return float(np.sum(ac * bc) / denom)


def _fractional_ranks(v: np.ndarray) -> np.ndarray:
    """Average ranks for ties (1-based)."""
    order = np.argsort(v, kind="mergesort")
    ranks = np.empty(v.size, dtype=np.float64)
    sorted_v = v[order]
    i = 0
    while i < v.size:
        j = i
        while j + 1 < v.size and sorted_v[j + 1] == sorted_v[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def srcc(x, y) -> float:
    """Spearman rank-order correlation with fractional ranks for ties.

    For tie-free data this reduces to 1 - 6*sum(rank diff^2)/(N(N^2-1)).
    """
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if a.size != b.size or a.size < 3:
        raise ValueError("need equal-length vectors of size >= 3")
    ra = _fractional_ranks(a)
    rb = _fractional_ranks(b)
    if np.all(ra == ra[0]) or np.all(rb == rb[0]):
        raise DegenerateInput("constant input vector")
    return plcc(ra, rb)


def evaluate(scores, mos) -> CorrelationReport:
    """Fit the logistic mapping and report PLCC/SRCC of predicted vs MOS."""
    params = fit_logistic(scores, mos)
    pred = predict(params, np.asarray(scores, dtype=np.float64))
    return CorrelationReport(
        plcc=plcc(mos, pred),
        srcc=srcc(mos, pred),
        n=len(mos),
        fitted=params,
    )


def improvement_class(cc_gray: float, cc_color: float) -> ImprovementClass:
    """Classify the relative change of a color correlation vs grayscale.

    per = ((cc_gray - cc_color) / cc_gray) * 100, so color beating
    grayscale yields a negative percentage.
    """
    if cc_gray == 0.0:
        raise DivisionByZero("grayscale correlation is zero")
    per = (cc_gray - cc_color) / cc_gray * 100.0
    if cc_color > cc_gray:
        direction = Direction.COLOR_BETTER
    elif cc_color < cc_gray:
        direction = Direction.GRAY_BETTER
    else:
        direction = Direction.TIE
    magnitude = abs(per)
    if magnitude < 5.0:
        level = ImprovementLevel.NEGLIGIBLE
    elif magnitude <= 10.0:
        level = ImprovementLevel.MEDIUM
    else:
        level = ImprovementLevel.HIGH
    return ImprovementClass(per=float(per), level=level, direction=direction)
