"""Downselection with Regression and Significance (DSRS).

Three stages, run in order by :func:`run_pipeline`:

1. :func:`backward_eliminate` refits the regression and drops, one at a
   time, the worst predictor that is both insignificant (large p-value)
   and weakly correlated with the response.
2. :func:`variance_attribution` eigen-decomposes the predictor correlation
   matrix and credits each principal factor's share of variance to the
   original variable that dominates it.
3. :func:`select_representatives` walks the variables in decreasing share
   and keeps those that are not strongly correlated with anything already
   kept.

The final model is an ordinary regression on the kept variables.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import numerics
from .errors import ConstantColumnError, ContractError, DsrsError, NoSignificantFeatures, PipelineError
from .regression import FitReport, fit_mlr

FACTOR_SUM_TOL = 1e-6
LOADING_TIE_TOL = 1e-9


@dataclass(frozen=True)
class Phase:
    features: tuple
    p_values: dict          # feature -> coefficient p-value
    correlations: dict      # feature -> Pearson r with the response
    r_squared: float
    f_significance: float
    removed: Optional[str] = None
    reason: str = ""


@dataclass(frozen=True)
class EliminationTrace:
    phases: tuple

    @property
    def removed(self):
        return [ph.removed for ph in self.phases if ph.removed is not None]

    @property
    def feature_counts(self):
        return [len(ph.features) for ph in self.phases]

    def as_rows(self):
        """Flat ``(phase, feature, p_value, correlation, decision)`` rows."""
        rows = []
        for i, ph in enumerate(self.phases, start=1):
            for name in ph.features:
                rows.append((i, name, ph.p_values[name], ph.correlations[name],
                             "remove" if name == ph.removed else "keep"))
        return rows


@dataclass(frozen=True)
class VarianceAttribution:
    features: tuple        # input column order
    shares: dict           # feature -> percentage of total variance
    eigenvalues: np.ndarray
    assigned: tuple        # feature credited with each component, by component
    factor_sums: np.ndarray

    @property
    def ordering(self):
        """Features by decreasing share; ties keep column order."""
        return sorted(self.features, key=lambda f: -self.shares[f])


@dataclass(frozen=True)
class DsrsConfig:
    p_threshold: float = 0.05
    corr_threshold: float = 0.4
    pairwise_threshold: float = 0.85
    max_features: Optional[int] = None


@dataclass(frozen=True)
class DsrsModel:
    selected_features: tuple
    fit: FitReport
    attribution: VarianceAttribution
    trace: EliminationTrace
    thresholds: DsrsConfig = field(default_factory=DsrsConfig)
    reduced_correlation: Optional[np.ndarray] = None


def _response_correlations(m):
    out = {}
    for j, name in enumerate(m.feature_names):
        try:
            out[name] = numerics.pearson(m.X[:, j], m.y)
        except ConstantColumnError:
            raise ConstantColumnError(name) from None
    return out


def backward_eliminate(m, p_threshold=0.05, corr_threshold=0.4):
    """Drop insignificant, weakly correlated predictors one per refit.

    A predictor qualifies for removal when its coefficient p-value exceeds
    ``p_threshold`` and its absolute correlation with the response is
    below ``corr_threshold``.  Of the qualifying predictors the one with
    the largest p-value goes.  Returns the reduced matrix and the trace.
    """
    phases = []
    current = m
    correlations = _response_correlations(m)
    while True:
        report = fit_mlr(current)
        pvals = {name: report.p_value(name) for name in current.feature_names}
        corrs = {name: correlations[name] for name in current.feature_names}
        candidates = [name for name in current.feature_names
                      if pvals[name] > p_threshold and abs(corrs[name]) < corr_threshold]
        if not candidates:
            phases.append(Phase(current.feature_names, pvals, corrs,
                                report.r_squared, report.f_significance))
            break
        worst = max(candidates, key=lambda name: pvals[name])
        reason = (f"p={pvals[worst]:.6g} > {p_threshold} and "
                  f"|r|={abs(corrs[worst]):.6g} < {corr_threshold}")
        phases.append(Phase(current.feature_names, pvals, corrs,
                            report.r_squared, report.f_significance, worst, reason))
        remaining = [name for name in current.feature_names if name != worst]
        if not remaining:
            raise NoSignificantFeatures("no significant features: elimination removed every predictor")
        current = current.subset(remaining)
    return current, EliminationTrace(tuple(phases))


def variance_attribution(m):
    """Per-variable share of total predictor variance, in percent.

    The columns are standardised and their correlation matrix decomposed.
    Principal factors are the standardised data projected on each
    eigenvector; a factor's sum of squares, relative to the total, is its
    share of variance.  Each factor's share is credited to the variable
    with the largest absolute loading in its eigenvector (ties go to the
    earlier column) and credits accumulate per variable.
    """
    names = m.feature_names
    n, p = m.X.shape
    Z = np.empty_like(m.X)
    for j in range(p):
        try:
            Z[:, j] = numerics.standardize(m.X[:, j])
        except DsrsError:
            raise ConstantColumnError(names[j]) from None
    R = numerics.correlation_matrix(m.X, names)
    eig = numerics.eigen_symmetric(R)
    V = eig.eigenvectors

    factors = Z @ V
    sums = factors.sum(axis=0)
    col_norms = np.sqrt(np.sum(factors * factors, axis=0))
    for i in range(p):
        if abs(sums[i]) > FACTOR_SUM_TOL * max(1.0, col_norms[i]):
            raise ContractError(f"principal factor {i} sums to {sums[i]:.3g}, expected zero")
    sumsq = np.sum(factors * factors, axis=0)
    total = float(sumsq.sum())

    credit = np.zeros(p)
    assigned = []
    for i in range(p):
        loadings = np.abs(V[:, i])
        winner = int(np.flatnonzero(loadings >= loadings.max() - LOADING_TIE_TOL)[0])
        credit[winner] += max(float(sumsq[i]), 0.0)
        assigned.append(names[winner])
    shares = {name: float(100.0 * credit[j] / total) for j, name in enumerate(names)}
    return VarianceAttribution(
        features=tuple(names), shares=shares, eigenvalues=eig.eigenvalues,
        assigned=tuple(assigned), factor_sums=sums,
    )


def select_representatives(attribution, corr, pairwise_threshold=0.85, max_features=None):
    """Greedy low-correlation subset, visited by decreasing variance share.

    ``corr`` is the correlation matrix indexed like ``attribution.features``.
    """
    corr = np.asarray(corr, dtype=float)
    p = len(attribution.features)
    if corr.shape != (p, p):
        raise ContractError(f"correlation matrix must be {p} x {p}, got {corr.shape}")
    if max_features is not None and max_features < 1:
        raise ContractError("max_features must be at least 1")
    index = {name: j for j, name in enumerate(attribution.features)}
    chosen = []
    for name in attribution.ordering:
        if max_features is not None and len(chosen) >= max_features:
            break
        j = index[name]
        if all(abs(corr[j, index[other]]) < pairwise_threshold for other in chosen):
            chosen.append(name)
    return chosen


def run_pipeline(m, config=None):
    """Elimination, attribution, representative selection, final fit."""
    config = config or DsrsConfig()

    def stage(name, fn, *args):
        try:
            return fn(*args)
        except DsrsError as exc:
            raise PipelineError(name, exc) from exc

    reduced, trace = stage("eliminate", backward_eliminate, m,
                           config.p_threshold, config.corr_threshold)
    attribution = stage("attribute", variance_attribution, reduced)
    corr = stage("correlate", numerics.correlation_matrix, reduced.X, reduced.feature_names)
    chosen = stage("select", select_representatives, attribution, corr,
                   config.pairwise_threshold, config.max_features)
    # keep the column order of the input matrix
    ordered = tuple(name for name in reduced.feature_names if name in chosen)
    fit = stage("fit", fit_mlr, reduced.subset(ordered))
    return DsrsModel(ordered, fit, attribution, trace, config, corr)
