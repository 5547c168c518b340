"""Multiple linear regression with an ANOVA-style diagnostic report.

The normal equations are solved on centred, unit-length predictor columns,
which turns ``X^T X`` into a correlation-scaled matrix and keeps the
Cholesky factorisation well conditioned even when raw indicators span
several orders of magnitude (quartile 1..4 next to reference counts in the
tens of thousands).  The intercept is recovered afterwards.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import CollinearityError, ContractError, InsufficientObservations


@dataclass(frozen=True)
class FitReport:
    feature_names: tuple
    b0: float
    b: np.ndarray
    se: np.ndarray        # intercept first
    t_stats: np.ndarray   # intercept first
    p_values: np.ndarray  # intercept first
    ssy: float
    ss0: float
    sst: float
    sse: float
    ssr: float
    r_squared: float
    multiple_r: float
    adjusted_r_squared: float
    msr: float
    mse: float
    f_stat: float
    f_significance: float
    se_residual: float
    n: int
    k: int

    @property
    def coefficients(self):
        """Intercept followed by the slopes."""
        return np.concatenate(([self.b0], self.b))

    @property
    def df_regression(self):
        return self.k

    @property
    def df_residual(self):
        return self.n - self.k - 1

    def coefficient(self, name):
        return float(self.b[self.feature_names.index(name)])

    def p_value(self, name):
        return float(self.p_values[1 + self.feature_names.index(name)])

    def confidence_interval(self, level=0.95):
        """Two-sided intervals for every coefficient (intercept first)."""
        from scipy import stats

        q = stats.t.ppf(0.5 + level / 2.0, self.df_residual)
        coef = self.coefficients
        return np.column_stack((coef - q * self.se, coef + q * self.se))


def fit_arrays(X, y, feature_names=None):
    """Least-squares fit of ``y = b0 + X b``; see :func:`fit_mlr`."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
        raise ContractError("X must be n x k and y must have n entries")
    n, k = X.shape
    names = tuple(feature_names) if feature_names is not None else tuple(f"x{j + 1}" for j in range(k))
    if len(names) != k:
        raise ContractError("feature_names length does not match X")
    if k == 0:
        raise ContractError("at least one predictor is required")
    if n <= k + 1:
        raise InsufficientObservations(
            f"insufficient observations: n={n} for k={k} predictors (need n > k + 1)")

    x_mean = X.mean(axis=0)
    y_mean = float(y.mean())
    Xc = X - x_mean
    scale = np.sqrt(np.sum(Xc * Xc, axis=0))
    for j in range(k):
        # a constant column duplicates the intercept
        if not scale[j] > 1e-13 * max(1.0, float(np.max(np.abs(X[:, j])))) * math.sqrt(n):
            raise CollinearityError(j, [names[j], "intercept"])
    Z = Xc / scale
    A = Z.T @ Z
    try:
        L = numerics.cholesky(A)
    except CollinearityError as exc:
        j = exc.index
        # the earlier columns that column j leans on
        partners = [names[i] for i in range(j) if abs(A[i, j]) > 1e-8]
        raise CollinearityError(j, [names[j]] + partners) from None

    yc = y - y_mean
    z_coef = numerics.cholesky_solve(L, Z.T @ yc)
    b = z_coef / scale
    b0 = y_mean - float(x_mean @ b)

    resid = y - b0 - X @ b
    sse = float(resid @ resid)
    ssy = float(y @ y)
    ss0 = n * y_mean ** 2
    sst = float(yc @ yc)
    sse = min(sse, sst)
    ssr = sst - sse
    df_res = n - k - 1

    if sst > 0:
        r2 = min(1.0, max(0.0, ssr / sst))
    else:
        r2 = math.nan
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / df_res
    msr = ssr / k
    mse = sse / df_res
    s_e = math.sqrt(mse)

    # diagonal of (X^T X)^{-1} for the design with intercept
    A_inv = numerics.cholesky_solve(L, np.eye(k))
    u = x_mean / scale
    c_slopes = np.diag(A_inv) / scale ** 2
    c_intercept = 1.0 / n + float(u @ A_inv @ u)
    se = s_e * np.sqrt(np.concatenate(([c_intercept], c_slopes)))
    coef = np.concatenate(([b0], b))
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = coef / se
        f_stat = msr / mse if mse > 0 else (math.inf if msr > 0 else math.nan)
    p_values = np.array([numerics.t_pvalue_two_sided(t, df_res) for t in t_stats])
    f_sig = numerics.f_pvalue(f_stat, k, df_res)

    for arr in (b, se, t_stats, p_values):
        arr.setflags(write=False)
    return FitReport(
        feature_names=names, b0=b0, b=b, se=se, t_stats=t_stats, p_values=p_values,
        ssy=ssy, ss0=ss0, sst=sst, sse=sse, ssr=ssr,
        r_squared=r2, multiple_r=math.sqrt(r2), adjusted_r_squared=adj_r2,
        msr=msr, mse=mse, f_stat=f_stat, f_significance=f_sig, se_residual=s_e,
        n=n, k=k,
    )


def fit_mlr(m):
    """Fit the multiple linear regression of ``m.y`` on ``m.X`` with intercept."""
    return fit_arrays(m.X, m.y, m.feature_names)


class ExtraFeatureWarning(UserWarning):
    pass


def predict(report, features):
    """``b0 + sum(b_i * x_i)`` for a mapping of feature name to value."""
    missing = [name for name in report.feature_names if name not in features]
    if missing:
        raise ContractError(f"missing feature(s): {', '.join(missing)}")
    extra = sorted(set(features) - set(report.feature_names))
    if extra:
        warnings.warn(f"ignoring unused feature(s): {', '.join(extra)}", ExtraFeatureWarning, stacklevel=2)
    x = np.array([float(features[name]) for name in report.feature_names])
    return float(report.b0 + report.b @ x)


def predict_matrix(report, X):
    """Vectorised :func:`predict` for rows of ``X`` in ``report.feature_names`` order."""
    X = np.asarray(X, dtype=float)
    return report.b0 + X @ report.b
