"""Small dense numerical kernels used by the regression and DSRS stages.

Everything here works on ``numpy`` arrays and is deliberately written out
rather than delegated to LAPACK: the matrices involved are tiny (a dozen
predictors at most) and the error paths need to name the offending column.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import CollinearityError, ConstantColumnError, ContractError

SINGULAR_PIVOT = 1e-12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-10

_BETACF_MAX_ITER = 10000
_BETACF_EPS = 1e-16
_TINY = 1e-300


# ---------------------------------------------------------------------------
# linear systems


def cholesky(A):
    """Lower-triangular ``L`` with ``L @ L.T == A``.

    Raises :class:`CollinearityError` when a pivot drops below
    ``SINGULAR_PIVOT * max(diag(A))``; the error carries the index of the
    column that made the matrix singular.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {A.shape}")
    p = A.shape[0]
    scale = max(float(np.max(np.abs(np.diag(A)))) if p else 0.0, _TINY)
    L = np.zeros_like(A)
    for j in range(p):
        pivot = A[j, j] - L[j, :j] @ L[j, :j]
        if not pivot > SINGULAR_PIVOT * scale:
            raise CollinearityError(j)
        L[j, j] = math.sqrt(pivot)
        L[j + 1:, j] = (A[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L


def cholesky_solve(L, b):
    """Solve ``L L^T x = b`` given the factor from :func:`cholesky`.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    b = np.asarray(b, dtype=float)
    p = L.shape[0]
    z = np.array(b, dtype=float, copy=True)
    for i in range(p):
        z[i] = (z[i] - L[i, :i] @ z[:i]) / L[i, i]
    x = z
    for i in range(p - 1, -1, -1):
        x[i] = (x[i] - L[i + 1:, i] @ x[i + 1:]) / L[i, i]
    return x


def solve_spd(A, b):
    """Solve the symmetric positive definite system ``A x = b``."""
    A = np.asarray(A, dtype=float)
    if not np.allclose(A, A.T, rtol=0, atol=SYMMETRY_TOL * max(1.0, np.max(np.abs(A), initial=0.0))):
        raise ContractError("solve_spd requires a symmetric matrix")
    return cholesky_solve(cholesky(A), b)


# ---------------------------------------------------------------------------
# moments and correlation


def standardize(x):
    """Zero mean, unit sample (n - 1) standard deviation."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ContractError("standardize needs a vector with at least 2 entries")
    centred = x - x.mean()
    sd = math.sqrt(centred @ centred / (x.size - 1))
    if sd == 0.0 or sd <= 1e-14 * max(1.0, float(np.max(np.abs(x)))):
        raise ConstantColumnError()
    return centred / sd


def pearson(x1, x2):
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape != x2.shape or x1.ndim != 1:
        raise ContractError("pearson needs two vectors of equal length")
    if x1.size < 2:
        raise ContractError("pearson needs at least 2 observations")
    z1 = standardize(x1)
    z2 = standardize(x2)
    r = float(z1 @ z2) / (x1.size - 1)
    return min(1.0, max(-1.0, r))


def correlation_matrix(X, names=None):
    """Pearson correlation matrix of the columns of ``X``.

    ``names`` (optional) is only used to label a constant-column error.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ContractError("correlation_matrix needs a 2-D array")
    n, p = X.shape
    if n < 2:
        raise ContractError("correlation_matrix needs at least 2 rows")
    Z = np.empty_like(X)
    for j in range(p):
        try:
            Z[:, j] = standardize(X[:, j])
        except ConstantColumnError:
            raise ConstantColumnError(names[j] if names is not None else j) from None
    R = Z.T @ Z / (n - 1)
    R = (R + R.T) / 2.0
    np.clip(R, -1.0, 1.0, out=R)
    np.fill_diagonal(R, 1.0)
    return R


# ---------------------------------------------------------------------------
# symmetric eigenproblem


@dataclass(frozen=True)
class SymmetricEigen:
    eigenvalues: np.ndarray   # descending
    eigenvectors: np.ndarray  # column i pairs with eigenvalues[i]
    sweeps: int = 0


def eigen_symmetric(A, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigen-decomposition of a real symmetric matrix.

    Sweeps stop once the off-diagonal Frobenius norm falls below
    ``tol * max(1, ||A||_F)`` or after ``max_sweeps``. Eigenvalues come back
    in descending order; each eigenvector is signed so that its entry of
    largest magnitude is positive.
    """
    A = np.array(A, dtype=float, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {A.shape}")
    if np.any(np.abs(A - A.T) > SYMMETRY_TOL):
        raise ContractError("eigen_symmetric requires a symmetric matrix")
    p = A.shape[0]
    A = (A + A.T) / 2.0
    V = np.eye(p)
    threshold = tol * max(1.0, float(np.linalg.norm(A)))

    sweeps = 0
    while sweeps < max_sweeps:
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off < threshold:
            break
        sweeps += 1
        for i in range(p - 1):
            for j in range(i + 1, p):
                aij = A[i, j]
                diff = A[j, j] - A[i, i]
                if abs(aij) <= 1e-18 * (abs(A[i, i]) + abs(A[j, j])):
                    A[i, j] = A[j, i] = 0.0
                    continue
                if abs(aij) < 1e-150 * abs(diff):
                    t = aij / diff
                else:
                    theta = diff / (2.0 * aij)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J, with J the rotation in the (i, j) plane
                ai = A[:, i].copy()
                aj = A[:, j].copy()
                A[:, i] = c * ai - s * aj
                A[:, j] = s * ai + c * aj
                ai = A[i, :].copy()
                aj = A[j, :].copy()
                A[i, :] = c * ai - s * aj
                A[j, :] = s * ai + c * aj
                A[i, j] = A[j, i] = 0.0
                vi = V[:, i].copy()
                vj = V[:, j].copy()
                V[:, i] = c * vi - s * vj
                V[:, j] = s * vi + c * vj

    values = np.diag(A).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    V = V[:, order]
    for col in range(p):
        lead = int(np.argmax(np.abs(V[:, col])))
        if V[lead, col] < 0:
            V[:, col] = -V[:, col]
    return SymmetricEigen(eigenvalues=values, eigenvectors=V, sweeps=sweeps)


# ---------------------------------------------------------------------------
# incomplete beta and the t / F tails


def _betacf(a, b, x):
    # modified Lentz evaluation of the continued fraction for I_x(a, b)
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETACF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETACF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc(a, b, x):
    """Regularized incomplete beta function ``I_x(a, b)``."""
    if a <= 0 or b <= 0:
        raise ContractError("betainc needs a > 0 and b > 0")
    if not 0.0 <= x <= 1.0:
        raise ContractError("betainc needs 0 <= x <= 1")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (a * math.log(x) + b * math.log1p(-x)
                 + math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _betacf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _betacf(b, a, 1.0 - x) / b


def _check_df(df, name="df"):
    if isinstance(df, bool) or int(df) != df or df < 1:
        raise ContractError(f"{name} must be a positive integer, got {df!r}")
    return int(df)


def t_pvalue_two_sided(t, df):
    """Two-sided p-value of Student's t with ``df`` degrees of freedom."""
    df = _check_df(df)
    t = abs(float(t))
    if math.isnan(t):
        return math.nan
    if math.isinf(t):
        return 0.0
    x = df / (df + t * t)
    return min(1.0, betainc(df / 2.0, 0.5, x))


def f_pvalue(F, df1, df2):
    """Upper-tail probability ``P(F(df1, df2) > F)``."""
    df1 = _check_df(df1, "df1")
    df2 = _check_df(df2, "df2")
    F = float(F)
    if math.isnan(F):
        return math.nan
    if F < 0:
        raise ContractError("F statistic must be non-negative")
    if F == 0.0:
        return 1.0
    if math.isinf(F):
        return 0.0
    x = df2 / (df2 + df1 * F)
    return min(1.0, betainc(df2 / 2.0, df1 / 2.0, x))
