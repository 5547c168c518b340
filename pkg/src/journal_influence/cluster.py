"""Two-means clustering of influence scores into National / International.

Lloyd iterations on one-dimensional scores.  The loop stops when neither
cluster mean moves by more than ``sqrt(tol)`` (squared change at most
``tol``, 0.01 by default) or after ``max_iter`` passes.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DegenerateInput

NATIONAL = "National"
INTERNATIONAL = "International"

DEFAULT_TOL = 0.01
MAX_ITER = 100


@dataclass(frozen=True)
class ClusterResult:
    mean_low: float
    mean_high: float
    assignments: np.ndarray   # 0 = low mean, 1 = high mean
    iterations: int
    converged: bool
    sse_history: tuple = ()   # within-cluster SSE after each update step

    @property
    def labels(self):
        return {0: NATIONAL, 1: INTERNATIONAL}

    def label_of(self, i):
        return self.labels[int(self.assignments[i])]

    @property
    def threshold(self):
        return influence_threshold(self)


def _assign(x, u0, u1):
    # ties go to cluster 0
    return (np.abs(x - u1) < np.abs(x - u0)).astype(int)


def kmeans2(scores, init=None, tol=DEFAULT_TOL, max_iter=MAX_ITER, seed=None):
    """Cluster ``scores`` around two means.

    ``init`` gives the two starting means; by default they are the minimum
    and maximum score, or, when ``seed`` is given, two distinct scores drawn
    at random.  A cluster that empties is reseeded at the score farthest
    from the surviving mean.
    """
    x = np.asarray(scores, dtype=float).ravel()
    if x.size < 2:
        raise DegenerateInput("kmeans2 needs at least two scores")
    if not np.all(np.isfinite(x)):
        raise ContractError("scores must be finite")
    distinct = np.unique(x)
    if distinct.size < 2:
        raise DegenerateInput("all scores are identical; nothing to cluster")

    if init is not None:
        u0, u1 = (float(v) for v in init)
        if u0 == u1:
            raise ContractError("initial means must be distinct")
    elif seed is not None:
        rng = np.random.default_rng(seed)
        u0, u1 = (float(v) for v in rng.choice(distinct, size=2, replace=False))
    else:
        u0, u1 = float(x.min()), float(x.max())

    iterations = 0
    changed = True
    history = []
    while changed and iterations < max_iter:
        iterations += 1
        changed = False
        cls = _assign(x, u0, u1)
        if cls.all() or not cls.any():
            survivor = 1 if cls.all() else 0
            surviving_mean = x.mean()
            far = float(x[np.argmax(np.abs(x - surviving_mean))])
            new = [0.0, 0.0]
            new[survivor] = float(surviving_mean)
            new[1 - survivor] = far
            new0, new1 = new
            changed = True
        else:
            new0 = float(x[cls == 0].mean())
            new1 = float(x[cls == 1].mean())
            history.append(float(np.sum((x[cls == 0] - new0) ** 2) + np.sum((x[cls == 1] - new1) ** 2)))
        if (new0 - u0) ** 2 > tol or (new1 - u1) ** 2 > tol:
            changed = True
        u0, u1 = new0, new1

    low, high = (u0, u1) if u0 <= u1 else (u1, u0)
    assignments = _assign(x, low, high)
    assignments.setflags(write=False)
    return ClusterResult(low, high, assignments, iterations, not changed, tuple(history))


def classify(score, result):
    """``"International"`` if ``score`` is strictly nearer the high mean."""
    if abs(score - result.mean_high) < abs(score - result.mean_low):
        return INTERNATIONAL
    return NATIONAL


def influence_threshold(result):
    """Decision boundary between the two clusters."""
    return (result.mean_low + result.mean_high) / 2.0


def label_fractions(result):
    n = result.assignments.size
    high = int(result.assignments.sum())
    return {NATIONAL: (n - high) / n, INTERNATIONAL: high / n}
