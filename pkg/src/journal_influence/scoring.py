"""Journal Influence Score evaluation and agreement statistics."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .regression import predict

PUBLISHED_FEATURES = ("quarter", "h_index", "total_docs", "total_refs", "cites_per_doc_2y")


@dataclass(frozen=True)
class PublishedModel:
    """The five-indicator linear score with fixed weights."""

    intercept: float = 0.513322
    quarter: float = -0.14076
    h_index: float = 0.004716
    total_docs: float = 0.000131
    total_refs: float = -8.3e-06
    cites_per_doc_2y: float = 0.301404

    @property
    def feature_names(self):
        return PUBLISHED_FEATURES

    @property
    def weights(self):
        return tuple(getattr(self, name) for name in PUBLISHED_FEATURES)


PUBLISHED = PublishedModel()

# Same model with each weight taken as the midpoint of its reported 95%
# interval, which carries a few more digits than the rounded weights.
PUBLISHED_CI_MIDPOINT = PublishedModel(
    intercept=(0.295518325 + 0.731126) / 2,
    quarter=(-0.201667404 + -0.07986) / 2,
    h_index=(0.002258486 + 0.007174) / 2,
    total_docs=(-0.000107049 + 0.000369) / 2,
    total_refs=(-2.35727e-05 + 6.98e-06) / 2,
    cites_per_doc_2y=(0.242036313 + 0.360772) / 2,
)


def _check_indicator(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise ContractError(f"{name} must be finite, got {value!r}")
    if value < 0:
        raise ContractError(f"{name} must be non-negative, got {value!r}")
    return value


def jis_published(quarter, h_index, total_docs, total_refs, cites_per_doc_2y, model=PUBLISHED):
    """Journal Influence Score from the published fixed weights.

    >>> round(jis_published(1, 30, 23, 846, 1.68), 5)
    1.01639
    """
    if isinstance(quarter, bool) or quarter not in (1, 2, 3, 4):
        raise ContractError(f"quarter must be one of 1, 2, 3, 4; got {quarter!r}")
    h = _check_indicator("h_index", h_index)
    docs = _check_indicator("total_docs", total_docs)
    refs = _check_indicator("total_refs", total_refs)
    cpd = _check_indicator("cites_per_doc_2y", cites_per_doc_2y)
    return (model.intercept
            + model.quarter * quarter
            + model.h_index * h
            + model.total_docs * docs
            + model.total_refs * refs
            + model.cites_per_doc_2y * cpd)


def jis_fitted(model, features):
    """Score from a fitted :class:`~journal_influence.dsrs.DsrsModel` (or a bare fit report)."""
    report = getattr(model, "fit", model)
    return predict(report, features)


@dataclass(frozen=True)
class QuartileMatchReport:
    per_quartile_match: tuple   # percent, Q1 (highest scores) first
    block_sizes: tuple
    n: int


def descending_order(scores):
    """Indices sorting ``scores`` high to low; ties keep input order."""
    scores = np.asarray(scores, dtype=float)
    return np.argsort(-scores, kind="stable")


def quartile_blocks(n):
    """Sizes of four contiguous blocks covering ``n`` ranks, larger blocks first."""
    base, extra = divmod(n, 4)
    return tuple(base + (1 if i < extra else 0) for i in range(4))


def quartile_match(reference_scores, candidate_scores):
    """Per-quartile overlap between two rankings of the same journals."""
    ref = np.asarray(reference_scores, dtype=float)
    cand = np.asarray(candidate_scores, dtype=float)
    if ref.shape != cand.shape or ref.ndim != 1:
        raise ContractError(f"score vectors differ in length: {ref.shape} vs {cand.shape}")
    n = ref.size
    if n < 4:
        raise ContractError("quartile_match needs at least 4 journals")
    ref_order = descending_order(ref)
    cand_order = descending_order(cand)
    sizes = quartile_blocks(n)
    matches = []
    start = 0
    for size in sizes:
        a = set(ref_order[start:start + size].tolist())
        b = set(cand_order[start:start + size].tolist())
        matches.append(100.0 * len(a & b) / size)
        start += size
    return QuartileMatchReport(tuple(matches), sizes, n)


def rank_error_stats(reference_scores, candidate_scores, on="scores"):
    """Mean and median absolute difference between two score vectors.

    With ``on="ranks"`` the differences are taken between 1-based rank
    positions instead of the raw scores.
    """
    ref = np.asarray(reference_scores, dtype=float)
    cand = np.asarray(candidate_scores, dtype=float)
    if ref.shape != cand.shape or ref.ndim != 1:
        raise ContractError(f"score vectors differ in length: {ref.shape} vs {cand.shape}")
    if ref.size == 0:
        raise ContractError("rank_error_stats needs at least one journal")
    if on == "ranks":
        ref = _rank_positions(ref)
        cand = _rank_positions(cand)
    elif on != "scores":
        raise ContractError(f"on must be 'scores' or 'ranks', got {on!r}")
    diff = np.abs(ref - cand)
    return float(diff.mean()), float(np.median(diff))


def _rank_positions(scores):
    ranks = np.empty(scores.size)
    ranks[descending_order(scores)] = np.arange(1, scores.size + 1)
    return ranks
