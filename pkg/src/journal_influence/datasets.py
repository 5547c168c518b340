"""Synthetic inputs with known ground truth, for demos and tests."""

import numpy as np

from .ingest import Dataset, JournalRecord, format_table

INFORMATIVE = ("quarter", "h_index", "cites_per_doc_2y")
NOISE = ("total_docs", "total_docs_3y", "total_refs", "refs_per_doc")

TRUE_MODEL = {"intercept": 0.5, "quarter": -0.15, "h_index": 0.005, "cites_per_doc_2y": 0.3}


def synthetic_dataset(n=240, seed=7, noise_sd=0.1):
    """Indicator table whose SJR depends on three planted indicators only.

    ``quarter``, ``h_index`` and ``cites_per_doc_2y`` drive the response;
    the document and reference counts are independent noise.  The cited /
    uncited / collaboration columns are mostly missing, as in real exports.
    """
    rng = np.random.default_rng(seed)
    quarter = rng.integers(1, 5, size=n)
    h_index = rng.integers(0, 101, size=n).astype(float)
    cpd2 = np.round(rng.gamma(2.0, 0.5, size=n), 2)
    total_docs = rng.integers(5, 400, size=n).astype(float)
    total_docs_3y = rng.integers(15, 1200, size=n).astype(float)
    refs_per_doc = np.round(rng.uniform(5, 45, size=n), 2)
    total_refs = np.round(rng.uniform(100, 15000, size=n))
    sjr = (TRUE_MODEL["intercept"]
           + TRUE_MODEL["quarter"] * quarter
           + TRUE_MODEL["h_index"] * h_index
           + TRUE_MODEL["cites_per_doc_2y"] * cpd2
           + rng.normal(0.0, noise_sd, size=n))
    sjr = np.round(np.maximum(sjr, 0.001), 4)
    sparse_mask = rng.random(size=(n, 3)) < 0.85

    records = []
    for i in range(n):
        indicators = {
            "total_docs": total_docs[i],
            "total_docs_3y": total_docs_3y[i],
            "total_refs": total_refs[i],
            "h_index": h_index[i],
            "cites_per_doc_2y": cpd2[i],
            "refs_per_doc": refs_per_doc[i],
            "cited_docs": None if sparse_mask[i, 0] else float(rng.integers(0, 300)),
            "uncited_docs": None if sparse_mask[i, 1] else float(rng.integers(0, 300)),
            "intl_collab": None if sparse_mask[i, 2] else round(float(rng.uniform(0, 60)), 2),
        }
        records.append(JournalRecord(title=f"Journal {i + 1:04d}", year=2012,
                                     quarter=int(quarter[i]), indicators=indicators,
                                     sjr_score=float(sjr[i])))
    return Dataset(tuple(records), source_label=f"synthetic(seed={seed})", category="synthetic")


def synthetic_table(n=240, seed=7, decimal_comma=True):
    """:func:`synthetic_dataset` rendered as a semicolon-separated export."""
    return format_table(synthetic_dataset(n, seed), delimiter=";", decimal_comma=decimal_comma)


def bimodal_scores(n=200, centres=(0.3, 1.5), sd=0.05, seed=11):
    """Scores from two well separated normal modes.

    Returns ``(scores, mode)`` where ``mode[i]`` is 0 or 1.
    """
    rng = np.random.default_rng(seed)
    mode = np.zeros(n, dtype=int)
    mode[n // 2:] = 1
    scores = rng.normal(np.asarray(centres)[mode], sd)
    return scores, mode
