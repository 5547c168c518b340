"""JSON persistence for fitted and published scoring models.

The file layout is fixed (keys are written in a set order, floats with
``repr`` precision), so saving a loaded model reproduces the original
bytes exactly.
"""

import datetime as _dt
import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import ContractError
from .scoring import PUBLISHED, PUBLISHED_FEATURES

SCHEMA_VERSION = 1
KINDS = ("published", "fitted")


def _tool_version():
    from . import __version__
    return __version__


def _finite_or_none(value):
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


@dataclass(frozen=True)
class ModelFile:
    schema_version: int
    kind: str
    features: tuple
    intercept: float
    coefficients: dict
    thresholds: Optional[dict] = None
    diagnostics: Optional[dict] = None
    variance_shares: Optional[dict] = None
    elimination: Optional[dict] = None
    provenance: Optional[dict] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractError(f"model kind must be one of {KINDS}, got {self.kind!r}")
        if list(self.coefficients) != list(self.features):
            raise ContractError("coefficients must be listed in feature order")

    def predict(self, values):
        missing = [f for f in self.features if f not in values]
        if missing:
            raise ContractError(f"missing feature(s): {', '.join(missing)}")
        return self.intercept + sum(self.coefficients[f] * float(values[f]) for f in self.features)

    def predict_matrix(self, X):
        w = np.array([self.coefficients[f] for f in self.features])
        return self.intercept + np.asarray(X, dtype=float) @ w

    def to_dict(self):
        d = asdict(self)
        d["features"] = list(self.features)
        return d

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def save(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps())


def loads(text):
    raw = json.loads(text)
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise ContractError(f"unsupported model schema_version {raw.get('schema_version')!r}")
    expected = [f.name for f in ModelFile.__dataclass_fields__.values()]
    unknown = set(raw) - set(expected)
    if unknown:
        raise ContractError(f"unknown model fields: {sorted(unknown)}")
    raw["features"] = tuple(raw["features"])
    return ModelFile(**raw)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def published(model=PUBLISHED):
    return ModelFile(
        schema_version=SCHEMA_VERSION,
        kind="published",
        features=PUBLISHED_FEATURES,
        intercept=model.intercept,
        coefficients={name: getattr(model, name) for name in PUBLISHED_FEATURES},
        provenance={"tool_version": _tool_version()},
    )


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def reproducible_timestamp(path=None):
    """``SOURCE_DATE_EPOCH`` if set, else the input file's mtime, as UTC ISO-8601."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        seconds = int(epoch)
    elif path is not None:
        seconds = int(os.stat(path).st_mtime)
    else:
        seconds = 0
    return _dt.datetime.fromtimestamp(seconds, tz=_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def from_dsrs(model, input_path=None):
    """Build a fitted :class:`ModelFile` from a :class:`~journal_influence.dsrs.DsrsModel`."""
    fit = model.fit
    names = list(fit.feature_names)
    coef_labels = ["intercept"] + names
    diagnostics = {
        "n": fit.n,
        "k": fit.k,
        "r_squared": _finite_or_none(fit.r_squared),
        "adjusted_r_squared": _finite_or_none(fit.adjusted_r_squared),
        "multiple_r": _finite_or_none(fit.multiple_r),
        "f_stat": _finite_or_none(fit.f_stat),
        "f_significance": _finite_or_none(fit.f_significance),
        "se_residual": _finite_or_none(fit.se_residual),
        "sst": _finite_or_none(fit.sst),
        "ssr": _finite_or_none(fit.ssr),
        "sse": _finite_or_none(fit.sse),
        "std_errors": {k: _finite_or_none(v) for k, v in zip(coef_labels, fit.se)},
        "t_stats": {k: _finite_or_none(v) for k, v in zip(coef_labels, fit.t_stats)},
        "p_values": {k: _finite_or_none(v) for k, v in zip(coef_labels, fit.p_values)},
    }
    thresholds = {
        "p_threshold": model.thresholds.p_threshold,
        "corr_threshold": model.thresholds.corr_threshold,
        "pairwise_threshold": model.thresholds.pairwise_threshold,
        "max_features": model.thresholds.max_features,
    }
    elimination = {
        "feature_counts": model.trace.feature_counts + [len(names)],
        "removed": model.trace.removed,
        "initial_features": list(model.trace.phases[0].features),
    }
    provenance = {"tool_version": _tool_version()}
    if input_path is not None:
        provenance["input_sha256"] = file_digest(input_path)
        provenance["input_name"] = os.path.basename(str(input_path))
    provenance["timestamp"] = reproducible_timestamp(input_path)
    return ModelFile(
        schema_version=SCHEMA_VERSION,
        kind="fitted",
        features=tuple(names),
        intercept=float(fit.b0),
        coefficients={name: float(v) for name, v in zip(names, fit.b)},
        thresholds=thresholds,
        diagnostics=diagnostics,
        variance_shares={k: float(v) for k, v in model.attribution.shares.items()},
        elimination=elimination,
        provenance=provenance,
    )
