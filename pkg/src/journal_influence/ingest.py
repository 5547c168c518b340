"""Reading SCImago-style indicator tables.

SCImago exports are semicolon separated with European decimal commas
(``0,60``) and use dashes for values that are not available.  Parsing
produces a :class:`Dataset` of :class:`JournalRecord` rows that keep
missingness explicit (``None``), and :func:`build_matrix` turns a dataset
into a dense complete-case :class:`FeatureMatrix` for regression.
"""

import csv
import io
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import ContractError, InsufficientObservations, ParseError

# Canonical indicator names, in the order SCImago reports them.
INDICATORS = (
    "total_docs",
    "total_docs_3y",
    "total_refs",
    "total_cites_3y",
    "h_index",
    "citable_docs_3y",
    "cites_per_doc_4y",
    "cites_per_doc_3y",
    "cites_per_doc_2y",
    "refs_per_doc",
    "cited_docs",
    "uncited_docs",
    "intl_collab",
)

# Non-negative count indicators.
COUNT_INDICATORS = frozenset({
    "total_docs", "total_docs_3y", "total_refs", "total_cites_3y",
    "h_index", "citable_docs_3y", "cited_docs", "uncited_docs",
})

QUARTER = "quarter"
RESPONSE = "sjr"

# Quarter followed by every indicator: the order feature lists are kept in.
CANONICAL_FEATURES = (QUARTER,) + INDICATORS

# Candidates for the two-year model: the 4- and 3-year cites/doc ratios are
# left out so only two years of history are needed.
TWO_YEAR_CANDIDATES = tuple(
    f for f in CANONICAL_FEATURES if f not in ("cites_per_doc_4y", "cites_per_doc_3y")
)

LABELS = {
    "quarter": "Quarter",
    "total_docs": "Total Docs. (current year)",
    "total_docs_3y": "Total Docs. (3years)",
    "total_refs": "Total Refs.",
    "total_cites_3y": "Total Cites (3years)",
    "h_index": "H index",
    "citable_docs_3y": "Citable Docs. (3years)",
    "cites_per_doc_4y": "Cites / Doc. (4years)",
    "cites_per_doc_3y": "Cites / Doc. (3years)",
    "cites_per_doc_2y": "Cites / Doc. (2years)",
    "refs_per_doc": "Ref. / Doc.",
    "cited_docs": "Cited Docs.",
    "uncited_docs": "Uncited Docs.",
    "intl_collab": "% International Collaboration",
    "sjr": "SJR",
}

MISSING_MARKERS = frozenset({"", "-", "--", "---"})


def _key(label):
    return re.sub(r"[^a-z0-9%]", "", label.lower())


# Header aliases, compared after lower-casing and stripping punctuation.
_ALIASES = {
    "title": "title",
    "journal": "title",
    "sourcetitle": "title",
    "year": "year",
    "quarter": "quarter",
    "quartile": "quartile",
    "sjrquartile": "quartile",
    "sjrbestquartile": "quartile",
    "bestquartile": "quartile",
    "sjr": "sjr",
    "sjrscore": "sjr",
    "totaldocuments": "total_docs",
    "totaldocs": "total_docs",
    "totaldocs3years": "total_docs_3y",
    "totaldocs3y": "total_docs_3y",
    "totalreferences": "total_refs",
    "totalrefs": "total_refs",
    "totalcites3years": "total_cites_3y",
    "totalcites3y": "total_cites_3y",
    "hindex": "h_index",
    "citabledocs3years": "citable_docs_3y",
    "citabledocs3y": "citable_docs_3y",
    "citesdoc4years": "cites_per_doc_4y",
    "citesdoc4y": "cites_per_doc_4y",
    "citesdoc3years": "cites_per_doc_3y",
    "citesdoc3y": "cites_per_doc_3y",
    "citesdoc2years": "cites_per_doc_2y",
    "citesdoc2y": "cites_per_doc_2y",
    "referencesdoc": "refs_per_doc",
    "refdoc": "refs_per_doc",
    "refsdoc": "refs_per_doc",
    "citeddocs": "cited_docs",
    "unciteddocs": "uncited_docs",
    "%internationalcollaboration": "intl_collab",
    "internationalcollaboration": "intl_collab",
}
_ALIASES.update({_key(name): name for name in CANONICAL_FEATURES})
_ALIASES.update({_key(label): name for name, label in LABELS.items()})

# "Total Docs. (2012)" and friends carry the export year in the header.
_YEARED_TOTAL_DOCS = re.compile(r"^totaldocs\d{4}$")

MANDATORY_COLUMNS = ("title",)


def canonical_column(label, extra_aliases=None):
    """Canonical field name for a header label, or ``None`` if unknown."""
    if extra_aliases and label in extra_aliases:
        return extra_aliases[label]
    key = _key(label)
    if extra_aliases:
        for alias, name in extra_aliases.items():
            if _key(alias) == key:
                return name
    if key in _ALIASES:
        return _ALIASES[key]
    if _YEARED_TOTAL_DOCS.match(key):
        return "total_docs"
    return None


@dataclass(frozen=True)
class JournalRecord:
    title: str
    year: Optional[int] = None
    quarter: Optional[int] = None
    indicators: Mapping[str, Optional[float]] = field(default_factory=dict)
    sjr_score: Optional[float] = None

    def __post_init__(self):
        if self.quarter is not None and self.quarter not in (1, 2, 3, 4):
            raise ContractError(f"quarter must be in 1..4, got {self.quarter!r}")
        full = {name: None for name in INDICATORS}
        for name, value in dict(self.indicators).items():
            if name not in full:
                raise ContractError(f"unknown indicator {name!r}")
            if value is not None:
                value = float(value)
                if not math.isfinite(value):
                    raise ContractError(f"{name} must be finite, got {value!r}")
                if name in COUNT_INDICATORS and value < 0:
                    raise ContractError(f"{name} must be non-negative, got {value!r}")
            full[name] = value
        object.__setattr__(self, "indicators", full)

    def value(self, name):
        """Value of a feature or the response by canonical name (``None`` if missing)."""
        if name == QUARTER:
            return None if self.quarter is None else float(self.quarter)
        if name == RESPONSE:
            return self.sjr_score
        try:
            return self.indicators[name]
        except KeyError:
            raise ContractError(f"unknown feature {name!r}") from None


@dataclass(frozen=True)
class Dataset:
    records: tuple
    source_label: str = ""
    category: str = ""

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


@dataclass(frozen=True)
class ParseOptions:
    delimiter: Optional[str] = None         # None: auto-detect ";" or ","
    quarter_column: Optional[str] = None    # header label overriding the quarter source
    aliases: Mapping[str, str] = field(default_factory=dict)
    source_label: str = ""
    category: str = ""
    encoding: str = "utf-8"


def parse_number(text):
    """Parse one numeric cell. Returns ``None`` for a missing marker.

    A single comma with no period is read as a decimal comma.
    Raises ``ValueError`` for anything else that is not a finite number.
    """
    text = text.strip()
    if text in MISSING_MARKERS:
        return None
    if text.count(",") == 1 and "." not in text:
        text = text.replace(",", ".")
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {text!r}")
    return value


def _split_outside_quotes(line, char):
    count = 0
    quoted = False
    for ch in line:
        if ch == '"':
            quoted = not quoted
        elif ch == char and not quoted:
            count += 1
    return count


def detect_delimiter(header_line):
    """Semicolon if the header has any unquoted semicolon, otherwise comma."""
    return ";" if _split_outside_quotes(header_line, ";") > 0 else ","


def _parse_quartile(text):
    t = text.strip().upper()
    if t in MISSING_MARKERS:
        return None
    if t.startswith("Q"):
        t = t[1:]
    q = int(float(t.replace(",", ".")))
    if q not in (1, 2, 3, 4) or float(t.replace(",", ".")) != q:
        raise ValueError(text)
    return q


def parse_table(raw, options=None):
    """Parse a delimited indicator table into a :class:`Dataset`.

    ``raw`` may be ``bytes`` or ``str``.  Columns that are not recognised
    are ignored; a header lacking a title column is rejected.
    """
    options = options or ParseOptions()
    text = raw.decode(options.encoding) if isinstance(raw, (bytes, bytearray)) else raw
    text = text.lstrip("﻿")
    if not text.strip():
        return Dataset((), options.source_label, options.category)

    header_line = text.splitlines()[0]
    delimiter = options.delimiter or detect_delimiter(header_line)
    rows = csv.reader(io.StringIO(text, newline=""), delimiter=delimiter)
    header = next(rows)

    columns = {}
    for idx, label in enumerate(header):
        if options.quarter_column is not None and label.strip() == options.quarter_column:
            name = "quarter"
        else:
            name = canonical_column(label.strip(), options.aliases)
        if name is None:
            continue
        if name in columns:
            raise ParseError(f"duplicate column for {name!r}", row=1, column=label)
        columns[name] = idx
    for name in MANDATORY_COLUMNS:
        if name not in columns:
            raise ParseError(f"missing mandatory column {name!r}; header was {header!r}", row=1)

    records = []
    for rownum, row in enumerate(rows, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < len(header):
            row = row + [""] * (len(header) - len(row))

        def cell(name):
            return row[columns[name]] if name in columns else ""

        title = cell("title").strip()

        year = None
        if "year" in columns and cell("year").strip() not in MISSING_MARKERS:
            try:
                year = int(cell("year").strip())
            except ValueError:
                raise ParseError(f"non-integer year {cell('year')!r}", rownum, header[columns["year"]]) from None

        quarter = None
        source = "quarter" if "quarter" in columns else ("quartile" if "quartile" in columns else None)
        if source is not None:
            try:
                quarter = _parse_quartile(cell(source))
            except ValueError:
                raise ParseError(f"quarter must be 1..4 or Q1..Q4, got {cell(source)!r}",
                                 rownum, header[columns[source]]) from None

        values = {}
        for name in INDICATORS + (RESPONSE,):
            if name not in columns:
                continue
            raw_cell = cell(name)
            try:
                values[name] = parse_number(raw_cell)
            except ValueError:
                raise ParseError(f"non-numeric value {raw_cell!r}", rownum, header[columns[name]]) from None
            if name in COUNT_INDICATORS and values[name] is not None and values[name] < 0:
                raise ParseError(f"negative count {raw_cell!r}", rownum, header[columns[name]])

        sjr = values.pop(RESPONSE, None)
        records.append(JournalRecord(title=title, year=year, quarter=quarter,
                                     indicators=values, sjr_score=sjr))
    return Dataset(tuple(records), options.source_label, options.category)


def read_table(path, options=None):
    with open(path, "rb") as fh:
        return parse_table(fh.read(), options)


def _format_number(value, decimal_comma):
    if value is None:
        return ""
    if float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    text = repr(float(value))
    return text.replace(".", ",") if decimal_comma else text


def format_table(dataset, delimiter=";", decimal_comma=False):
    """Serialize a dataset back to delimited text readable by :func:`parse_table`."""
    out = io.StringIO()
    writer = csv.writer(out, delimiter=delimiter, lineterminator="\n")
    writer.writerow(["Title", "Year", "Quarter"] + [LABELS[n] for n in INDICATORS] + [LABELS[RESPONSE]])
    for rec in dataset.records:
        writer.writerow(
            [rec.title,
             "" if rec.year is None else str(rec.year),
             "" if rec.quarter is None else str(rec.quarter)]
            + [_format_number(rec.indicators[n], decimal_comma) for n in INDICATORS]
            + [_format_number(rec.sjr_score, decimal_comma)]
        )
    return out.getvalue()


def quarter_probabilities(dataset):
    """Share of records falling in each quarter, ``{1: p1, ..., 4: p4}``."""
    counts = Counter()
    for i, rec in enumerate(dataset.records):
        if rec.quarter is None:
            raise ContractError(f"record {i} ({rec.title!r}) has no quarter")
        counts[rec.quarter] += 1
    total = sum(counts.values())
    if total == 0:
        raise ContractError("quarter_probabilities needs at least one record")
    return {q: counts[q] / total for q in (1, 2, 3, 4)}


def missing_fractions(dataset, candidates=CANONICAL_FEATURES):
    n = len(dataset.records)
    if n == 0:
        raise ContractError("dataset is empty")
    return {
        name: sum(rec.value(name) is None for rec in dataset.records) / n
        for name in candidates
    }


def sparsity_filter(dataset, max_missing_fraction=0.20, candidates=CANONICAL_FEATURES):
    """Features whose missing fraction is at most ``max_missing_fraction``.

    The result keeps the canonical feature order regardless of the order of
    ``candidates``.
    """
    if not 0.0 <= max_missing_fraction <= 1.0:
        raise ContractError("max_missing_fraction must lie in [0, 1]")
    fractions = missing_fractions(dataset, candidates)
    return [name for name in CANONICAL_FEATURES
            if name in fractions and fractions[name] <= max_missing_fraction]


@dataclass(frozen=True)
class FeatureMatrix:
    feature_names: tuple
    X: np.ndarray
    y: np.ndarray
    row_ids: tuple
    dropped_rows: int = 0

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "row_ids", tuple(self.row_ids))
        if X.ndim != 2 or y.ndim != 1:
            raise ContractError("X must be 2-D and y 1-D")
        n, p = X.shape
        if p != len(self.feature_names) or y.size != n or len(self.row_ids) != n:
            raise ContractError("FeatureMatrix dimensions disagree")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ContractError("FeatureMatrix cells must be finite")
        if n <= p + 1:
            raise InsufficientObservations(
                f"insufficient observations: n={n} complete rows for p={p} features (need n > p + 1)")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]

    def column(self, name):
        return self.X[:, self.feature_names.index(name)]

    def subset(self, names):
        idx = [self.feature_names.index(name) for name in names]
        return FeatureMatrix(tuple(names), self.X[:, idx], self.y, self.row_ids, self.dropped_rows)

    @classmethod
    def from_arrays(cls, X, y, feature_names=None):
        X = np.asarray(X, dtype=float)
        if feature_names is None:
            feature_names = [f"x{j + 1}" for j in range(X.shape[1])]
        return cls(tuple(feature_names), X, np.asarray(y, dtype=float), tuple(range(X.shape[0])))


def build_matrix(dataset, features, response=RESPONSE):
    """Complete-case design matrix over ``features`` with ``response`` as y."""
    features = list(features)
    if not features:
        raise ContractError("feature list is empty")
    if len(set(features)) != len(features):
        raise ContractError("feature list has duplicates")
    rows, ys, ids = [], [], []
    for i, rec in enumerate(dataset.records):
        vals = [rec.value(name) for name in features]
        target = rec.value(response)
        if target is None or any(v is None for v in vals):
            continue
        rows.append(vals)
        ys.append(target)
        ids.append(i)
    X = np.array(rows, dtype=float).reshape(len(rows), len(features))
    return FeatureMatrix(tuple(features), X, np.array(ys, dtype=float), tuple(ids),
                         dropped_rows=len(dataset.records) - len(rows))
