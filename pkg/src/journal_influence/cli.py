"""Command-line front end: ``dsrs fit | score | classify | validate | plotdata``.

Data goes to standard output as delimited tables; diagnostics and errors
go to standard error.  Exit status is 0 on success, 1 on a pipeline or I/O
error and 2 on a usage error.
"""

import argparse
import csv
import io
import os
import sys

import numpy as np

from . import __version__, modelfile
from .cluster import kmeans2, label_fractions
from .dsrs import DsrsConfig, run_pipeline
from .errors import ContractError, DsrsError, ParseError, PipelineError
from .ingest import (CANONICAL_FEATURES, LABELS, RESPONSE, TWO_YEAR_CANDIDATES,
                     ParseOptions, build_matrix, detect_delimiter, missing_fractions,
                     parse_number, read_table, sparsity_filter)
from .scoring import (PUBLISHED, PUBLISHED_CI_MIDPOINT, PublishedModel,
                      jis_published, quartile_match, rank_error_stats)

PRECISIONS = {"rounded": PUBLISHED, "ci-midpoint": PUBLISHED_CI_MIDPOINT}


def _flag(name):
    return "--" + name.replace("_", "-")


class _Out:
    """Delimited table writer bound to a stream."""

    def __init__(self, stream, delimiter):
        self.stream = stream
        self.delimiter = delimiter
        self.styled = stream.isatty() and not os.environ.get("DSRS_NO_COLOR")

    def heading(self, text):
        line = f"# {text}"
        if self.styled:
            line = f"\033[1m{line}\033[0m"
        self.stream.write(line + "\n")

    def table(self, header, rows):
        w = csv.writer(self.stream, delimiter=self.delimiter, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])

    def blank(self):
        self.stream.write("\n")


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.6g}"
    if value is None:
        return ""
    return value


def _write_table(path, header, rows, delimiter):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def _read_input(args):
    opts = ParseOptions(delimiter=args.input_delimiter, quarter_column=args.quarter_column)
    try:
        return read_table(args.input, opts)
    except ParseError as exc:
        raise PipelineError("ingest", exc) from exc


def _scoring_model(args):
    if args.published:
        return modelfile.published(PRECISIONS[args.precision])
    return modelfile.load(args.model)


def _complete_rows(dataset, names):
    ids, rows, idx = [], [], []
    for i, rec in enumerate(dataset.records):
        vals = [rec.value(n) for n in names]
        if any(v is None for v in vals):
            continue
        ids.append(rec.title or str(i + 1))
        rows.append(vals)
        idx.append(i)
    return ids, np.array(rows, dtype=float).reshape(len(rows), len(names)), idx


# ---------------------------------------------------------------------------
# fit


def cmd_fit(args, out):
    dataset = _read_input(args)
    candidates = args.features.split(",") if args.features else list(TWO_YEAR_CANDIDATES)
    unknown = [c for c in candidates if c not in CANONICAL_FEATURES]
    if unknown:
        raise ContractError(f"unknown feature(s): {', '.join(unknown)}")
    try:
        if len(dataset) == 0:
            raise ContractError("input table has no data rows")
        fractions = missing_fractions(dataset, candidates)
        features = sparsity_filter(dataset, args.max_missing, candidates)
        if not features:
            raise ContractError("every candidate feature is too sparse")
        matrix = build_matrix(dataset, features, args.response)
    except DsrsError as exc:
        raise PipelineError("ingest", exc) from exc

    config = DsrsConfig(args.p_threshold, args.corr_threshold, args.pairwise_threshold, args.max_features)
    model = run_pipeline(matrix, config)
    fit = model.fit

    out.heading(f"input: {len(dataset)} rows, {matrix.n} complete, {matrix.dropped_rows} dropped")
    out.table(["feature", "missing_fraction", "kept"],
              [(c, fractions[c], "yes" if c in features else "no") for c in candidates])
    out.blank()

    out.heading("elimination phases")
    out.table(["phase", "feature", "p_value", "correlation", "decision"], model.trace.as_rows())
    out.blank()
    out.table(["phase", "n_features", "r_squared", "significance_f", "removed"],
              [(i, len(ph.features), ph.r_squared, ph.f_significance, ph.removed or "")
               for i, ph in enumerate(model.trace.phases, start=1)])
    out.blank()

    out.heading("variance attribution (percent of total variability)")
    out.table(["feature", "share_percent", "selected"],
              [(f, model.attribution.shares[f], "yes" if f in model.selected_features else "no")
               for f in model.attribution.ordering])
    out.blank()

    out.heading("regression statistics")
    out.table(["statistic", "value"], [
        ("multiple_r", fit.multiple_r), ("r_square", fit.r_squared),
        ("adjusted_r_square", fit.adjusted_r_squared), ("standard_error", fit.se_residual),
        ("observations", fit.n),
    ])
    out.blank()
    out.heading("anova")
    out.table(["source", "df", "ss", "ms", "f", "significance_f"], [
        ("regression", fit.k, fit.ssr, fit.msr, fit.f_stat, fit.f_significance),
        ("residual", fit.df_residual, fit.sse, fit.mse, None, None),
        ("total", fit.n - 1, fit.sst, None, None, None),
    ])
    out.blank()
    ci = fit.confidence_interval(0.95)
    terms = ("intercept",) + fit.feature_names
    out.heading("coefficients")
    out.table(["term", "coefficient", "std_error", "t_stat", "p_value", "lower_95", "upper_95"],
              [(t, c, s, ts, p, lo, hi) for t, c, s, ts, p, (lo, hi)
               in zip(terms, fit.coefficients, fit.se, fit.t_stats, fit.p_values, ci)])

    if args.output:
        modelfile.from_dsrs(model, args.input).save(args.output)
        print(f"model written to {args.output}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# score


def cmd_score(args, out, parser):
    model = _scoring_model(args)
    values = {}
    for name in model.features:
        v = getattr(args, name, None)
        if v is None:
            parser.error(f"missing required flag {_flag(name)}")
        values[name] = v
    if "quarter" in values and values["quarter"] not in (1, 2, 3, 4):
        raise ContractError(f"quarter must be 1..4, got {values['quarter']:g}")
    if model.kind == "published":
        weights = PublishedModel(intercept=model.intercept, **model.coefficients)
        score = jis_published(int(values["quarter"]), values["h_index"], values["total_docs"],
                              values["total_refs"], values["cites_per_doc_2y"], model=weights)
    else:
        score = model.predict(values)
    out.stream.write(f"{score:.6f}\n")
    return 0


# ---------------------------------------------------------------------------
# classify


def read_scores(path, delimiter=None):
    """``(ids, scores)`` from a delimited table with a header row."""
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    if not text.strip():
        return [], np.array([])
    delimiter = delimiter or detect_delimiter(text.splitlines()[0])
    rows = list(csv.reader(io.StringIO(text), delimiter=delimiter))
    header = [h.strip().lower() for h in rows[0]]
    score_col = header.index("score") if "score" in header else (1 if len(header) > 1 else 0)
    id_col = next((header.index(k) for k in ("id", "title") if k in header), 0 if score_col != 0 else None)
    ids, scores = [], []
    for rownum, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            value = parse_number(row[score_col])
        except (ValueError, IndexError):
            raise ParseError("non-numeric score", rownum, rows[0][score_col]) from None
        if value is None:
            continue
        ids.append(row[id_col] if id_col is not None else str(rownum - 1))
        scores.append(value)
    return ids, np.array(scores, dtype=float)


def cmd_classify(args, out):
    if args.scores:
        ids, scores = read_scores(args.scores, args.input_delimiter)
    else:
        if not args.input or not (args.model or args.published):
            raise ContractError("classify needs --scores, or --input with --model/--published")
        model = _scoring_model(args)
        ids, X, _ = _complete_rows(_read_input(args), model.features)
        scores = model.predict_matrix(X)
    try:
        result = kmeans2(scores, seed=args.seed, tol=args.tol)
    except DsrsError as exc:
        raise PipelineError("cluster", exc) from exc

    _write_table(args.output, ["id", "score", "label"],
                 [(i, s, result.label_of(k)) for k, (i, s) in enumerate(zip(ids, scores))],
                 args.delimiter)
    fractions = label_fractions(result)
    out.heading("clusters")
    out.table(["statistic", "value"], [
        ("mean_national", result.mean_low), ("mean_international", result.mean_high),
        ("influence_threshold", result.threshold), ("iterations", result.iterations),
        ("converged", "yes" if result.converged else "no"), ("n", len(scores)),
        ("fraction_national", fractions["National"]),
        ("fraction_international", fractions["International"]),
    ])
    return 0


# ---------------------------------------------------------------------------
# validate


def cmd_validate(args, out):
    model = _scoring_model(args)
    dataset = _read_input(args)
    if args.reference not in CANONICAL_FEATURES + (RESPONSE,):
        raise ContractError(f"unknown reference column {args.reference!r}")
    if not any(rec.value(args.reference) is not None for rec in dataset.records):
        raise ContractError(f"reference column {args.reference!r} is missing from the input")
    names = list(model.features) + [args.reference]
    _, data, _ = _complete_rows(dataset, names)
    candidate = model.predict_matrix(data[:, :-1])
    reference = data[:, -1]
    report = quartile_match(reference, candidate)
    mean_d, median_d = rank_error_stats(reference, candidate)
    mean_r, median_r = rank_error_stats(reference, candidate, on="ranks")
    out.heading(f"validation against {args.reference} over {report.n} journals")
    out.table(["quartile", "block_size", "match_percent"],
              [(f"Q{i + 1}", size, m) for i, (size, m)
               in enumerate(zip(report.block_sizes, report.per_quartile_match))])
    out.blank()
    out.table(["statistic", "value"], [
        ("mean_abs_score_difference", mean_d), ("median_abs_score_difference", median_d),
        ("mean_abs_rank_difference", mean_r), ("median_abs_rank_difference", median_r),
    ])
    return 0


# ---------------------------------------------------------------------------
# plotdata


def cmd_plotdata(args, out):
    model = _scoring_model(args)
    dataset = _read_input(args)
    if not os.path.isdir(args.output_dir):
        try:
            os.makedirs(args.output_dir, exist_ok=True)
        except OSError as exc:
            raise ContractError(f"cannot create output directory {args.output_dir!r}: {exc}") from exc
    if not os.access(args.output_dir, os.W_OK):
        raise ContractError(f"output directory {args.output_dir!r} is not writable")

    _, X, _ = _complete_rows(dataset, model.features)
    scores = model.predict_matrix(X) if len(X) else np.array([])
    written = []
    for j, name in enumerate(model.features):
        path = os.path.join(args.output_dir, f"jis_vs_{name}.csv")
        _write_table(path, [name, "jis"], zip(X[:, j], scores), args.delimiter)
        written.append(path)

    labels = []
    if len(scores):
        try:
            result = kmeans2(scores, seed=args.seed)
        except DsrsError as exc:
            raise PipelineError("cluster", exc) from exc
        labels = [result.label_of(i) for i in range(len(scores))]
    path = os.path.join(args.output_dir, "jis_cluster.csv")
    _write_table(path, ["jis", "label"], zip(scores, labels), args.delimiter)
    written.append(path)

    out.heading(f"{len(written)} files, {len(scores)} rows each")
    out.table(["file"], [(p,) for p in written])
    return 0


# ---------------------------------------------------------------------------


def _add_model_source(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--model", help="model JSON written by 'fit'")
    g.add_argument("--published", action="store_true", help="use the published five-indicator weights")
    p.add_argument("--precision", choices=sorted(PRECISIONS), default="rounded",
                   help="weights used with --published (default: rounded)")


def _add_input(p, required=True):
    p.add_argument("--input", required=required, help="indicator table (semicolon or comma separated)")
    p.add_argument("--input-delimiter", default=None, help="force the input delimiter")
    p.add_argument("--quarter-column", default=None, help="header of the column holding the quarter")


def build_parser():
    parser = argparse.ArgumentParser(prog="dsrs", description="Journal influence scoring toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--delimiter", default=",", help="delimiter for emitted tables (default ',')")
    common.add_argument("--seed", type=int, default=None, help="seed for randomised cluster initialisation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common], help="run DSRS on an indicator table")
    p.add_argument("input", help="indicator table")
    p.add_argument("--input-delimiter", default=None)
    p.add_argument("--quarter-column", default=None)
    p.add_argument("--response", default=RESPONSE)
    p.add_argument("--features", default=None,
                   help="comma separated candidate features (default: two-year indicator set)")
    p.add_argument("--p-threshold", type=float, default=0.05)
    p.add_argument("--corr-threshold", type=float, default=0.4)
    p.add_argument("--pairwise-threshold", type=float, default=0.85)
    p.add_argument("--max-features", type=int, default=None)
    p.add_argument("--max-missing", type=float, default=0.20)
    p.add_argument("--output", "-o", default=None, help="where to write the model JSON")

    p = sub.add_parser("score", parents=[common], help="score one journal")
    _add_model_source(p)
    for name in CANONICAL_FEATURES:
        p.add_argument(_flag(name), dest=name, type=float, default=None, help=LABELS[name])

    p = sub.add_parser("classify", parents=[common], help="split scores into National / International")
    p.add_argument("--scores", default=None, help="two-column table of (id, score)")
    _add_model_source(p, required=False)
    _add_input(p, required=False)
    p.add_argument("--output", required=True, help="labelled (id, score, label) table")
    p.add_argument("--tol", type=float, default=0.01, help="squared mean-change stopping threshold")

    p = sub.add_parser("validate", parents=[common], help="compare model scores to a reference column")
    _add_model_source(p)
    _add_input(p)
    p.add_argument("--reference", default=RESPONSE)

    p = sub.add_parser("plotdata", parents=[common], help="emit scatter-plot data files")
    _add_model_source(p)
    _add_input(p)
    p.add_argument("--output-dir", required=True)
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(stdout, args.delimiter)
    try:
        if args.command == "fit":
            return cmd_fit(args, out)
        if args.command == "score":
            return cmd_score(args, out, parser)
        if args.command == "classify":
            return cmd_classify(args, out)
        if args.command == "validate":
            return cmd_validate(args, out)
        if args.command == "plotdata":
            return cmd_plotdata(args, out)
    except (DsrsError, OSError) as exc:
        print(f"dsrs {args.command}: error: {exc}", file=stderr)
        return 1
    parser.error(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
