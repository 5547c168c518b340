"""Journal influence scoring from bibliometric indicator tables.

Typical use::

    from journal_influence import read_table, sparsity_filter, build_matrix, run_pipeline

    ds = read_table("scimago_2012.csv")
    features = sparsity_filter(ds, 0.20, TWO_YEAR_CANDIDATES)
    model = run_pipeline(build_matrix(ds, features))
"""

__version__ = "0.1.0"

from .cluster import ClusterResult, classify, influence_threshold, kmeans2
from .dsrs import (DsrsConfig, DsrsModel, EliminationTrace, VarianceAttribution,
                   backward_eliminate, run_pipeline, select_representatives,
                   variance_attribution)
from .errors import (CollinearityError, ConstantColumnError, ContractError, DegenerateInput,
                     DsrsError, InsufficientObservations, NoSignificantFeatures, ParseError,
                     PipelineError)
from .ingest import (CANONICAL_FEATURES, INDICATORS, TWO_YEAR_CANDIDATES, Dataset,
                     FeatureMatrix, JournalRecord, ParseOptions, build_matrix, format_table,
                     parse_table, quarter_probabilities, read_table, sparsity_filter)
from .numerics import (SymmetricEigen, correlation_matrix, eigen_symmetric, f_pvalue,
                       pearson, solve_spd, standardize, t_pvalue_two_sided)
from .regression import FitReport, fit_mlr, predict
from .scoring import (PUBLISHED, PublishedModel, QuartileMatchReport, jis_fitted,
                      jis_published, quartile_match, rank_error_stats)
