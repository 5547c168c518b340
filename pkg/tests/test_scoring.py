import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from journal_influence.errors import ContractError
from journal_influence.ingest import FeatureMatrix
from journal_influence.regression import fit_arrays
from journal_influence.scoring import (PUBLISHED, PUBLISHED_CI_MIDPOINT, jis_fitted, jis_published,
                                       quartile_blocks, quartile_match, rank_error_stats)
from journal_influence.dsrs import run_pipeline


class TestPublished:
    def test_intercept_plus_first_quarter(self):
        assert jis_published(1, 0, 0, 0, 0) == pytest.approx(0.372562, abs=1e-12)

    def test_sample_journal_2012(self):
        score = jis_published(1, 30, 23, 846, 1.68)
        assert score == pytest.approx(1.01639, abs=1e-5)
        assert f"{score:.6f}" == "1.016392"

    def test_quarter_step(self):
        args = (30, 23, 846, 1.68)
        assert jis_published(4, *args) - jis_published(1, *args) == pytest.approx(-0.42228, abs=1e-12)

    def test_constants(self):
        assert PUBLISHED.intercept == 0.513322
        assert PUBLISHED.weights == (-0.14076, 0.004716, 0.000131, -8.3e-06, 0.301404)

    def test_ci_midpoint_variant_is_close(self):
        a = jis_published(2, 25, 40, 900, 1.1)
        b = jis_published(2, 25, 40, 900, 1.1, model=PUBLISHED_CI_MIDPOINT)
        assert abs(a - b) < 1e-3

    @pytest.mark.parametrize("bad", [0, 5, 2.5, True])
    def test_quarter_range(self, bad):
        with pytest.raises(ContractError):
            jis_published(bad, 1, 1, 1, 1)

    @pytest.mark.parametrize("idx", range(4))
    def test_negative_indicator(self, idx):
        vals = [1.0, 1.0, 1.0, 1.0]
        vals[idx] = -0.5
        with pytest.raises(ContractError):
            jis_published(2, *vals)

    def test_nan_rejected(self):
        with pytest.raises(ContractError):
            jis_published(2, float("nan"), 1, 1, 1)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 4),
           arrays(float, 4, elements=st.floats(0, 1e4)), arrays(float, 4, elements=st.floats(0, 1e4)))
    def test_affine(self, q1, q2, a, b):
        lhs = jis_published(q1, *a) - jis_published(q2, *b)
        w = np.array(PUBLISHED.weights)
        rhs = w[0] * (q1 - q2) + w[1:] @ (a - b)
        assert lhs == pytest.approx(rhs, abs=1e-12 * max(1.0, np.abs(a).max(), np.abs(b).max()))


class TestFitted:
    def test_reproduces_training_line(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(30, 2))
        y = 0.4 + X @ [1.2, -0.7]
        model = run_pipeline(FeatureMatrix.from_arrays(X, y, ["h_index", "quarter"]))
        for row, target in zip(X, y):
            assert jis_fitted(model, {"h_index": row[0], "quarter": row[1]}) == pytest.approx(target, abs=1e-9)

    def test_bare_report_and_missing(self):
        X = np.array([[0.0], [1.0], [2.0], [4.0]])
        fit = fit_arrays(X, [3.0, 3.0, 3.0, 3.0], ["a"])
        assert jis_fitted(fit, {"a": 123.0}) == pytest.approx(3.0, abs=1e-12)
        with pytest.raises(ContractError):
            jis_fitted(fit, {})


class TestQuartileMatch:
    def test_identical(self):
        s = np.random.default_rng(0).normal(size=17)
        assert quartile_match(s, s).per_quartile_match == (100.0,) * 4

    def test_reversed(self):
        s = np.arange(8.0)
        rep = quartile_match(s, -s)
        assert rep.per_quartile_match[0] == 0.0
        assert rep.block_sizes == (2, 2, 2, 2)

    def test_block_sizes(self):
        assert quartile_blocks(10) == (3, 3, 2, 2)
        assert quartile_blocks(7) == (2, 2, 2, 1)
        assert sum(quartile_blocks(1001)) == 1001

    def test_errors(self):
        with pytest.raises(ContractError):
            quartile_match([1, 2, 3, 4], [1, 2, 3])
        with pytest.raises(ContractError):
            quartile_match([1, 2, 3], [1, 2, 3])

    def test_ties_are_stable(self):
        rep = quartile_match([1.0] * 8, [1.0] * 8)
        assert rep.per_quartile_match == (100.0,) * 4

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(-1000, 1000), min_size=4, max_size=40, unique=True),
           st.integers(0, 2**32 - 1))
    def test_monotone_invariance(self, ints, seed):
        # integer grid keeps values far enough apart that exp creates no ties
        ref = np.array(ints) / 100.0
        cand = ref + np.random.default_rng(seed).normal(size=ref.size)
        base = quartile_match(ref, cand)
        assert all(0.0 <= v <= 100.0 for v in base.per_quartile_match)
        assert quartile_match(np.exp(ref), 3 * cand + 1).per_quartile_match == base.per_quartile_match


class TestRankErrorStats:
    def test_identical(self):
        assert rank_error_stats([0.3, 0.1], [0.3, 0.1]) == (0.0, 0.0)

    def test_hand_example(self):
        mean, median = rank_error_stats([1, 2, 3], [1.1, 1.9, 3.0])
        assert mean == pytest.approx(0.0667, abs=1e-4)
        assert median == pytest.approx(0.1, abs=1e-12)

    def test_even_median(self):
        assert rank_error_stats([0, 0, 0, 0], [1, 2, 3, 4])[1] == 2.5

    def test_ranks_option(self):
        assert rank_error_stats([3.0, 2.0, 1.0], [1.0, 2.0, 3.0], on="ranks") == (4 / 3, 2.0)

    def test_errors(self):
        with pytest.raises(ContractError):
            rank_error_stats([1.0], [1.0, 2.0])
        with pytest.raises(ContractError):
            rank_error_stats([], [])

    @settings(max_examples=50, deadline=None)
    @given(arrays(float, 6, elements=st.floats(-5, 5)), arrays(float, 6, elements=st.floats(-5, 5)))
    def test_nonnegative_and_zero_iff_equal(self, a, b):
        mean, median = rank_error_stats(a, b)
        assert mean >= 0 and median >= 0
        assert (mean == 0) == bool(np.array_equal(a, b))
