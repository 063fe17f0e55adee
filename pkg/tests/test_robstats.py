import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rowguard.rng import RandomStream
from rowguard.robstats import (
    ScaleEstimator,
    compute_threshold,
    mad_scaled,
    median,
    robust_estimates,
    trimmed_iqr_scale,
)

from oracles import median_by_sort

finite_floats = st.floats(allow_nan=False, allow_infinity=False, width=64,
                          min_value=-1e12, max_value=1e12)


# ------------------------------------------------------------------- median

def test_median_singleton():
    assert median([5.0]) == 5.0


def test_median_even_length_mean_of_middle_pair():
    assert median([1.0, 2.0, 3.0, 4.0]) == 2.5


def test_median_matches_sort_oracle():
    vals = np.random.default_rng(0).standard_normal(1001) * 100
    assert median(vals) == median_by_sort(vals)


def test_median_rejects_empty_and_nonfinite():
    with pytest.raises(ValueError):
        median([])
    with pytest.raises(ValueError):
        median([1.0, np.nan])


@given(st.lists(finite_floats, min_size=1, max_size=60))
@settings(max_examples=200, deadline=None)
def test_median_permutation_invariant(values):
    shuffled = list(values)
    np.random.default_rng(1).shuffle(shuffled)
    assert median(values) == median(shuffled)


def test_median_breakdown_point():
    # replacing t of 2t+1 values keeps the median inside the untouched range
    rng = np.random.default_rng(2)
    for trial in range(50):
        t = int(rng.integers(1, 12))
        clean = rng.standard_normal(2 * t + 1)
        corrupt_idx = rng.choice(2 * t + 1, size=t, replace=False)
        corrupted = clean.copy()
        corrupted[corrupt_idx] = rng.choice([-1e15, 1e15], size=t) * rng.uniform(1, 9, t)
        untouched = np.delete(clean, corrupt_idx)
        med = median(corrupted)
        assert untouched.min() <= med <= untouched.max()


def test_median_translation_and_dyadic_scale_equivariance():
    rng = np.random.default_rng(3)
    v = rng.standard_normal(37)  # odd length: median is a single order statistic
    a = 1.75
    assert median(v + a) == median(v) + a
    for c in (0.25, 2.0, 8.0, -4.0):
        assert median(c * v) == c * median(v)
        assert mad_scaled(c * v, c * median(v)) == abs(c) * mad_scaled(v, median(v))


# ---------------------------------------------------------------------- MAD

def test_mad_zero_spread():
    assert mad_scaled([7.0, 7.0, 7.0], 7.0) == 0.0


def test_mad_hand_example():
    assert mad_scaled([1.0, 2.0, 3.0, 4.0, 5.0], 3.0) == pytest.approx(1.4826, abs=1e-12)


def test_mad_consistency_factor_monte_carlo():
    draws = RandomStream(314159, "mad-mc").standard_normals(100_000)
    sigma_hat = mad_scaled(draws, median(draws))
    assert abs(sigma_hat - 1.0) <= 0.02


def test_mad_translation_invariance():
    # dyadic values keep the shifts exact in floating point
    rng = np.random.default_rng(4)
    v = rng.integers(-1000, 1000, 25) / 8.0
    mu = median(v)
    assert mad_scaled(v + 3.5, mu + 3.5) == mad_scaled(v, mu)
    assert median(v + 3.5) == median(v) + 3.5
    even = rng.integers(-1000, 1000, 24) / 8.0
    assert median(even + 3.5) == median(even) + 3.5


# -------------------------------------------------------------- trimmed IQR

def test_trimmed_iqr_zero_spread():
    assert trimmed_iqr_scale([4.0, 4.0, 4.0, 4.0], 4.0) == 0.0


def test_trimmed_iqr_hand_example():
    # deviations 0..9, drop the top one, Q75 - Q25 of 0..8 is 6 - 2
    assert trimmed_iqr_scale(list(range(10)), 0.0) == 4.0


def test_trimmed_iqr_absorbs_single_outlier():
    rng = np.random.default_rng(5)
    base = rng.standard_normal(100).tolist()
    mu = median(base)
    before = trimmed_iqr_scale(base, mu)
    after = trimmed_iqr_scale(base + [1e9], mu)
    assert abs(after - before) < 0.05 * before


def test_trimmed_iqr_needs_four_values():
    with pytest.raises(ValueError):
        trimmed_iqr_scale([1.0, 2.0, 3.0], 2.0)


# ---------------------------------------------------------- estimate cascade

def test_estimates_regular_mad_path():
    est = robust_estimates([1.0, 2.0, 3.0, 4.0, 5.0])
    assert est.mu_hat == 3.0
    assert est.sigma_hat == pytest.approx(1.4826, abs=1e-12)
    assert est.estimator_used is ScaleEstimator.MAD


def test_estimates_constant_input_degenerates():
    est = robust_estimates([7.0, 7.0, 7.0, 7.0])
    assert est.mu_hat == 7.0
    assert est.sigma_hat == 0.0
    assert est.estimator_used is ScaleEstimator.DEGENERATE_ALL_EQUAL


def test_estimates_trimmed_fallback_path():
    # MAD degenerates; the trimmed IQR is consulted and also lands at zero
    est = robust_estimates([0.0] * 9 + [100.0])
    assert est.mu_hat == 0.0
    assert est.sigma_hat == 0.0
    assert est.estimator_used is ScaleEstimator.DEGENERATE_ALL_EQUAL


def test_estimates_trimmed_fallback_nonzero():
    # one third far values: MAD is 0 but the trimmed IQR keeps some spread
    values = [0.0] * 6 + [1.0, 2.0, 3.0, 4.0]
    est = robust_estimates(values)
    assert est.estimator_used is ScaleEstimator.TRIMMED_IQR
    assert est.sigma_hat > 0.0


@given(st.lists(finite_floats, min_size=1, max_size=40))
@settings(max_examples=200, deadline=None)
def test_estimates_permutation_invariant(values):
    shuffled = list(values)
    np.random.default_rng(6).shuffle(shuffled)
    a = robust_estimates(values)
    b = robust_estimates(shuffled)
    assert a.mu_hat == b.mu_hat
    assert a.sigma_hat == b.sigma_hat
    assert a.estimator_used is b.estimator_used


# ---------------------------------------------------------------- threshold

def test_threshold_arithmetic():
    est = robust_estimates([10.0, 10.0, 8.0, 12.0, 10.0])
    thr = compute_threshold(est, 3.0)
    assert thr.tau == est.mu_hat + 3.0 * est.sigma_hat


def test_threshold_examples():
    from rowguard.robstats import RobustEstimates

    est = RobustEstimates(mu_hat=10.0, sigma_hat=2.0, estimator_used=ScaleEstimator.MAD)
    assert compute_threshold(est, 3.0).tau == 16.0

    degen = RobustEstimates(mu_hat=5.0, sigma_hat=0.0,
                            estimator_used=ScaleEstimator.DEGENERATE_ALL_EQUAL)
    assert compute_threshold(degen, 3.0).tau == 5.0

    est2 = RobustEstimates(mu_hat=0.0, sigma_hat=1.4826, estimator_used=ScaleEstimator.MAD)
    assert compute_threshold(est2, 2.5).tau == pytest.approx(3.7065, abs=1e-12)


def test_threshold_rejects_nonpositive_c():
    est = robust_estimates([1.0, 2.0])
    with pytest.raises(ValueError):
        compute_threshold(est, 0.0)
    with pytest.raises(ValueError):
        compute_threshold(est, -1.0)
