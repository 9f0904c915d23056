import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from extremaldep.bootstrap import (
    BootstrapBatch,
    BootstrapConfig,
    BootstrapDraws,
    InvalidRunError,
    band_half_width,
    bootstrap_batch,
    bootstrap_draws,
    bootstrap_size,
    bootstrap_tail_size,
    decide_strong,
    decide_variance,
    derive_seed,
    exceedance_count,
    make_stream,
    resample,
    resample_indices,
    variance_ratio,
    variance_threshold,
)
from extremaldep.core import FULL_QUADRANT, Cone, ParameterError, PolarSample
from extremaldep.special import chi2_cdf, chi2_quantile, wilson_hilferty


def pareto_sample(seed, n=822, lo=0.0, hi=1.0):
    rng = np.random.default_rng(seed)
    return PolarSample((1 - rng.random(n)) ** -1.0, lo + (hi - lo) * rng.random(n))


class TestChi2Quantile:
    def test_two_df_closed_form(self):
        assert chi2_quantile(0.95, 2) == pytest.approx(-2 * math.log(0.05), abs=1e-10)

    @pytest.mark.parametrize("df", [1, 3, 9, 49, 199, 1000])
    @pytest.mark.parametrize("p", [0.01, 0.5, 0.95, 0.975, 0.999])
    def test_against_scipy(self, p, df):
        assert chi2_quantile(p, df) == pytest.approx(stats.chi2.ppf(p, df), rel=1e-9)

    def test_one_df(self):
        assert chi2_quantile(0.95, 1) == pytest.approx(3.841458820694124, rel=1e-10)

    def test_wilson_hilferty_agreement(self):
        q = chi2_quantile(0.95, 199)
        assert q == pytest.approx(232.9, abs=0.1)
        assert abs(q / wilson_hilferty(0.95, 199) - 1) < 0.005

    @given(st.floats(0.001, 0.999), st.integers(1, 500))
    @settings(max_examples=80)
    def test_round_trip(self, p, df):
        assert chi2_cdf(chi2_quantile(p, df), df) == pytest.approx(p, abs=1e-7)

    def test_monotone(self):
        qs = [chi2_quantile(p, 7) for p in np.linspace(0.01, 0.99, 50)]
        assert all(b > a for a, b in zip(qs, qs[1:]))
        assert chi2_quantile(0.95, 8) > chi2_quantile(0.95, 7)

    @pytest.mark.parametrize("p,df", [(0.0, 3), (1.0, 3), (0.5, 0)])
    def test_domain(self, p, df):
        with pytest.raises(ParameterError):
            chi2_quantile(p, df)


class TestSizes:
    def test_defaults(self):
        assert bootstrap_size(822, 100) == 50
        assert bootstrap_tail_size(50) == 10

    def test_clipping(self):
        assert bootstrap_size(20, 3) == 20
        assert bootstrap_tail_size(1) == 1

    def test_config(self):
        cfg = BootstrapConfig.for_sample(822, 100)
        assert (cfg.B, cfg.m, cfg.k_m, cfg.z_crit, cfg.chi2_level) == (200, 50, 10, 1.96, 0.95)

    def test_bonferroni(self):
        cfg = BootstrapConfig.for_sample(822, 100, bonferroni=True)
        assert cfg.z_crit == pytest.approx(2.2414, abs=1e-4)
        assert cfg.chi2_level == 0.975

    def test_bad_config(self):
        with pytest.raises(ParameterError):
            BootstrapConfig(B=200, m=5, k_m=6)
        with pytest.raises(ParameterError):
            bootstrap_size(10, 11)


class TestResample:
    def test_single_element(self):
        s = PolarSample(np.array([3.0]), np.array([0.25]))
        out = resample(s, 7, make_stream(1))
        assert np.all(out.r == 3.0) and np.all(out.theta == 0.25) and len(out) == 7

    def test_deterministic(self):
        a = resample_indices(822, 50, 200, make_stream(5))
        b = resample_indices(822, 50, 200, make_stream(5))
        assert np.array_equal(a, b)
        assert not np.array_equal(a, resample_indices(822, 50, 200, make_stream(6)))

    def test_rows_are_prefix_stable(self):
        # row i depends only on the seed and i
        a = resample_indices(822, 50, 200, make_stream(5))
        b = resample_indices(822, 50, 20, make_stream(5))
        assert np.array_equal(a[:20], b)

    @given(st.integers(1, 500), st.integers(1, 60), st.integers(0, 2**32))
    @settings(max_examples=50)
    def test_closure(self, n, m, seed):
        idx = resample_indices(n, m, 3, make_stream(seed))
        assert idx.shape == (3, m) and idx.min() >= 0 and idx.max() < n

    def test_roughly_uniform(self):
        idx = resample_indices(10, 1000, 100, make_stream(0)).ravel()
        counts = np.bincount(idx, minlength=10)
        assert stats.chisquare(counts).pvalue > 1e-4

    def test_derive_seed(self):
        assert derive_seed(1, 2) == derive_seed(1, 2)
        assert derive_seed(1, 2) != derive_seed(2, 1)


class TestBatch:
    def test_shapes_and_sharing(self):
        s = pareto_sample(0)
        cfg = BootstrapConfig.for_sample(822, 100, seed=3)
        batch = bootstrap_batch(s, cfg, Cone(0.2, 0.8))
        assert batch.d.shape == batch.t.shape == batch.tg.shape == (200,)
        d = bootstrap_draws(s, cfg, Cone(0.2, 0.8), "D")
        tg = bootstrap_draws(s, cfg, None, "T_g")
        assert np.array_equal(d.values, batch.d) and np.array_equal(tg.values, batch.tg)

    def test_full_quadrant_d_is_hill(self):
        s = pareto_sample(1)
        cfg = BootstrapConfig.for_sample(822, 100, seed=4)
        batch = bootstrap_batch(s, cfg, FULL_QUADRANT)
        idx = resample_indices(822, cfg.m, cfg.B, make_stream(4))
        for i in (0, 57, 199):
            top = np.sort(s.r[idx[i]])[::-1][: cfg.k_m]
            assert batch.d[i] == pytest.approx(np.mean(np.log(top / top[-1])), rel=1e-12)

    def test_d_needs_cone(self):
        cfg = BootstrapConfig.for_sample(822, 100)
        with pytest.raises(ParameterError):
            bootstrap_draws(pareto_sample(0), cfg, None, "D")

    def test_m_too_large(self):
        with pytest.raises(ParameterError):
            bootstrap_batch(pareto_sample(0, n=30), BootstrapConfig(B=10, m=40, k_m=5))

    def test_invalid_t_run(self):
        ok = np.ones(200, dtype=bool)
        ok[:21] = False
        batch = BootstrapBatch(np.zeros(200), np.where(ok, 1.0, np.nan), np.zeros(200), ok)
        with pytest.raises(InvalidRunError):
            batch.draws("T")
        ok[20] = True
        draws = BootstrapBatch(np.zeros(200), np.where(ok, 1.0, np.nan), np.zeros(200), ok).draws("T")
        assert draws.values.shape == (180,) and draws.failed == 20 and draws.B == 200

    def test_axis_sample_makes_t_invalid(self):
        s = PolarSample(pareto_sample(2).r, np.zeros(822))
        cfg = BootstrapConfig.for_sample(822, 100)
        with pytest.raises(InvalidRunError):
            bootstrap_draws(s, cfg, None, "T")


def draws_with_exceedances(count, inv_alpha, cfg, B=200):
    h = band_half_width(inv_alpha, cfg)
    vals = np.full(B, inv_alpha)
    vals[:count] = inv_alpha + 1.5 * h
    return BootstrapDraws(vals, "D")


class TestDecisionRules:
    cfg = BootstrapConfig(B=200, m=50, k_m=10)

    def test_half_width(self):
        assert band_half_width(0.5, self.cfg) == pytest.approx(1.96 * 0.5 / math.sqrt(10))
        assert band_half_width(0.5, self.cfg) == pytest.approx(0.3099, abs=1e-4)

    @pytest.mark.parametrize("count,reject", [(0, False), (9, False), (10, True), (11, True), (200, True)])
    def test_band_boundary(self, count, reject):
        draws = draws_with_exceedances(count, 0.5, self.cfg)
        assert exceedance_count(draws, 0.5, self.cfg) == count
        assert decide_strong(draws, 0.5, self.cfg) is reject

    def test_band_is_strict(self):
        h = band_half_width(0.5, self.cfg)
        vals = np.full(200, 0.5)
        vals[:50] = 0.5 + h * (1 - 1e-12)
        assert not decide_strong(BootstrapDraws(vals, "D"), 0.5, self.cfg)

    def test_zero_variance_accepts(self):
        draws = BootstrapDraws(np.full(200, 0.7), "T")
        assert variance_ratio(draws, 0.5, self.cfg) == 0
        assert not decide_variance(draws, 0.5, self.cfg)

    def test_variance_threshold(self):
        assert variance_threshold(0.95, 199) == pytest.approx(stats.chi2.ppf(0.95, 199) / 199, rel=1e-9)

    def test_variance_boundary(self):
        thr = variance_threshold(0.95, 199)
        base = np.random.default_rng(0).standard_normal(200)
        base = (base - base.mean()) / base.std(ddof=1)
        inv = 0.5
        for factor, reject in ((0.999, False), (1.001, True)):
            sd = math.sqrt(factor * thr * inv**2 / self.cfg.k_m)
            draws = BootstrapDraws(1 + sd * base, "T_g")
            assert decide_variance(draws, inv, self.cfg) is reject

    def test_kind_checks(self):
        with pytest.raises(ParameterError):
            decide_strong(BootstrapDraws(np.zeros(3), "T"), 0.5, self.cfg)
        with pytest.raises(ParameterError):
            decide_variance(BootstrapDraws(np.zeros(3), "D"), 0.5, self.cfg)

    def test_too_few_values(self):
        with pytest.raises(InvalidRunError):
            variance_ratio(BootstrapDraws(np.zeros(1), "T"), 0.5, self.cfg)
