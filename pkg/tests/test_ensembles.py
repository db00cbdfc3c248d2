"""Wishart sampling: determinism, moments, and the exact-average checks."""

import numpy as np
import pytest

from rmtlab import ensembles, models
from rmtlab.errors import BadDimensions, DimensionMismatch

MP_TOP_KAPPA_2 = (1.0 / np.sqrt(2.0) + 1.0) ** 2


def _members(config, kind, count):
    return np.array([ensembles.sample_matrix(config, kind, k)
                     for k in range(count)])


class TestConfig:
    def test_kappa(self):
        cfg = ensembles.EnsembleConfig(n=64, t=128)
        assert cfg.kappa == 2.0

    def test_two_channel_ratios(self):
        p = models.partitioned(np.eye(4), np.eye(8), np.zeros((4, 8)))
        cfg = ensembles.EnsembleConfig(n=4, t=40, m=8, model=p)
        assert cfg.kappa_n == 0.1
        assert cfg.kappa_m == 0.2

    def test_two_channel_ordering_enforced(self):
        p = models.partitioned(np.eye(4), np.eye(8), np.zeros((4, 8)))
        with pytest.raises(BadDimensions):
            ensembles.EnsembleConfig(n=4, t=6, m=8, model=p)

    def test_rejects_bad_sigma(self):
        with pytest.raises(BadDimensions):
            ensembles.EnsembleConfig(n=4, t=8, sigma=0.0)

    def test_fingerprint_tracks_model(self):
        a = ensembles.EnsembleConfig(n=8, t=16,
                                     model=models.equal_cross(8, 0.3))
        b = ensembles.EnsembleConfig(n=8, t=16,
                                     model=models.equal_cross(8, 0.4))
        assert a.fingerprint() != b.fingerprint()


class TestDeterminism:
    def test_same_member_bit_identical(self):
        cfg = ensembles.EnsembleConfig(n=16, t=32, members=4, seed=123)
        a = ensembles.sample_matrix(cfg, "woe", 2)
        b = ensembles.sample_matrix(cfg, "woe", 2)
        np.testing.assert_array_equal(a, b)

    def test_members_differ(self):
        cfg = ensembles.EnsembleConfig(n=16, t=32, members=4, seed=123)
        a = ensembles.sample_matrix(cfg, "woe", 0)
        b = ensembles.sample_matrix(cfg, "woe", 1)
        assert np.max(np.abs(a - b)) > 1e-3

    def test_worker_count_does_not_change_spectra(self):
        cfg = ensembles.EnsembleConfig(n=24, t=48, members=6, seed=9)
        serial = ensembles.ensemble_spectra(cfg, "woe", workers=1)
        threaded = ensembles.ensemble_spectra(cfg, "woe", workers=3)
        for s, t in zip(serial, threaded):
            assert s.member == t.member
            np.testing.assert_array_equal(s.eigenvalues, t.eigenvalues)

    def test_cwoe_identity_model_reduces_to_woe(self):
        woe_cfg = ensembles.EnsembleConfig(n=16, t=32, members=2, seed=31)
        cwoe_cfg = ensembles.EnsembleConfig(n=16, t=32, members=2, seed=31,
                                            model=models.identity(16))
        a = ensembles.sample_matrix(woe_cfg, "woe", 0)
        b = ensembles.sample_matrix(cwoe_cfg, "cwoe", 0)
        np.testing.assert_array_equal(a, b)


class TestWoe:
    def test_single_variable_concentrates(self):
        cfg = ensembles.EnsembleConfig(n=1, t=10**6, members=1, seed=9)
        c = ensembles.sample_matrix(cfg, "woe", 0)
        assert 0.99 < c[0, 0] < 1.01

    def test_ensemble_mean_is_identity(self):
        # per-entry 3 sigma bound at 1000 members; seed pinned because a
        # 256-entry sweep at 3 sigma is expected to graze the bound for
        # some draws
        cfg = ensembles.EnsembleConfig(n=16, t=64, members=1000, seed=3)
        mean = _members(cfg, "woe", 1000).mean(axis=0)
        bound = 3.0 / np.sqrt(1000 * 64)
        assert np.max(np.abs(mean - np.eye(16))) < bound

    def test_rank_deficiency(self):
        cfg = ensembles.EnsembleConfig(n=1024, t=512, members=1, seed=0)
        ev = ensembles.spectrum(cfg, "woe", 0).eigenvalues
        assert np.sum(np.abs(ev) < 1e-8) == 512
        assert np.sum(ev > 1e-8) == 512

    def test_model_rejected(self):
        cfg = ensembles.EnsembleConfig(n=8, t=16,
                                       model=models.equal_cross(8, 0.2))
        with pytest.raises(BadDimensions):
            ensembles.sample_matrix(cfg, "woe", 0)

    def test_sigma_scales_mean(self):
        cfg = ensembles.EnsembleConfig(n=8, t=4096, sigma=2.0, members=1,
                                       seed=4)
        c = ensembles.sample_matrix(cfg, "woe", 0)
        assert abs(np.trace(c) / 8 - 4.0) < 0.5


class TestCwoe:
    def test_mean_recovers_model(self):
        model = models.equal_cross(64, 0.5)
        cfg = ensembles.EnsembleConfig(n=64, t=640, model=model,
                                       members=500, seed=0)
        samples = _members(cfg, "cwoe", 500)
        mean = samples.mean(axis=0)
        se = samples.std(axis=0, ddof=1) / np.sqrt(500)
        assert np.max(np.abs(mean - model.xi) / se) < 4.0

    def test_exponential_top_exceeds_null_edge(self):
        model = models.exponential(1024, 0.9)
        cfg = ensembles.EnsembleConfig(n=1024, t=2048, model=model,
                                       members=1, seed=5)
        ev = ensembles.spectrum(cfg, "cwoe", 0).eigenvalues
        assert ev[-1] > MP_TOP_KAPPA_2

    def test_no_model_reduces_to_woe(self):
        cfg = ensembles.EnsembleConfig(n=8, t=16, seed=44)
        a = ensembles.sample_matrix(cfg, "cwoe", 0)
        b = ensembles.sample_matrix(cfg, "woe", 0)
        np.testing.assert_array_equal(a, b)

    def test_rejects_partitioned_model(self):
        p = models.partitioned(np.eye(8), np.eye(16), np.zeros((8, 16)))
        cfg = ensembles.EnsembleConfig(n=8, t=64, m=16, model=p)
        with pytest.raises(DimensionMismatch):
            ensembles.sample_matrix(cfg, "cwoe", 0)


class TestTwoChannel:
    def test_null_mean_is_kappa_m_identity(self):
        p = models.partitioned(np.eye(64), np.eye(128), np.zeros((64, 128)))
        cfg = ensembles.EnsembleConfig(n=64, t=640, m=128, model=p,
                                       members=500, seed=1)
        samples = _members(cfg, "two-channel", 500)
        mean = samples.mean(axis=0)
        se = samples.std(axis=0, ddof=1) / np.sqrt(500)
        assert np.max(np.abs(mean - 0.2 * np.eye(64)) / se) < 4.0

    def test_structured_mean_matches_zeta(self):
        p = models.banded_partitioned(48, 96, 0.5, 0.5, 0.05)
        cfg = ensembles.EnsembleConfig(n=48, t=480, m=96, model=p,
                                       members=500, seed=2)
        samples = _members(cfg, "two-channel", 500)
        mean = samples.mean(axis=0)
        se = samples.std(axis=0, ddof=1) / np.sqrt(500)
        target = (96.0 / 480.0) * np.eye(48) + p.zeta
        assert np.max(np.abs(mean - target)) <= 5.0 * se.max()

    def test_requires_partitioned_model(self):
        cfg = ensembles.EnsembleConfig(n=8, t=64, m=16,
                                       model=models.identity(8))
        with pytest.raises(DimensionMismatch):
            ensembles.sample_matrix(cfg, "two-channel", 0)


class TestPositivity:
    @pytest.mark.parametrize("kind,cfg_kwargs", [
        ("woe", dict(n=40, t=20)),
        ("cwoe", dict(n=24, t=48, model_c=0.6)),
        ("two-channel", dict(n=16, t=96, m=32, banded=True)),
    ])
    def test_sampled_matrices_psd(self, kind, cfg_kwargs):
        model = None
        if cfg_kwargs.pop("banded", False):
            model = models.banded_partitioned(cfg_kwargs["n"],
                                              cfg_kwargs["m"], 0.5, 0.5, 0.05)
        c = cfg_kwargs.pop("model_c", None)
        if c is not None:
            model = models.exponential(cfg_kwargs["n"], c)
        cfg = ensembles.EnsembleConfig(model=model, members=3, seed=6,
                                       **cfg_kwargs)
        for member in range(3):
            ev = ensembles.spectrum(cfg, kind, member).eigenvalues
            assert ev.min() >= -1e-9 * max(ev.max(), 1.0)

    def test_spectrum_sorted(self):
        cfg = ensembles.EnsembleConfig(n=32, t=64, members=1, seed=7)
        ev = ensembles.spectrum(cfg, "woe", 0).eigenvalues
        assert np.all(np.diff(ev) >= 0)


class TestIdentities:
    def test_identity_traces(self):
        cfg = ensembles.EnsembleConfig(n=16, t=32, members=400, seed=10)
        est, ana, se = ensembles.verify_identity(1, np.eye(32), np.eye(16),
                                                 cfg)
        assert ana == pytest.approx(1.0)
        assert abs(est - ana) <= 4.0 * se

    def test_square_case_gives_sigma_squared(self):
        cfg = ensembles.EnsembleConfig(n=16, t=16, sigma=1.3, members=400,
                                       seed=12)
        est, ana, se = ensembles.verify_identity(2, np.eye(16), np.eye(16),
                                                 cfg)
        assert ana == pytest.approx(1.3 ** 2)
        assert abs(est - ana) <= 4.0 * se

    @pytest.mark.parametrize("which", [1, 2, 3, 4])
    def test_random_fixed_matrices(self, which):
        rng = np.random.default_rng(77 + which)
        n, t = 32, 64
        shapes = {1: ((t, t), (n, n)), 2: ((t, n), (t, n)),
                  3: ((t, n), (n, t)), 4: ((t, n), (t, n))}
        phi = rng.standard_normal(shapes[which][0])
        psi = rng.standard_normal(shapes[which][1])
        cfg = ensembles.EnsembleConfig(n=n, t=t, members=1500, seed=11)
        est, ana, se = ensembles.verify_identity(which, phi, psi, cfg)
        assert se > 0
        assert abs(est - ana) <= 4.0 * se

    def test_shape_validation(self):
        cfg = ensembles.EnsembleConfig(n=8, t=16, members=10, seed=0)
        with pytest.raises(DimensionMismatch):
            ensembles.verify_identity(1, np.eye(7), np.eye(8), cfg)


class TestSpectraPlumbing:
    def test_eigenvalue_matrix_stacks_members(self):
        cfg = ensembles.EnsembleConfig(n=12, t=24, members=5, seed=13)
        results = ensembles.ensemble_spectra(cfg, "woe")
        stacked = ensembles.eigenvalue_matrix(results)
        assert stacked.shape == (5, 12)
        np.testing.assert_array_equal(stacked[3], results[3].eigenvalues)

    def test_unknown_kind(self):
        cfg = ensembles.EnsembleConfig(n=4, t=8)
        with pytest.raises(BadDimensions):
            ensembles.sample_matrix(cfg, "loe", 0)
