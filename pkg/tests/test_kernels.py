import numpy as np
import pytest

from extremaldep import _backend, _fallback
from extremaldep.bootstrap import make_stream, resample_indices

BACKENDS = _backend.available_backends()
compiled = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")


def sample(seed, n=822):
    rng = np.random.default_rng(seed)
    return (1 - rng.random(n)) ** -1.0, rng.random(n)


def test_backend_selected():
    assert _backend.BACKEND in BACKENDS


@compiled
class TestAgreement:
    @pytest.mark.parametrize("cone", [(0.0, 1.0), (0.3, 0.7), (0.5, 0.5), (0.0, 0.0), (0.01, 0.02)])
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_bootstrap_statistics(self, seed, cone):
        r, th = sample(seed)
        idx = resample_indices(822, 50, 200, make_stream(seed))
        got = BACKENDS["cython"].bootstrap_statistics(r, th, idx, 10, *cone)
        want = _fallback.bootstrap_statistics(r, th, idx, 10, *cone)
        for g, w in zip(got[:3], want[:3]):
            np.testing.assert_allclose(g, w, rtol=1e-12, atol=0)
        assert np.array_equal(got[3], want[3])

    def test_zero_weights(self):
        r, _ = sample(3)
        th = np.zeros(822)
        idx = resample_indices(822, 50, 20, make_stream(3))
        got = BACKENDS["cython"].bootstrap_statistics(r, th, idx, 10, 0.2, 0.8)
        want = _fallback.bootstrap_statistics(r, th, idx, 10, 0.2, 0.8)
        assert not got[3].any() and not want[3].any()
        assert np.all(np.isnan(got[1])) and np.all(np.isnan(want[1]))

    def test_ties_keep_draw_order(self):
        # equal radii with different angles: the earlier draw wins the last slot
        r = np.array([5.0, 2.0, 2.0, 1.0])
        th = np.array([0.5, 0.1, 0.9, 0.5])
        for order, expected in (([0, 1, 2, 3], 0.1), ([0, 2, 1, 3], 0.9)):
            idx = np.array([order], dtype=np.int64)
            for impl in (BACKENDS["cython"], _fallback):
                _, t, _, _ = impl.bootstrap_statistics(r, th, idx, 2, 0.0, 1.0)
                # top two are 5 (theta 0.5) and the first-drawn 2
                assert t[0] == pytest.approx(0.5 * np.log(2.5) / (0.5 + expected))

    @pytest.mark.parametrize("seed", [0, 4])
    def test_ks_scan(self, seed):
        r, _ = sample(seed)
        desc = np.sort(r)[::-1].copy()
        np.testing.assert_allclose(
            BACKENDS["cython"].ks_scan(desc, 10, 411), _fallback.ks_scan(desc, 10, 411), rtol=1e-12, atol=1e-15
        )

    def test_ks_degenerate(self):
        desc = np.full(30, 2.0)
        assert np.all(BACKENDS["cython"].ks_scan(desc, 5, 20) == 1.0)
        assert np.all(_fallback.ks_scan(desc, 5, 20) == 1.0)
