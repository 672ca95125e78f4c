import numpy as np
import pytest

from ctsvd.common.timing import StageTimes
from ctsvd.core.prox import prox_objective_gap, svt
from ctsvd.core.tensor import Tensor3, frobenius_norm
from ctsvd.core.transforms import TransformKind, TubeTransform, forward, inverse
from ctsvd.core.tsvd import spectral_singular_values, tnn

PROX_KINDS = [TransformKind.DCT_ORTHO, TransformKind.DFT]


def _random(rng, m1, m2, m3):
    return Tensor3(rng.standard_normal((m3, m1, m2)))


def _t(kind, m3):
    return TubeTransform(kind, m3)


def _soft(v, tau):
    return np.sign(v) * np.maximum(np.abs(v) - tau, 0.0)


# ---------------------------------------------------------------------------
# svt
# ---------------------------------------------------------------------------


class TestSvt:
    @pytest.mark.parametrize("z", [2.5, -2.5, 0.3, -0.3, 1.0])
    def test_scalar_soft_threshold(self, z):
        x = Tensor3(np.full((1, 1, 1), z))
        for kind in TransformKind:
            y = svt(x, 1.0, _t(kind, 1)).y
            assert y.slices[0, 0, 0] == pytest.approx(_soft(z, 1.0), abs=1e-12)

    @pytest.mark.parametrize("kind", list(TransformKind))
    def test_full_shrinkage(self, rng, kind):
        x = _random(rng, 3, 4, 5)
        tau = float(spectral_singular_values(x, _t(kind, 5)).max()) * 1.001
        res = svt(x, tau, _t(kind, 5))
        assert res.y.allclose(Tensor3.zeros(3, 4, 5), atol=1e-12)
        assert not res.singular_values.any()
        assert res.rank == 0

    def test_threshold_at_singular_value_gives_zero(self):
        x = Tensor3(np.full((1, 1, 1), 2.0))
        t = _t(TransformKind.DCT_ORTHO, 1)
        tau = float(spectral_singular_values(x, t)[0, 0])
        res = svt(x, tau, t)
        assert res.y.slices[0, 0, 0] == 0.0
        assert res.rank == 0

    def test_scalar_tubes_soft_threshold_dct_coefficients(self, rng):
        x = _random(rng, 1, 1, 12)
        t = _t(TransformKind.DCT_ORTHO, 12)
        tau = 0.5
        y = svt(x, tau, t).y
        expected = inverse(t, Tensor3(_soft(forward(t, x).slices, tau)))
        assert y.allclose(expected, atol=1e-12)

    def test_scalar_tubes_subgradient(self, rng):
        """0 in (y - z) / tau + d|.|_1 at the transformed y."""
        x = _random(rng, 1, 1, 12)
        t = _t(TransformKind.DCT_ORTHO, 12)
        tau = 0.5
        y = svt(x, tau, t).y
        ybar = forward(t, y).slices.ravel()
        grad = (ybar - forward(t, x).slices.ravel()) / tau
        nonzero = np.abs(ybar) > 1e-12
        assert np.all(np.abs(grad[nonzero] + np.sign(ybar[nonzero])) < 1e-8)
        assert np.all(np.abs(grad[~nonzero]) <= 1.0 + 1e-8)

    @pytest.mark.parametrize("kind", list(TransformKind))
    def test_zero_fixed_point(self, kind):
        zero = Tensor3.zeros(2, 3, 4)
        assert svt(zero, 0.7, _t(kind, 4)).y.equals(zero)

    @pytest.mark.parametrize("kind", list(TransformKind))
    def test_matches_matrix_svt_for_single_slice(self, rng, kind):
        x = _random(rng, 5, 4, 1)
        u, s, vh = np.linalg.svd(x.slices[0], full_matrices=False)
        expected = (u * np.maximum(s - 0.8, 0)) @ vh
        np.testing.assert_allclose(svt(x, 0.8, _t(kind, 1)).y.slices[0], expected, atol=1e-12)

    @pytest.mark.parametrize("kind", PROX_KINDS)
    def test_non_expansive(self, rng, kind):
        t = _t(kind, 5)
        for _ in range(100):
            z1, z2 = _random(rng, 3, 3, 5), _random(rng, 3, 3, 5)
            d_out = frobenius_norm(svt(z1, 0.9, t).y - svt(z2, 0.9, t).y)
            assert d_out <= frobenius_norm(z1 - z2) + 1e-10

    @pytest.mark.parametrize("kind", PROX_KINDS)
    def test_tnn_monotone_in_tau(self, rng, kind):
        z = _random(rng, 4, 4, 6)
        t = _t(kind, 6)
        norms = [tnn(svt(z, tau, t).y, t) for tau in (0.1, 0.5, 1.0, 2.0, 4.0)]
        assert all(b <= a + 1e-10 for a, b in zip(norms, norms[1:]))

    @pytest.mark.parametrize("kind", list(TransformKind))
    def test_nuclear_norm_matches_tnn(self, rng, kind):
        z = _random(rng, 4, 3, 6)
        t = _t(kind, 6)
        res = svt(z, 0.5, t)
        assert res.nuclear_norm == pytest.approx(tnn(res.y, t), rel=1e-10)

    def test_singular_values_are_shrunk(self, rng):
        z = _random(rng, 4, 3, 6)
        t = _t(TransformKind.DCT_ORTHO, 6)
        res = svt(z, 0.5, t)
        expected = np.maximum(spectral_singular_values(z, t) - 0.5, 0)
        np.testing.assert_allclose(res.singular_values, expected, atol=1e-12)
        np.testing.assert_allclose(spectral_singular_values(res.y, t), expected, atol=1e-10)

    def test_records_stage_times(self, rng):
        times = StageTimes()
        svt(_random(rng, 6, 6, 6), 0.5, _t(TransformKind.DFT, 6), times)
        assert times.svd > 0 and times.total >= times.svd

    @pytest.mark.parametrize("tau", [0.0, -1.0])
    def test_rejects_non_positive_tau(self, rng, tau):
        with pytest.raises(ValueError):
            svt(_random(rng, 2, 2, 2), tau, _t(TransformKind.DCT_ORTHO, 2))


# ---------------------------------------------------------------------------
# prox objective gap
# ---------------------------------------------------------------------------


class TestProxObjectiveGap:
    @pytest.mark.parametrize("kind", PROX_KINDS)
    def test_gap_at_output_is_zero(self, rng, kind):
        z = _random(rng, 3, 4, 5)
        t = _t(kind, 5)
        y = svt(z, 0.6, t).y
        assert prox_objective_gap(z, 0.6, y, t) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("kind", PROX_KINDS)
    def test_input_is_no_better(self, rng, kind):
        z = _random(rng, 3, 4, 5)
        assert prox_objective_gap(z, 0.6, z, _t(kind, 5)) >= 0.0

    @pytest.mark.parametrize("kind", PROX_KINDS)
    def test_random_perturbations(self, rng, kind):
        z = _random(rng, 3, 4, 5)
        t = _t(kind, 5)
        y = svt(z, 0.6, t).y
        for _ in range(100):
            candidate = y + _random(rng, 3, 4, 5) * 1e-3
            assert prox_objective_gap(z, 0.6, candidate, t) >= -1e-9

    def test_shape_mismatch(self, rng):
        with pytest.raises(ValueError):
            prox_objective_gap(
                _random(rng, 2, 2, 2), 0.5, _random(rng, 2, 3, 2), _t(TransformKind.DFT, 2)
            )
