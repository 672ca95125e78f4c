import numpy as np
import pytest

from ctsvd.core.tensor import (
    BlockVector,
    ComplexTensor3,
    Tensor3,
    fold,
    frobenius_norm,
    frontal_slice,
    identity_tensor,
    t_transpose,
    tube,
    unfold,
)


def _random(rng, m1, m2, m3):
    return Tensor3(rng.standard_normal((m3, m1, m2)))


# ---------------------------------------------------------------------------
# Tensor3 construction
# ---------------------------------------------------------------------------


class TestTensor3:
    def test_dims_are_m1_m2_m3(self, example_tensor):
        assert example_tensor.dims == (2, 2, 2)
        assert example_tensor.size == 8

    def test_from_array_uses_ijk_indexing(self, rng):
        arr = rng.standard_normal((3, 4, 5))
        x = Tensor3.from_array(arr)
        assert x.dims == (3, 4, 5)
        assert x.slices[2, 1, 3] == arr[1, 3, 2]
        np.testing.assert_array_equal(x.to_array(), arr)

    def test_from_buffer_is_slice_major(self):
        x = Tensor3.from_buffer(np.arange(8.0), (2, 2, 2))
        np.testing.assert_array_equal(x.slices[1], [[4.0, 5.0], [6.0, 7.0]])
        np.testing.assert_array_equal(x.ravel(), np.arange(8.0))

    def test_from_buffer_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            Tensor3.from_buffer(np.arange(7.0), (2, 2, 2))

    def test_data_is_read_only_copy(self):
        arr = np.zeros((2, 2, 2))
        x = Tensor3(arr)
        arr[0, 0, 0] = 1.0
        assert x.slices[0, 0, 0] == 0.0
        with pytest.raises(ValueError):
            x.slices[0, 0, 0] = 1.0

    def test_wrap_takes_ownership(self):
        arr = np.arange(8.0).reshape(2, 2, 2)
        x = Tensor3.wrap(arr)
        assert np.shares_memory(x.slices, arr)
        assert not x.slices.flags.writeable
        assert x.equals(Tensor3(np.arange(8.0).reshape(2, 2, 2)))

    def test_wrap_copies_strided_input(self):
        arr = np.arange(8.0).reshape(2, 2, 2)
        x = Tensor3.wrap(np.swapaxes(arr, 1, 2))
        assert not np.shares_memory(x.slices, arr)
        assert x.slices.flags.c_contiguous

    def test_wrap_rejects_complex_data(self):
        with pytest.raises(TypeError):
            Tensor3.wrap(np.ones((1, 1, 1), dtype=complex))
        with pytest.raises(ValueError):
            Tensor3.wrap(np.zeros((2, 2)))

    def test_rejects_complex_data(self):
        with pytest.raises(TypeError):
            Tensor3(np.ones((1, 1, 1), dtype=complex))

    def test_complex_tensor_accepts_complex_data(self):
        z = ComplexTensor3(np.ones((2, 1, 1)) * (1 + 2j))
        assert z.slices.dtype == np.complex128

    @pytest.mark.parametrize("shape", [(2, 2), (0, 2, 2), (2, 0, 1)])
    def test_rejects_bad_shapes(self, shape):
        with pytest.raises(ValueError):
            Tensor3(np.zeros(shape))

    def test_elementwise_algebra(self, example_tensor):
        doubled = example_tensor * 2.0
        assert (example_tensor + example_tensor).equals(doubled)
        assert (doubled - example_tensor).equals(example_tensor)
        assert (2.0 * example_tensor).equals(doubled)
        assert (doubled / 2.0).equals(example_tensor)
        assert (-example_tensor + example_tensor).equals(Tensor3.zeros(2, 2, 2))

    def test_tensor_times_tensor_is_an_error(self, example_tensor):
        with pytest.raises(TypeError):
            example_tensor * example_tensor

    def test_dimension_mismatch(self, example_tensor):
        with pytest.raises(ValueError):
            example_tensor + Tensor3.zeros(2, 2, 3)

    def test_where(self, example_tensor):
        mask = np.zeros((2, 2, 2), dtype=bool)
        mask[1, 0, 1] = True
        out = Tensor3.zeros(2, 2, 2).where(mask, example_tensor)
        assert out.slices[1, 0, 1] == 0.0
        assert out.slices[0, 1, 1] == 4.0


# ---------------------------------------------------------------------------
# slice and tube accessors
# ---------------------------------------------------------------------------


class TestAccessors:
    def test_frontal_slice(self, example_tensor):
        np.testing.assert_array_equal(frontal_slice(example_tensor, 1), [[5, 6], [7, 8]])

    def test_single_slice_is_whole_tensor(self, rng):
        x = _random(rng, 3, 4, 1)
        np.testing.assert_array_equal(frontal_slice(x, 0), x.slices[0])

    def test_slices_reassemble_data(self, rng):
        x = _random(rng, 3, 4, 5)
        stacked = np.concatenate([frontal_slice(x, k).ravel() for k in range(5)])
        np.testing.assert_array_equal(stacked, x.ravel())

    def test_tube(self, example_tensor):
        np.testing.assert_array_equal(tube(example_tensor, 0, 0), [1.0, 5.0])

    def test_constant_tube(self):
        x = Tensor3(np.full((4, 2, 3), 7.5))
        np.testing.assert_array_equal(tube(x, 1, 2), [7.5] * 4)

    def test_tube_agrees_with_slices(self, rng):
        x = _random(rng, 3, 4, 5)
        for i in range(3):
            for j in range(4):
                expected = [frontal_slice(x, k)[i, j] for k in range(5)]
                np.testing.assert_array_equal(tube(x, i, j), expected)

    @pytest.mark.parametrize("k", [-1, 2, 10])
    def test_slice_out_of_range(self, example_tensor, k):
        with pytest.raises(IndexError):
            frontal_slice(example_tensor, k)

    @pytest.mark.parametrize("i, j", [(-1, 0), (0, 2), (2, 0)])
    def test_tube_out_of_range(self, example_tensor, i, j):
        with pytest.raises(IndexError):
            tube(example_tensor, i, j)

    def test_returned_slice_is_a_copy(self, example_tensor):
        s = frontal_slice(example_tensor, 0)
        s[0, 0] = 100.0
        assert example_tensor.slices[0, 0, 0] == 1.0


# ---------------------------------------------------------------------------
# fold / unfold
# ---------------------------------------------------------------------------


class TestFold:
    def test_unfold_layout(self, example_tensor):
        b = unfold(example_tensor)
        assert b.m3 == 2
        np.testing.assert_array_equal(
            b.as_matrix(), [[1, 2], [3, 4], [5, 6], [7, 8]]
        )

    def test_single_block(self, rng):
        x = _random(rng, 2, 3, 1)
        assert unfold(x).m3 == 1

    def test_round_trip_is_exact(self, rng):
        x = _random(rng, 4, 3, 6)
        assert fold(unfold(x)).equals(x)
        b = unfold(x)
        again = unfold(fold(b))
        for blk, other in zip(b.blocks, again.blocks):
            np.testing.assert_array_equal(blk, other)

    def test_from_matrix(self, example_tensor):
        mat = unfold(example_tensor).as_matrix()
        assert fold(BlockVector.from_matrix(mat, 2)).equals(example_tensor)

    def test_fold_rejects_mismatched_blocks(self):
        with pytest.raises(ValueError):
            fold(BlockVector((np.zeros((2, 2)), np.zeros((2, 3)))))

    def test_from_matrix_rejects_uneven_split(self):
        with pytest.raises(ValueError):
            BlockVector.from_matrix(np.zeros((5, 2)), 2)


# ---------------------------------------------------------------------------
# norms, identity, transpose
# ---------------------------------------------------------------------------


class TestNormsAndTranspose:
    def test_zero_norm(self):
        assert frobenius_norm(Tensor3.zeros(3, 3, 3)) == 0.0

    def test_example_norm(self, example_tensor):
        assert frobenius_norm(example_tensor) == pytest.approx(np.sqrt(204.0), rel=1e-15)

    def test_norm_is_sum_over_slices(self, rng):
        x = _random(rng, 20, 20, 20)
        per_slice = sum(np.linalg.norm(x.slices[k]) ** 2 for k in range(20))
        assert frobenius_norm(x) ** 2 == pytest.approx(per_slice, rel=1e-12)

    def test_identity_tensor(self):
        eye = identity_tensor(3, 4)
        np.testing.assert_array_equal(eye.slices[0], np.eye(3))
        assert not eye.slices[1:].any()

    def test_transpose_each_slice(self, rng):
        x = _random(rng, 2, 3, 4)
        xt = t_transpose(x)
        assert xt.dims == (3, 2, 4)
        for k in range(4):
            np.testing.assert_array_equal(xt.slices[k], x.slices[k].T)

    def test_periodic_transpose_reverses_later_slices(self, rng):
        x = _random(rng, 2, 3, 4)
        xt = t_transpose(x, periodic=True)
        np.testing.assert_array_equal(xt.slices[0], x.slices[0].T)
        np.testing.assert_array_equal(xt.slices[1], x.slices[3].T)
        np.testing.assert_array_equal(xt.slices[3], x.slices[1].T)

    def test_transpose_twice_is_identity(self, rng):
        x = _random(rng, 2, 3, 5)
        for periodic in (False, True):
            assert t_transpose(t_transpose(x, periodic), periodic).equals(x)
