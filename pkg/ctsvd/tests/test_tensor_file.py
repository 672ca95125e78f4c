import numpy as np
import pytest
import struct

from ctsvd.common.errors import TensorFileError
from ctsvd.common.tensor_file import (
    HEADER,
    MAGIC,
    decode_tensor,
    encode_tensor,
    read_mask,
    read_tensor,
    write_mask,
    write_tensor,
)
from ctsvd.completion.masks import make_mask
from ctsvd.core.tensor import Tensor3


class TestEncoding:
    def test_header_layout(self, example_tensor):
        raw = encode_tensor(example_tensor)
        assert raw[:4] == b"T3F1"
        assert raw[4:12] == (2).to_bytes(8, "little")
        assert len(raw) == 28 + 8 * 8
        assert struct.unpack_from("<d", raw, 28)[0] == 1.0
        assert struct.unpack_from("<d", raw, 28 + 7 * 8)[0] == 8.0

    def test_round_trip_is_bit_exact(self, rng):
        x = Tensor3(rng.standard_normal((3, 4, 5)) * 1e300)
        again = decode_tensor(encode_tensor(x))
        assert again.dims == (4, 5, 3)
        assert again.ravel().tobytes() == x.ravel().tobytes()

    def test_bad_magic(self, example_tensor):
        raw = b"T3F2" + encode_tensor(example_tensor)[4:]
        with pytest.raises(TensorFileError, match="magic"):
            decode_tensor(raw)

    def test_truncated_payload(self, example_tensor):
        with pytest.raises(TensorFileError):
            decode_tensor(encode_tensor(example_tensor)[:-1])

    def test_trailing_bytes(self, example_tensor):
        with pytest.raises(TensorFileError):
            decode_tensor(encode_tensor(example_tensor) + b"\0")

    def test_short_header(self):
        with pytest.raises(TensorFileError):
            decode_tensor(MAGIC + b"\0" * 4)

    def test_zero_dims(self):
        with pytest.raises(TensorFileError):
            decode_tensor(HEADER.pack(MAGIC, 0, 2, 2))


class TestFiles:
    def test_local_round_trip(self, tmp_path, rng):
        x = Tensor3(rng.standard_normal((2, 3, 3)))
        path = str(tmp_path / "x.t3f")
        write_tensor(path, x)
        assert read_tensor(path).equals(x)

    def test_fsspec_url(self, example_tensor):
        url = "memory://tensor_file_tests/example.t3f"
        write_tensor(url, example_tensor)
        assert read_tensor(url).equals(example_tensor)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_tensor(str(tmp_path / "nope.t3f"))

    def test_mask_round_trip(self, tmp_path, example_tensor):
        mask = make_mask((2, 2, 2), 0.5, seed=1)
        path = str(tmp_path / "mask.t3f")
        write_mask(path, mask)
        again = read_mask(path, example_tensor)
        np.testing.assert_array_equal(again.indices, mask.indices)
        np.testing.assert_array_equal(again.values, example_tensor.ravel()[mask.indices])

    def test_mask_payload_must_be_binary(self, tmp_path):
        path = str(tmp_path / "mask.t3f")
        write_tensor(path, Tensor3(np.full((1, 2, 2), 2.0)))
        with pytest.raises(TensorFileError):
            read_mask(path)

    def test_mask_dims_must_match(self, tmp_path, example_tensor):
        path = str(tmp_path / "mask.t3f")
        write_mask(path, make_mask((2, 2, 3), 0.5, seed=1))
        with pytest.raises(ValueError):
            read_mask(path, example_tensor)
