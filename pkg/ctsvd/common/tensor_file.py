"""TensorFile container: "T3F1", three uint64 dims, float64 payload.

All fields little-endian. The payload is slice-major (frontal slice k
contiguous), row-major within a slice, i.e. exactly `Tensor3.ravel()`.
Masks use the same container with 0.0/1.0 values. Files are opened with
fsspec, so any fsspec URL works.
"""

import fsspec
import logging
import math
import numpy as np
import struct
from typing import Optional

from ctsvd.common.errors import TensorFileError
from ctsvd.completion.masks import ObservationMask
from ctsvd.core.tensor import Tensor3

logger = logging.getLogger(__name__)

MAGIC = b"T3F1"
HEADER = struct.Struct("<4sQQQ")
PAYLOAD_DTYPE = np.dtype("<f8")


def encode_tensor(x: Tensor3) -> bytes:
    m1, m2, m3 = x.dims
    return HEADER.pack(MAGIC, m1, m2, m3) + x.ravel().astype(PAYLOAD_DTYPE).tobytes()


def decode_tensor(raw: bytes) -> Tensor3:
    if len(raw) < HEADER.size:
        raise TensorFileError(f"File too short for header: {len(raw)} bytes")
    magic, m1, m2, m3 = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise TensorFileError(f"Bad magic {magic!r}, expected {MAGIC!r}")
    if min(m1, m2, m3) < 1:
        raise TensorFileError(f"Dims must be positive, got ({m1}, {m2}, {m3})")
    expected = math.prod((m1, m2, m3)) * PAYLOAD_DTYPE.itemsize
    got = len(raw) - HEADER.size
    if got != expected:
        raise TensorFileError(
            f"Payload is {got} bytes, header ({m1}, {m2}, {m3}) needs {expected}"
        )
    data = np.frombuffer(raw, dtype=PAYLOAD_DTYPE, offset=HEADER.size)
    return Tensor3.from_buffer(data.astype(np.float64), (m1, m2, m3))


def read_tensor(url: str) -> Tensor3:
    with fsspec.open(url, "rb") as f:
        raw = f.read()
    x = decode_tensor(raw)
    logger.debug("Read %s from %s", x, url)
    return x


def write_tensor(url: str, x: Tensor3):
    with fsspec.open(url, "wb") as f:
        f.write(encode_tensor(x))
    logger.debug("Wrote %s to %s", x, url)


def read_mask(url: str, observed: Optional[Tensor3] = None) -> ObservationMask:
    """Read a 0/1 mask file, optionally attaching B from `observed`."""
    indicator = read_tensor(url)
    if observed is not None and indicator.dims != observed.dims:
        raise ValueError(f"Mask {indicator.dims} does not match tensor {observed.dims}")
    try:
        return ObservationMask.from_indicator(indicator, observed)
    except ValueError as e:
        raise TensorFileError(f"{url}: {e}") from e


def write_mask(url: str, mask: ObservationMask):
    write_tensor(url, mask.to_indicator())
