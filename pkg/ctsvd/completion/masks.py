from dataclasses import dataclass, replace
import logging
import math
import numpy as np
from typing import Optional, Tuple

from ctsvd.core.tensor import Tensor3

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ObservationMask:
    """Observed index set Omega and the observed values B on it.

    `indices` are sorted flat positions in the slice-major payload order;
    `values[n]` is B at `indices[n]`.
    """

    dims: Tuple[int, int, int]
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or min(dims) < 1:
            raise ValueError(f"Mask dims must be three positive ints, got {self.dims}")
        idx = np.asarray(self.indices, dtype=np.int64)
        vals = np.asarray(self.values, dtype=np.float64)
        if idx.ndim != 1 or vals.shape != idx.shape:
            raise ValueError(
                f"Need one value per index, got {vals.shape} values for {idx.shape} indices"
            )
        size = math.prod(dims)
        if idx.size and (idx[0] < 0 or idx[-1] >= size or np.any(np.diff(idx) <= 0)):
            raise ValueError(f"Indices must be sorted, unique and in [0, {size})")
        idx.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", vals)

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    @property
    def count(self) -> int:
        return int(self.indices.size)

    @property
    def sampling_rate(self) -> float:
        return self.count / self.size

    @property
    def omega(self) -> np.ndarray:
        """Boolean indicator of Omega with the slice-major (m3, m1, m2) layout."""
        m1, m2, m3 = self.dims
        flat = np.zeros(self.size, dtype=bool)
        flat[self.indices] = True
        return flat.reshape(m3, m1, m2)

    def observed_tensor(self) -> Tensor3:
        """B on Omega, zero elsewhere."""
        flat = np.zeros(self.size)
        flat[self.indices] = self.values
        return Tensor3.from_buffer(flat, self.dims)

    def observe(self, x: Tensor3) -> "ObservationMask":
        """Same Omega, with B taken from x."""
        if x.dims != self.dims:
            raise ValueError(f"Tensor {x.dims} does not match mask {self.dims}")
        return replace(self, values=x.ravel()[self.indices])

    def to_indicator(self) -> Tensor3:
        return Tensor3(self.omega.astype(np.float64))

    @classmethod
    def from_indicator(
        cls, indicator: Tensor3, observed: Optional[Tensor3] = None
    ) -> "ObservationMask":
        """Build from a 0/1 tensor, optionally taking B from `observed`."""
        flat = indicator.ravel()
        if not np.all((flat == 0.0) | (flat == 1.0)):
            raise ValueError("Mask payload must contain only 0.0 and 1.0")
        mask = cls(indicator.dims, np.flatnonzero(flat), np.zeros(int(flat.sum())))
        if observed is not None:
            mask = mask.observe(observed)
        return mask

    def __repr__(self):
        m1, m2, m3 = self.dims
        return f"ObservationMask({m1}x{m2}x{m3}, sr={self.sampling_rate:.3f})"


def make_mask(
    dims: Tuple[int, int, int], sampling_rate: float, seed: Optional[int] = None
) -> ObservationMask:
    """Uniform sample of floor(SR * m1 * m2 * m3) entries without replacement.

    Deterministic for a given seed. Values are zero until `observe` is called.
    """
    if not 0.0 <= sampling_rate <= 1.0:
        raise ValueError(f"Sampling rate must be in [0, 1], got {sampling_rate}")
    size = math.prod(dims)
    # round first so 0.1 * 1000 lands on 100, not 99
    count = math.floor(round(sampling_rate * size, 9))
    rng = np.random.default_rng(seed)
    indices = np.sort(rng.choice(size, size=count, replace=False))
    logger.debug("Sampled %d of %d entries (seed=%s)", count, size, seed)
    return ObservationMask(dims, indices, np.zeros(count))
