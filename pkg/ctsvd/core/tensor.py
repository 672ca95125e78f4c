from dataclasses import dataclass
import numpy as np
from typing import Sequence, Tuple, Union


@dataclass(frozen=True, eq=False)
class Tensor3:
    """Dense real third-order tensor, stored slice-major.

    `slices` has shape (m3, m1, m2): frontal slice k is `slices[k]`,
    contiguous and row-major. The array is copied on construction and
    marked read-only, so a Tensor3 behaves as a value.
    """

    slices: np.ndarray

    _dtype = np.float64

    def __post_init__(self):
        arr = np.asarray(self.slices)
        if np.iscomplexobj(arr) and not np.issubdtype(self._dtype, np.complexfloating):
            raise TypeError("Tensor3 holds real data; use ComplexTensor3")
        if arr.ndim != 3:
            raise ValueError(f"Expected a 3-d slice stack, got shape {arr.shape}")
        if min(arr.shape) < 1:
            raise ValueError(f"All dims must be >= 1, got {arr.shape}")
        arr = np.array(arr, dtype=self._dtype, order="C", copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "slices", arr)

    @property
    def dims(self) -> Tuple[int, int, int]:
        m3, m1, m2 = self.slices.shape
        return (m1, m2, m3)

    @property
    def size(self) -> int:
        return self.slices.size

    @classmethod
    def wrap(cls, arr: np.ndarray) -> "Tensor3":
        """Take ownership of a freshly computed slice stack without copying.

        The caller must not write to `arr` afterwards. Non-contiguous or
        differently typed input is still copied.
        """
        if np.iscomplexobj(arr) and not np.issubdtype(cls._dtype, np.complexfloating):
            raise TypeError("Tensor3 holds real data; use ComplexTensor3")
        arr = np.ascontiguousarray(arr, dtype=cls._dtype)
        if arr.ndim != 3:
            raise ValueError(f"Expected a 3-d slice stack, got shape {arr.shape}")
        if min(arr.shape) < 1:
            raise ValueError(f"All dims must be >= 1, got {arr.shape}")
        arr.setflags(write=False)
        obj = cls.__new__(cls)
        object.__setattr__(obj, "slices", arr)
        return obj

    @classmethod
    def zeros(cls, m1: int, m2: int, m3: int) -> "Tensor3":
        return cls(np.zeros((m3, m1, m2)))

    @classmethod
    def from_slices(cls, slices: Sequence[np.ndarray]) -> "Tensor3":
        """Build from a sequence of m3 frontal slices, each m1 x m2."""
        shapes = {np.shape(s) for s in slices}
        if len(shapes) != 1:
            raise ValueError(f"Frontal slices differ in shape: {sorted(shapes)}")
        return cls(np.stack([np.asarray(s) for s in slices]))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Tensor3":
        """Build from an array indexed as X[i, j, k] (m1 x m2 x m3)."""
        arr = np.asarray(arr)
        if arr.ndim != 3:
            raise ValueError(f"Expected an m1 x m2 x m3 array, got shape {arr.shape}")
        return cls(np.moveaxis(arr, 2, 0))

    @classmethod
    def from_buffer(cls, data: np.ndarray, dims: Tuple[int, int, int]) -> "Tensor3":
        """Build from a flat slice-major payload of length m1*m2*m3."""
        m1, m2, m3 = dims
        data = np.asarray(data)
        if data.size != m1 * m2 * m3:
            raise ValueError(
                f"Payload has {data.size} values, dims {dims} need {m1 * m2 * m3}"
            )
        return cls(data.reshape(m3, m1, m2))

    def to_array(self) -> np.ndarray:
        """Return a writable copy indexed as X[i, j, k]."""
        return np.moveaxis(self.slices, 0, 2).copy()

    def ravel(self) -> np.ndarray:
        """Slice-major flat payload."""
        return self.slices.ravel()

    def equals(self, other: "Tensor3") -> bool:
        return self.dims == other.dims and bool(np.array_equal(self.slices, other.slices))

    def allclose(self, other: "Tensor3", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        return self.dims == other.dims and bool(
            np.allclose(self.slices, other.slices, rtol=rtol, atol=atol)
        )

    def where(self, mask: np.ndarray, other: "Tensor3") -> "Tensor3":
        """Entries of self where `mask` (slice-major bool) holds, else other."""
        _check_same_dims(self, other)
        return type(self)(np.where(mask, self.slices, other.slices))

    def _binary(self, other, op):
        if isinstance(other, Tensor3):
            _check_same_dims(self, other)
            result = op(self.slices, other.slices)
        else:
            result = op(self.slices, other)
        if np.iscomplexobj(result):
            return ComplexTensor3(result)
        return type(self)(result)

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, scalar: float):
        if isinstance(scalar, Tensor3):
            raise TypeError("Use t_product for tensor-tensor products")
        return self._binary(scalar, np.multiply)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float):
        return self._binary(scalar, np.divide)

    def __neg__(self):
        return type(self)(-self.slices)

    def __repr__(self):
        m1, m2, m3 = self.dims
        return f"{type(self).__name__}({m1}x{m2}x{m3})"


@dataclass(frozen=True, eq=False)
class ComplexTensor3(Tensor3):
    """Complex tensor with the same slice-major layout (DFT domain)."""

    _dtype = np.complex128


@dataclass(frozen=True)
class BlockVector:
    """The block column [X^(1); X^(2); ...; X^(m3)] of unfold."""

    blocks: Tuple[np.ndarray, ...]

    @property
    def m3(self) -> int:
        return len(self.blocks)

    def as_matrix(self) -> np.ndarray:
        """The stacked (m1*m3) x m2 matrix."""
        return np.vstack(self.blocks)

    @classmethod
    def from_matrix(cls, mat: np.ndarray, m3: int) -> "BlockVector":
        mat = np.asarray(mat)
        if mat.ndim != 2 or mat.shape[0] % m3 != 0:
            raise ValueError(f"Cannot split a {mat.shape} matrix into {m3} blocks")
        return cls(tuple(np.split(mat, m3, axis=0)))


AnyTensor = Union[Tensor3, ComplexTensor3]


def _check_same_dims(a: Tensor3, b: Tensor3):
    if a.dims != b.dims:
        raise ValueError(f"Dimension mismatch: {a.dims} vs {b.dims}")


def _check_index(name: str, value: int, upper: int):
    if not 0 <= value < upper:
        raise IndexError(f"{name}={value} out of range [0, {upper})")


def frontal_slice(x: Tensor3, k: int) -> np.ndarray:
    """The k-th frontal slice (0-based) as an m1 x m2 copy."""
    _check_index("k", k, x.dims[2])
    return x.slices[k].copy()


def tube(x: Tensor3, i: int, j: int) -> np.ndarray:
    """The (i, j) tube, length m3."""
    m1, m2, _ = x.dims
    _check_index("i", i, m1)
    _check_index("j", j, m2)
    return x.slices[:, i, j].copy()


def unfold(x: Tensor3) -> BlockVector:
    return BlockVector(tuple(s.copy() for s in x.slices))


def fold(b: BlockVector) -> Tensor3:
    if b.m3 == 0:
        raise ValueError("Cannot fold an empty block vector")
    shapes = {blk.shape for blk in b.blocks}
    if len(shapes) != 1:
        raise ValueError(f"Blocks differ in shape: {sorted(shapes)}")
    stacked = np.stack(b.blocks)
    if np.iscomplexobj(stacked):
        return ComplexTensor3(stacked)
    return Tensor3(stacked)


def frobenius_norm(x: Tensor3) -> float:
    return float(np.linalg.norm(x.slices.ravel()))


def identity_tensor(n: int, m3: int) -> Tensor3:
    """First frontal slice I_n, all other slices zero."""
    slices = np.zeros((m3, n, n))
    slices[0] = np.eye(n)
    return Tensor3(slices)


def t_transpose(x: Tensor3, periodic: bool = False) -> Tensor3:
    """Tensor transpose.

    Every frontal slice is transposed. With `periodic` (the DFT algebra)
    slices 2..m3 are also reversed, so that the Fourier slices of the
    result are the conjugate transposes of the Fourier slices of x.
    """
    out = np.swapaxes(x.slices, 1, 2)
    if periodic and out.shape[0] > 1:
        out = np.concatenate([out[:1], out[:0:-1]])
    if np.iscomplexobj(out):
        return ComplexTensor3(np.conj(out))
    return Tensor3(out)
