"""Invertible transforms applied along every tube (mode 3).

Three kinds are supported:

- dct-ortho: orthonormal DCT-II. Preserves the Frobenius norm, so the
  nuclear norm of its slices (TNN-C) has an exact prox.
- dct-diag: orthonormal DCT-II divided elementwise by w = C e1. This is the
  scaling under which bdiag(X_bar) = (C kron I) btph(A) (C^T kron I) holds
  exactly, i.e. the domain where the DCT t-product is a slice-wise product.
- dft: unnormalized DFT (numpy/MATLAB `fft` convention).
"""

from dataclasses import dataclass
from enum import Enum
import logging
import numpy as np
import scipy.fft
from typing import Tuple

from ctsvd.common import config
from ctsvd.common.errors import ConjugateSymmetryError
from ctsvd.core.tensor import ComplexTensor3, Tensor3, frobenius_norm

logger = logging.getLogger(__name__)

# Limit on the imaginary part left by an inverse DFT, relative to
# max(1, max |real part|).
IMAG_RESIDUE_TOL = 1e-10


class TransformKind(Enum):
    DCT_ORTHO = "dct-ortho"
    DCT_DIAG = "dct-diag"
    DFT = "dft"

    @property
    def is_real(self) -> bool:
        return self is not TransformKind.DFT


@dataclass(frozen=True)
class TubeTransform:
    kind: TransformKind
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"Transform length must be >= 1, got {self.length}")

    @classmethod
    def for_tensor(cls, kind: TransformKind, x: Tensor3) -> "TubeTransform":
        return cls(TransformKind(kind), x.dims[2])

    @property
    def is_real(self) -> bool:
        return self.kind.is_real

    def __str__(self):
        return f"{self.kind.value}[{self.length}]"


def algebra_transform(t: TubeTransform) -> TubeTransform:
    """The transform in which the t-product is a slice-wise matrix product.

    Both DCT kinds share the block Toeplitz-plus-Hankel product, realised in
    the dct-diag domain. The DFT is its own algebra.
    """
    if t.kind is TransformKind.DFT:
        return t
    return TubeTransform(TransformKind.DCT_DIAG, t.length)


def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II matrix C with C[j, k] = sqrt(2/n) c_j cos(pi j (2k+1) / 2n)."""
    if n < 1:
        raise ValueError(f"DCT size must be >= 1, got {n}")
    j = np.arange(n)[:, None]
    k = np.arange(n)[None, :]
    c = np.sqrt(2.0 / n) * np.cos(np.pi * j * (2 * k + 1) / (2 * n))
    c[0, :] /= np.sqrt(2.0)
    return c


def dft_matrix(n: int) -> np.ndarray:
    """Unnormalized DFT matrix F[j, k] = exp(-2 pi i j k / n)."""
    if n < 1:
        raise ValueError(f"DFT size must be >= 1, got {n}")
    jk = np.outer(np.arange(n), np.arange(n))
    return np.exp(-2j * np.pi * jk / n)


def dct_diag_weights(n: int) -> np.ndarray:
    """w = C e1: the orthonormal DCT of the first standard basis vector.

    w[0] = 1/sqrt(n), w[j] = sqrt(2/n) cos(pi j / 2n); strictly positive.
    """
    if n < 1:
        raise ValueError(f"DCT size must be >= 1, got {n}")
    j = np.arange(n)
    w = np.sqrt(2.0 / n) * np.cos(np.pi * j / (2 * n))
    w[0] = 1.0 / np.sqrt(n)
    return w


def transform_matrix(t: TubeTransform) -> np.ndarray:
    """Explicit per-tube matrix T with forward(t, x) tube = T @ tube."""
    if t.kind is TransformKind.DCT_ORTHO:
        return dct_matrix(t.length)
    if t.kind is TransformKind.DCT_DIAG:
        return dct_matrix(t.length) / dct_diag_weights(t.length)[:, None]
    return dft_matrix(t.length)


def _check_length(t: TubeTransform, x: Tensor3):
    if t.length != x.dims[2]:
        raise ValueError(
            f"Transform length {t.length} does not match tube length {x.dims[2]}"
        )


def _tube_weights(n: int) -> np.ndarray:
    return dct_diag_weights(n)[:, None, None]


def _dct_forward(t: TubeTransform, data: np.ndarray) -> np.ndarray:
    out = scipy.fft.dct(data, type=2, norm="ortho", axis=0, workers=config.threads())
    if t.kind is TransformKind.DCT_DIAG:
        out /= _tube_weights(t.length)
    return out


def _dct_inverse(t: TubeTransform, data: np.ndarray, overwrite: bool = False) -> np.ndarray:
    """Inverse DCT along the tubes; dct-diag weights are applied first.

    With `overwrite` the weights are multiplied into `data` in place.
    """
    if np.iscomplexobj(data):
        raise TypeError(f"{t.kind.value} inverse expects a real tensor")
    overwrite = overwrite and data.flags.writeable and data.dtype == np.float64
    if t.kind is TransformKind.DCT_DIAG:
        w = _tube_weights(t.length)
        if overwrite:
            np.multiply(data, w, out=data)
        else:
            data = data * w
        overwrite = True
    return scipy.fft.idct(
        data,
        type=2,
        norm="ortho",
        axis=0,
        overwrite_x=overwrite,
        workers=config.threads(),
    )


def forward(t: TubeTransform, x: Tensor3) -> Tensor3:
    """Transform every tube. Real kinds return Tensor3, dft ComplexTensor3."""
    _check_length(t, x)
    if t.kind is TransformKind.DFT:
        return ComplexTensor3.wrap(
            scipy.fft.fft(x.slices, axis=0, workers=config.threads())
        )
    return Tensor3.wrap(_dct_forward(t, x.slices))


def inverse(t: TubeTransform, xbar: Tensor3) -> Tensor3:
    """Exact inverse of `forward`; always returns a real Tensor3.

    For dft the imaginary residue is truncated when it is below
    IMAG_RESIDUE_TOL * max(1, max |real|); larger residue means the input
    was not conjugate symmetric and raises ConjugateSymmetryError.
    """
    _check_length(t, xbar)
    if t.kind is not TransformKind.DFT:
        return Tensor3.wrap(_dct_inverse(t, xbar.slices))
    out = scipy.fft.ifft(xbar.slices, axis=0, workers=config.threads())
    residue = float(np.max(np.abs(out.imag))) if out.size else 0.0
    limit = IMAG_RESIDUE_TOL * max(1.0, float(np.max(np.abs(out.real))))
    if residue > limit:
        raise ConjugateSymmetryError(residue, limit)
    logger.debug(
        "Inverse DFT of %s: dropped imaginary residue %.3e (limit %.3e)",
        t,
        residue,
        limit,
    )
    return Tensor3.wrap(out.real)


def forward_half(t: TubeTransform, x: Tensor3) -> np.ndarray:
    """Non-redundant spectrum as a raw, writable slice stack.

    For real kinds this is the full transform. For dft it is the first
    m3 // 2 + 1 Fourier slices; the rest are their conjugates.
    """
    _check_length(t, x)
    if t.kind is TransformKind.DFT:
        return scipy.fft.rfft(x.slices, axis=0, workers=config.threads())
    return _dct_forward(t, x.slices)


def inverse_half(t: TubeTransform, half: np.ndarray, overwrite: bool = False) -> Tensor3:
    """Inverse of `forward_half`. `overwrite` lets it reuse `half` as scratch."""
    if t.kind is TransformKind.DFT:
        return Tensor3.wrap(
            scipy.fft.irfft(
                half,
                n=t.length,
                axis=0,
                overwrite_x=overwrite,
                workers=config.threads(),
            )
        )
    return Tensor3.wrap(_dct_inverse(t, half, overwrite))


def inverse_half_pair(
    t: TubeTransform, a: np.ndarray, b: np.ndarray, overwrite: bool = False
) -> Tuple[Tensor3, Tensor3]:
    """Inverse of two `forward_half` stacks.

    Under the DCT kinds, real stacks of equal shape are packed side by side
    and go through a single idct call; the dct-diag weights are applied
    while packing.
    """
    packable = (
        t.kind is not TransformKind.DFT
        and a.shape == b.shape
        and not np.iscomplexobj(a)
        and not np.iscomplexobj(b)
    )
    if not packable:
        return inverse_half(t, a, overwrite), inverse_half(t, b, overwrite)
    packed = np.empty((2,) + a.shape)
    if t.kind is TransformKind.DCT_DIAG:
        w = _tube_weights(t.length)
        np.multiply(a, w, out=packed[0])
        np.multiply(b, w, out=packed[1])
    else:
        packed[0] = a
        packed[1] = b
    out = scipy.fft.idct(
        packed, type=2, norm="ortho", axis=1, overwrite_x=True, workers=config.threads()
    )
    return Tensor3.wrap(out[0]), Tensor3.wrap(out[1])


def half_multiplicity(t: TubeTransform) -> np.ndarray:
    """How many full-spectrum slices each `forward_half` slice stands for."""
    n = t.length
    if t.kind is not TransformKind.DFT:
        return np.ones(n)
    mult = np.full(n // 2 + 1, 2.0)
    mult[0] = 1.0
    if n % 2 == 0:
        mult[-1] = 1.0
    return mult


def half_to_full_index(t: TubeTransform) -> np.ndarray:
    """For each of the m3 full-spectrum slices, its `forward_half` slice."""
    k = np.arange(t.length)
    if t.kind is not TransformKind.DFT:
        return k
    return np.minimum(k, t.length - k)


def self_conjugate_slices(t: TubeTransform) -> np.ndarray:
    """Indices of `forward_half` slices that are real for real input."""
    if t.kind is not TransformKind.DFT:
        return np.arange(t.length)
    if t.length % 2 == 0 and t.length > 1:
        return np.array([0, t.length // 2])
    return np.array([0])


def parseval_check(x: Tensor3) -> Tuple[float, float]:
    """(||x||_F, ||dct-ortho(x)||_F); equal up to rounding."""
    t = TubeTransform(TransformKind.DCT_ORTHO, x.dims[2])
    return frobenius_norm(x), frobenius_norm(forward(t, x))
