"""Transform-domain tensor algebra: t-product, t-SVD, ranks and nuclear norms.

All work happens on the slice stack after a tube transform. For the DCT
kinds the t-product is the block Toeplitz-plus-Hankel product, realised as
slice-wise matrix products in the dct-diag domain. For the DFT only the
m3 // 2 + 1 non-redundant Fourier slices are factored; the rest are their
conjugates.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging
import numpy as np
from typing import Optional, Tuple

from ctsvd.common import config
from ctsvd.common.errors import NumericalError
from ctsvd.common.timing import StageTimes
from ctsvd.core import transforms
from ctsvd.core.tensor import Tensor3, t_transpose
from ctsvd.core.transforms import TransformKind, TubeTransform

logger = logging.getLogger(__name__)

EPS = 2.0**-52


@dataclass(frozen=True, eq=False)
class TSvdFactors:
    u: Tensor3
    s: Tensor3
    v: Tensor3
    transform: TubeTransform
    # (m3, min(m1, m2)) transform-domain singular values, descending per slice
    singular_values: np.ndarray = field(repr=False)

    def reconstruct(self) -> Tensor3:
        """U * S * V^T under the factorization's transform."""
        us = t_product(self.u, self.s, self.transform)
        return t_product(us, tensor_transpose(self.v, self.transform), self.transform)


@dataclass(frozen=True)
class MultiRank:
    ranks: Tuple[int, ...]

    @property
    def tubal_rank(self) -> int:
        return max(self.ranks, default=0)

    def to_dict(self) -> dict:
        return {"ranks": list(self.ranks), "tubal_rank": self.tubal_rank}


def tensor_transpose(x: Tensor3, t: TubeTransform) -> Tensor3:
    return t_transpose(x, periodic=t.kind is TransformKind.DFT)


def _check_transform(t: TubeTransform, x: Tensor3):
    if t.length != x.dims[2]:
        raise ValueError(f"Transform {t} does not match tensor {x.dims}")


def batched_svd(stack: np.ndarray, full_matrices: bool = True, compute_uv: bool = True):
    """np.linalg.svd over the leading axis, split across TSVD_THREADS threads."""
    if not np.all(np.isfinite(stack)):
        raise NumericalError("Non-finite values in SVD input")
    n_threads = min(config.threads(), len(stack))
    try:
        if n_threads <= 1:
            return np.linalg.svd(stack, full_matrices=full_matrices, compute_uv=compute_uv)
        chunks = np.array_split(np.arange(len(stack)), n_threads)
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            parts = list(
                pool.map(
                    lambda idx: np.linalg.svd(
                        stack[idx], full_matrices=full_matrices, compute_uv=compute_uv
                    ),
                    chunks,
                )
            )
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"SVD did not converge: {e}") from e
    if not compute_uv:
        return np.concatenate(parts)
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(3))


def _fix_signs(u: np.ndarray, vh: np.ndarray):
    """Make the largest-magnitude entry of each U column real positive, in place.

    The matching rows of vh absorb the conjugate phase so U diag(s) vh is
    unchanged.
    """
    r = min(u.shape[-1], vh.shape[-2])
    idx = np.argmax(np.abs(u), axis=1)
    pivot = np.take_along_axis(u, idx[:, None, :], axis=1)[:, 0, :]
    mag = np.abs(pivot)
    phase = np.where(mag > 0, pivot / np.where(mag > 0, mag, 1.0), 1.0)
    u /= phase[:, None, :]
    vh[:, :r, :] *= phase[:, :r, None]
    return u, vh


def _spectral_svd(
    t: TubeTransform, spectrum: np.ndarray, full_matrices: bool, times: StageTimes
):
    """SVD of the non-redundant spectral slices with signs fixed.

    Self-conjugate DFT slices are real for real input and get a real SVD.
    """
    with times.stage("svd"):
        if t.is_real:
            u, s, vh = batched_svd(spectrum, full_matrices=full_matrices)
            return _fix_signs(u, vh) + (s,)
        sc = transforms.self_conjugate_slices(t)
        rest = np.setdiff1d(np.arange(len(spectrum)), sc)
        u_r, s_r, vh_r = batched_svd(spectrum[sc].real, full_matrices=full_matrices)
        u = np.empty((len(spectrum),) + u_r.shape[1:], dtype=complex)
        vh = np.empty((len(spectrum),) + vh_r.shape[1:], dtype=complex)
        s = np.empty((len(spectrum),) + s_r.shape[1:])
        u[sc], s[sc], vh[sc] = u_r, s_r, vh_r
        if len(rest):
            u[rest], s[rest], vh[rest] = batched_svd(spectrum[rest], full_matrices=full_matrices)
        u, vh = _fix_signs(u, vh)
        u[sc], vh[sc] = u[sc].real, vh[sc].real
        return u, vh, s


def _diag_stack(s: np.ndarray, m1: int, m2: int) -> np.ndarray:
    out = np.zeros((len(s), m1, m2))
    r = s.shape[1]
    out[:, np.arange(r), np.arange(r)] = s
    return out


def t_product(x: Tensor3, y: Tensor3, t: TubeTransform) -> Tensor3:
    """X * Y as slice-wise matrix products in the transform's algebra."""
    m1, m2, m3 = x.dims
    p2, _, p3 = y.dims
    if m2 != p2 or m3 != p3:
        raise ValueError(f"Cannot t-multiply {x.dims} by {y.dims}")
    _check_transform(t, x)
    at = transforms.algebra_transform(t)
    xs = transforms.forward_half(at, x)
    ys = transforms.forward_half(at, y)
    return transforms.inverse_half(at, xs @ ys, overwrite=True)


def t_svd(x: Tensor3, t: TubeTransform, times: Optional[StageTimes] = None) -> TSvdFactors:
    """Full t-SVD X = U * S * V^T.

    The SVD runs on the slices of `t`; U and V are assembled in the
    algebra domain and S is the inverse `t` transform of the singular
    values, so the factorization holds under both DCT normalisations.
    """
    _check_transform(t, x)
    times = times if times is not None else StageTimes()
    m1, m2, _ = x.dims
    at = transforms.algebra_transform(t)
    with times.stage("total"):
        with times.stage("transform"):
            spectrum = transforms.forward_half(t, x)
        u, vh, s = _spectral_svd(t, spectrum, full_matrices=True, times=times)
        v = np.swapaxes(vh, 1, 2)
        if not t.is_real:
            v = np.conj(v)
        with times.stage("transform"):
            u_t, v_t = transforms.inverse_half_pair(at, u, v, overwrite=True)
            s_tubes = transforms.inverse_half(t, s[:, None, :])
            s_t = Tensor3.wrap(_diag_stack(s_tubes.slices[:, 0, :], m1, m2))
    full = s[transforms.half_to_full_index(t)]
    logger.debug(
        "t-SVD %s under %s: transform %.4f s, svd %.4f s, total %.4f s",
        x,
        t,
        times.transform,
        times.svd,
        times.total,
    )
    return TSvdFactors(u_t, s_t, v_t, t, full)


def spectral_singular_values(x: Tensor3, t: TubeTransform) -> np.ndarray:
    """(m3, min(m1, m2)) singular values of the `t`-domain slices."""
    _check_transform(t, x)
    half = transforms.forward_half(t, x)
    s = batched_svd(half, full_matrices=False, compute_uv=False)
    return s[transforms.half_to_full_index(t)]


def multi_rank(x: Tensor3, t: TubeTransform, tol: Optional[float] = None) -> MultiRank:
    """Per-slice numerical rank: singular values above tol * sigma_max(slice).

    `tol` defaults to max(m1, m2) * 2**-52.
    """
    m1, m2, _ = x.dims
    if tol is None:
        tol = max(m1, m2) * EPS
    if tol < 0:
        raise ValueError(f"Rank tolerance must be >= 0, got {tol}")
    s = spectral_singular_values(x, t)
    top = s[:, :1]
    ranks = np.sum((s > tol * top) & (top > 0), axis=1)
    return MultiRank(tuple(int(r) for r in ranks))


def tnn(x: Tensor3, t: TubeTransform) -> float:
    """Tensor nuclear norm: sum of spectral slice nuclear norms.

    dft carries the 1/m3 factor that compensates the unnormalized FFT.
    """
    _check_transform(t, x)
    half = transforms.forward_half(t, x)
    s = batched_svd(half, full_matrices=False, compute_uv=False)
    total = float(np.sum(s.sum(axis=1) * transforms.half_multiplicity(t)))
    if t.kind is TransformKind.DFT:
        return total / t.length
    return total


def _algebra_slices(q: Tensor3, t: TubeTransform) -> np.ndarray:
    _check_transform(t, q)
    return transforms.forward_half(transforms.algebra_transform(t), q)


def is_orthogonal(q: Tensor3, t: TubeTransform, tol: float = 1e-10) -> bool:
    """Q * Q^T = Q^T * Q = I, checked on the algebra-domain slices."""
    m1, m2, _ = q.dims
    if m1 != m2:
        raise ValueError(f"Orthogonality needs square slices, got {q.dims}")
    qs = _algebra_slices(q, t)
    qh = np.conj(np.swapaxes(qs, 1, 2))
    eye = np.eye(m1)
    err = max(np.max(np.abs(qs @ qh - eye)), np.max(np.abs(qh @ qs - eye)))
    return bool(err <= tol)


def is_f_diagonal(s: Tensor3, t: TubeTransform, tol: float = 1e-10) -> bool:
    """Every `t`-domain slice is diagonal up to tol * max(1, max |entry|)."""
    _check_transform(t, s)
    spectrum = transforms.forward_half(t, s)
    m1, m2, _ = s.dims
    off = np.ones((m1, m2), dtype=bool)
    r = min(m1, m2)
    off[np.arange(r), np.arange(r)] = False
    scale = max(1.0, float(np.max(np.abs(spectrum))))
    off_max = float(np.max(np.abs(spectrum[:, off]))) if off.any() else 0.0
    return off_max <= tol * scale
