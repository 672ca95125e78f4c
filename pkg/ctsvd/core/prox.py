from dataclasses import dataclass, field
import numpy as np
from typing import Optional

from ctsvd.common.timing import StageTimes
from ctsvd.core import transforms
from ctsvd.core.tensor import Tensor3, frobenius_norm
from ctsvd.core.transforms import TubeTransform
from ctsvd.core.tsvd import batched_svd, tnn


@dataclass(frozen=True, eq=False)
class SvtResult:
    y: Tensor3
    tau: float
    # (m3, min(m1, m2)) shrunk transform-domain singular values
    singular_values: np.ndarray = field(repr=False)
    # TNN of y under the transform that produced it
    nuclear_norm: float = 0.0

    @property
    def rank(self) -> int:
        """Tubal rank of y: most nonzero shrunk singular values in any slice."""
        return int(np.max(np.sum(self.singular_values > 0, axis=1)))


def svt(
    z: Tensor3, tau: float, t: TubeTransform, times: Optional[StageTimes] = None
) -> SvtResult:
    """Tensor singular value thresholding.

    Soft-thresholds the singular values of every `t`-domain slice by tau.
    Under dct-ortho this is the exact prox of tau * TNN-C and under dft the
    exact prox of tau * TNN-F (the 1/m3 of TNN-F cancels against the FFT
    Parseval factor). Singular values equal to tau shrink to zero.
    """
    if not tau > 0:
        raise ValueError(f"Threshold must be > 0, got {tau}")
    if t.length != z.dims[2]:
        raise ValueError(f"Transform {t} does not match tensor {z.dims}")
    times = times if times is not None else StageTimes()
    with times.stage("total"):
        with times.stage("transform"):
            spectrum = transforms.forward_half(t, z)
        with times.stage("svd"):
            u, s, vh = batched_svd(spectrum, full_matrices=False)
            shrunk = np.maximum(s - tau, 0.0)
            ys = (u * shrunk[:, None, :]) @ vh
        with times.stage("transform"):
            y = transforms.inverse_half(t, ys, overwrite=True)
    full = shrunk[transforms.half_to_full_index(t)]
    norm = float(full.sum())
    if not t.is_real:
        norm /= t.length
    return SvtResult(y, float(tau), full, norm)


def prox_objective_gap(
    z: Tensor3, tau: float, y_candidate: Tensor3, t: TubeTransform
) -> float:
    """f(y_candidate) - f(svt(z, tau).y) with f(Y) = TNN(Y) + ||Y - Z||_F^2 / (2 tau).

    Nonnegative up to rounding whenever svt is the exact prox of TNN under
    `t` (dct-ortho and dft).
    """
    if y_candidate.dims != z.dims:
        raise ValueError(f"Dimension mismatch: {y_candidate.dims} vs {z.dims}")

    def objective(y: Tensor3) -> float:
        return tnn(y, t) + frobenius_norm(y - z) ** 2 / (2.0 * tau)

    return objective(y_candidate) - objective(svt(z, tau, t).y)
