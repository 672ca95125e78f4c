"""Recovery quality metrics: PSNR, global SSIM, SAM and ERGAS.

Bands are frontal slices; spectra are tubes. No metric returns NaN:
identical bands give PSNR = inf, zero-norm tubes are skipped by SAM and
zero-mean bands are excluded from ERGAS.
"""

from dataclasses import dataclass, field
import logging
import math
import numpy as np
from skimage.metrics import peak_signal_noise_ratio
from typing import List, Optional, Tuple

from ctsvd.common.timing import StageTimes
from ctsvd.core.tensor import Tensor3, frobenius_norm, tube

logger = logging.getLogger(__name__)

K1 = 0.01
K2 = 0.03


def _check_shapes(ref: np.ndarray, est: np.ndarray):
    if np.shape(ref) != np.shape(est):
        raise ValueError(f"Shape mismatch: {np.shape(ref)} vs {np.shape(est)}")


def _band_peak(band: np.ndarray) -> float:
    """Maximum of the reference band; 1.0 when that is not positive."""
    peak = float(np.max(band))
    return peak if peak > 0 else 1.0


def psnr(reference: np.ndarray, estimate: np.ndarray, peak: float) -> float:
    """10 log10(m1 m2 peak^2 / ||estimate - reference||_F^2) in dB."""
    _check_shapes(reference, estimate)
    if not peak > 0:
        raise ValueError(f"Peak must be > 0, got {peak}")
    reference = np.asarray(reference, dtype=np.float64)
    estimate = np.asarray(estimate, dtype=np.float64)
    if np.array_equal(reference, estimate):
        return math.inf
    return float(peak_signal_noise_ratio(reference, estimate, data_range=peak))


def ssim_global(
    reference: np.ndarray, estimate: np.ndarray, dynamic_range: Optional[float] = None
) -> float:
    """SSIM from whole-band statistics (no sliding window).

    c1 = (K1 L)^2 and c2 = (K2 L)^2 with L the dynamic range, by default
    the reference band peak.
    """
    _check_shapes(reference, estimate)
    x = np.asarray(reference, dtype=np.float64).ravel()
    y = np.asarray(estimate, dtype=np.float64).ravel()
    if dynamic_range is None:
        dynamic_range = _band_peak(x)
    c1 = (K1 * dynamic_range) ** 2
    c2 = (K2 * dynamic_range) ** 2
    mu_x, mu_y = x.mean(), y.mean()
    var_x, var_y = x.var(), y.var()
    cov = np.mean((x - mu_x) * (y - mu_y))
    num = (2 * mu_x * mu_y + c1) * (2 * cov + c2)
    den = (mu_x**2 + mu_y**2 + c1) * (var_x + var_y + c2)
    return float(num / den)


def sam(reference: Tensor3, estimate: Tensor3) -> float:
    """Mean spectral angle between tubes, in radians.

    Tubes where either side has zero norm are skipped; 0.0 if all are.
    """
    _check_shapes(reference.slices, estimate.slices)
    m3 = reference.dims[2]
    r = reference.slices.reshape(m3, -1)
    e = estimate.slices.reshape(m3, -1)
    nr = np.linalg.norm(r, axis=0)
    ne = np.linalg.norm(e, axis=0)
    valid = (nr > 0) & (ne > 0)
    if not valid.any():
        return 0.0
    r_hat = r[:, valid] / nr[valid]
    e_hat = e[:, valid] / ne[valid]
    angles = 2.0 * np.arctan2(
        np.linalg.norm(r_hat - e_hat, axis=0), np.linalg.norm(r_hat + e_hat, axis=0)
    )
    return float(np.mean(angles))


def ergas_with_exclusions(
    reference: Tensor3, estimate: Tensor3, ratio: float = 1.0
) -> Tuple[float, List[int]]:
    """ERGAS and the indices of bands dropped for having zero reference mean."""
    _check_shapes(reference.slices, estimate.slices)
    if not ratio > 0:
        raise ValueError(f"ERGAS ratio must be > 0, got {ratio}")
    mse = np.mean((estimate.slices - reference.slices) ** 2, axis=(1, 2))
    mu = np.mean(reference.slices, axis=(1, 2))
    keep = mu != 0
    excluded = [int(b) for b in np.flatnonzero(~keep)]
    if excluded:
        logger.warning("ERGAS: excluding %d band(s) with zero mean: %s", len(excluded), excluded)
    if not keep.any():
        return 0.0, excluded
    value = 100.0 * ratio * math.sqrt(float(np.mean(mse[keep] / mu[keep] ** 2)))
    return value, excluded


def ergas(reference: Tensor3, estimate: Tensor3, ratio: float = 1.0) -> float:
    return ergas_with_exclusions(reference, estimate, ratio)[0]


def relative_error(reference: Tensor3, estimate: Tensor3) -> float:
    """||estimate - reference||_F / ||reference||_F (absolute when reference is 0)."""
    _check_shapes(reference.slices, estimate.slices)
    denom = frobenius_norm(reference)
    diff = frobenius_norm(estimate - reference)
    return diff / denom if denom > 0 else diff


def tube_trace(reference: Tensor3, estimate: Tensor3, i: int, j: int) -> dict:
    """True and recovered values along tube (i, j)."""
    return {
        "i": i,
        "j": j,
        "reference": tube(reference, i, j).tolist(),
        "estimate": tube(estimate, i, j).tolist(),
    }


def json_float(v: float):
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


@dataclass
class MetricReport:
    psnr_per_band: List[float]
    psnr_mean: float
    ssim_per_band: List[float]
    ssim_mean: float
    sam: float
    ergas: float
    relative_error: float
    ergas_excluded_bands: List[int] = field(default_factory=list)
    times: StageTimes = field(default_factory=StageTimes)

    def to_dict(self) -> dict:
        return {
            "psnr_per_band": [json_float(v) for v in self.psnr_per_band],
            "psnr_mean": json_float(self.psnr_mean),
            "ssim_per_band": self.ssim_per_band,
            "ssim_mean": self.ssim_mean,
            "ssim_form": "global",
            "sam": self.sam,
            "ergas": self.ergas,
            "ergas_excluded_bands": self.ergas_excluded_bands,
            "relative_error": self.relative_error,
            "times": self.times.to_dict(),
        }


def psnr_mean(values: List[float]) -> float:
    """Mean of the finite values; inf when every band is recovered exactly."""
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        return math.inf
    return float(np.mean(finite))


def evaluate(
    reference: Tensor3,
    estimate: Tensor3,
    times: Optional[StageTimes] = None,
    ratio: float = 1.0,
) -> MetricReport:
    """All metrics band by band, with the PSNR peak taken per reference band."""
    _check_shapes(reference.slices, estimate.slices)
    psnrs, ssims = [], []
    for ref_band, est_band in zip(reference.slices, estimate.slices):
        peak = _band_peak(ref_band)
        psnrs.append(psnr(ref_band, est_band, peak))
        ssims.append(ssim_global(ref_band, est_band, peak))
    ergas_value, excluded = ergas_with_exclusions(reference, estimate, ratio)
    return MetricReport(
        psnr_per_band=psnrs,
        psnr_mean=psnr_mean(psnrs),
        ssim_per_band=ssims,
        ssim_mean=float(np.mean(ssims)),
        sam=sam(reference, estimate),
        ergas=ergas_value,
        relative_error=relative_error(reference, estimate),
        ergas_excluded_bands=excluded,
        times=times if times is not None else StageTimes(),
    )
