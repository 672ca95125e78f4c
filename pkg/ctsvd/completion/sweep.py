from dataclasses import replace
import logging
import pandas as pd
from typing import Iterable

from ctsvd.common.metrics import evaluate
from ctsvd.completion.admm import SolverConfig, admm_complete
from ctsvd.completion.masks import ObservationMask
from ctsvd.core.tensor import Tensor3

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    "beta",
    "iterations",
    "converged",
    "final_change",
    "relative_error",
    "psnr_mean",
    "svd_seconds",
]


def beta_sweep(
    mask: ObservationMask,
    betas: Iterable[float],
    base_config: SolverConfig,
    reference: Tensor3,
) -> pd.DataFrame:
    """Solve the same problem for each beta; beta moves speed, not the limit."""
    rows = []
    for beta in betas:
        cfg = replace(base_config, beta=float(beta))
        x, state = admm_complete(mask, cfg)
        report = evaluate(reference, x, state.times)
        rows.append(
            {
                "beta": cfg.beta,
                "iterations": state.iteration,
                "converged": state.converged,
                "final_change": state.history[-1],
                "relative_error": report.relative_error,
                "psnr_mean": report.psnr_mean,
                "svd_seconds": state.times.svd,
            }
        )
        logger.info(
            "beta=%.1e: %d iterations, relative error %.3e",
            cfg.beta,
            state.iteration,
            report.relative_error,
        )
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)
