"""ADMM for low-rank tensor completion under a tube transform.

    min_X TNN(X)  subject to  X_Omega = B_Omega

split as X = Y, with Y carrying the TNN term and X the constraint. Each
iteration does

    Y <- svt(X - M / beta, 1 / beta)
    X <- (Y + M / beta) off Omega, B on Omega
    M <- M + beta * (Y - X)

until the relative change of X drops below tol or max_iters is reached.
"""

from dataclasses import dataclass, field
import logging
import numpy as np
import time
from tqdm import tqdm
from typing import List, Optional, Tuple

from ctsvd.common.errors import NumericalError
from ctsvd.common.timing import StageTimes
from ctsvd.completion.masks import ObservationMask
from ctsvd.core.prox import svt
from ctsvd.core.tensor import Tensor3, frobenius_norm
from ctsvd.core.transforms import TransformKind, TubeTransform

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    beta: float = 1e-2
    tol: float = 1e-5
    max_iters: int = 500
    transform: TransformKind = TransformKind.DCT_ORTHO
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "transform", TransformKind(self.transform))
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")

    @classmethod
    def experiment(cls, **kwargs) -> "SolverConfig":
        """Tolerance used for the reported experiments (1e-8)."""
        kwargs.setdefault("tol", 1e-8)
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "tol": self.tol,
            "max_iters": self.max_iters,
            "transform": self.transform.value,
            "seed": self.seed,
        }


@dataclass
class AdmmState:
    x: Tensor3
    y: Tensor3
    m: Tensor3
    beta: float
    mask: ObservationMask = field(repr=False)
    iteration: int = 0
    # ||X^{l+1} - X^l||_F / ||X^l||_F per iteration
    history: List[float] = field(default_factory=list)
    objective: List[float] = field(default_factory=list)
    primal_residual: List[float] = field(default_factory=list)
    feasibility: List[float] = field(default_factory=list)
    converged: bool = False
    hit_max_iters: bool = False
    times: StageTimes = field(default_factory=StageTimes)

    def __str__(self):
        change = self.history[-1] if self.history else float("nan")
        return (
            f"AdmmState(iter={self.iteration}, change={change:.3e}, "
            f"converged={self.converged})"
        )


def feasibility_residual(state: AdmmState) -> float:
    """||(X - B)_Omega||_F; zero after every X-update."""
    omega = state.mask.omega
    b = state.mask.observed_tensor()
    return float(np.linalg.norm(state.x.slices[omega] - b.slices[omega]))


def objective_trace(state: AdmmState) -> List[float]:
    """TNN of Y after each iteration."""
    return list(state.objective)


def _relative_change(x_old: Tensor3, x_new: Tensor3) -> float:
    denom = frobenius_norm(x_old)
    if denom == 0.0:
        return frobenius_norm(x_new)
    return frobenius_norm(x_new - x_old) / denom


def admm_complete(
    mask: ObservationMask, cfg: SolverConfig, progress: bool = False
) -> Tuple[Tensor3, AdmmState]:
    m1, m2, m3 = mask.dims
    t = TubeTransform(cfg.transform, m3)
    b = mask.observed_tensor()
    omega = mask.omega
    zeros = Tensor3.zeros(m1, m2, m3)
    state = AdmmState(x=b, y=zeros, m=zeros, beta=cfg.beta, mask=mask)
    inv_beta = 1.0 / cfg.beta

    start = time.time()
    bar = tqdm(range(1, cfg.max_iters + 1), disable=not progress, desc=t.kind.value)
    for it in bar:
        res = svt(state.x - state.m * inv_beta, inv_beta, t, state.times)
        y = res.y
        x = b.where(omega, y + state.m * inv_beta)
        m = state.m + cfg.beta * (y - x)
        if not (np.all(np.isfinite(x.slices)) and np.all(np.isfinite(m.slices))):
            raise NumericalError(f"Non-finite iterate at iteration {it}")

        change = _relative_change(state.x, x)
        state.x, state.y, state.m = x, y, m
        state.iteration = it
        state.history.append(change)
        state.objective.append(res.nuclear_norm)
        state.primal_residual.append(frobenius_norm(y - x))
        state.feasibility.append(feasibility_residual(state))
        logger.debug(
            "iter %d: change=%.3e primal=%.3e tnn=%.6g rank=%d",
            it,
            change,
            state.primal_residual[-1],
            res.nuclear_norm,
            res.rank,
        )
        bar.set_postfix(change=f"{change:.2e}")
        if change <= cfg.tol:
            state.converged = True
            break
    else:
        state.hit_max_iters = True
    bar.close()

    if state.hit_max_iters:
        logger.warning(
            "ADMM hit max_iters=%d with change %.3e > tol %.1e",
            cfg.max_iters,
            state.history[-1],
            cfg.tol,
        )
    logger.info(
        "ADMM (%s) finished after %d iterations, took %.1f seconds",
        t.kind.value,
        state.iteration,
        time.time() - start,
    )
    return state.x, state
