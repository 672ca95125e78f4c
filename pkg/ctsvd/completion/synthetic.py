"""Synthetic tensors with known low tubal rank, for tests and benchmarks."""

import numpy as np
from typing import Optional, Tuple

from ctsvd.core.tensor import Tensor3


def random_tensor(dims: Tuple[int, int, int], seed: Optional[int] = None) -> Tensor3:
    """Standard normal entries."""
    m1, m2, m3 = dims
    rng = np.random.default_rng(seed)
    return Tensor3(rng.standard_normal((m3, m1, m2)))


def tubal_rank_one(
    m1: int, m2: int, m3: int, seed: Optional[int] = 0, scale: float = 255.0
) -> Tensor3:
    """scale * a_i * b_j * c_k with a, b, c drawn from U[0, 1].

    Every frontal slice is a multiple of the rank-1 matrix a b^T, and so is
    every slice after any tube transform: tubal rank 1 under all kinds.
    """
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.0, 1.0, m1)
    b = rng.uniform(0.0, 1.0, m2)
    c = rng.uniform(0.0, 1.0, m3)
    return Tensor3(scale * c[:, None, None] * np.outer(a, b)[None, :, :])


def smooth_tubes(
    m1: int,
    m2: int,
    m3: int,
    seed: Optional[int] = 0,
    scale: float = 255.0,
    rank: int = 3,
) -> Tensor3:
    """Low-rank tensor whose tubes are smooth, non-periodic functions.

    Each tube mixes `rank` cubic-polynomial profiles sampled on [0, 1]
    with nonnegative spatial weights. The profiles end at different values
    than they start, which a periodic extension turns into a jump. Values
    are rescaled to [0, scale].
    """
    rng = np.random.default_rng(seed)
    s = np.linspace(0.0, 1.0, m3)
    coeffs = rng.uniform(-1.0, 1.0, (rank, 4))
    # linear ramp with |slope| >= 1
    coeffs[:, 1] += np.sign(coeffs[:, 1]) + (coeffs[:, 1] == 0)
    profiles = np.polynomial.polynomial.polyval(s, coeffs.T)  # (rank, m3)
    u = rng.uniform(0.0, 1.0, (m1, rank))
    v = rng.uniform(0.0, 1.0, (m2, rank))
    x = np.einsum("ir,jr,rk->kij", u, v, profiles)
    lo, hi = x.min(), x.max()
    if hi > lo:
        x = (x - lo) / (hi - lo) * scale
    else:
        x = np.zeros_like(x)
    return Tensor3(x)
