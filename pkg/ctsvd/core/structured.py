"""Dense structured-matrix constructions of the t-product algebras.

These materialise bcirc, block Toeplitz, block Hankel and block-diagonal
matrices explicitly. Memory is O((m * m3)^2), so they are for checking the
transform-domain fast paths at test scale and are never used by the solver.
"""

from dataclasses import dataclass
import logging
import numpy as np
import scipy.linalg

from ctsvd.core import transforms
from ctsvd.core.tensor import (
    ComplexTensor3,
    Tensor3,
    fold,
    BlockVector,
    unfold,
)
from ctsvd.core.transforms import TransformKind, TubeTransform

logger = logging.getLogger(__name__)

# Largest m1*m3 (or m2*m3) for which verify_diagonalization builds the
# Kronecker products.
MAX_ORACLE_SIZE = 512

OFF_BLOCK_TOL = 1e-10


@dataclass(frozen=True)
class ShiftDecomposition:
    """X = A + shift(A) with A unique."""

    a: Tensor3

    def reconstruct(self) -> Tensor3:
        return self.a + shift(self.a)


def shift(a: Tensor3) -> Tensor3:
    """Drop the first frontal slice and append a zero slice."""
    out = np.zeros_like(a.slices)
    out[:-1] = a.slices[1:]
    return type(a)(out)


def shift_decompose(x: Tensor3) -> ShiftDecomposition:
    """The unique A with A + shift(A) = X, by the backward recurrence."""
    a = np.empty_like(x.slices)
    a[-1] = x.slices[-1]
    for k in range(x.dims[2] - 2, -1, -1):
        a[k] = x.slices[k] - a[k + 1]
    return ShiftDecomposition(type(x)(a))


def _assemble(x: Tensor3, index) -> np.ndarray:
    """Block matrix with block (r, c) = X^(index(r, c)), zero where index is None."""
    m1, m2, m3 = x.dims
    zero = np.zeros((m1, m2), dtype=x.slices.dtype)
    rows = []
    for r in range(m3):
        row = []
        for c in range(m3):
            k = index(r, c)
            row.append(zero if k is None else x.slices[k])
        rows.append(row)
    return np.block(rows)


def bcirc(x: Tensor3) -> np.ndarray:
    m3 = x.dims[2]
    return _assemble(x, lambda r, c: (r - c) % m3)


def bt(a: Tensor3) -> np.ndarray:
    """Block Toeplitz: block (r, c) = A^(|r - c|)."""
    return _assemble(a, lambda r, c: abs(r - c))


def _hankel_index(m3: int, r: int, c: int):
    # 1-based block coordinates; one all-zero anti-diagonal at r + c = m3 + 1.
    s = (r + 1) + (c + 1)
    if s <= m3:
        return s - 1
    if s == m3 + 1:
        return None
    return 2 * m3 + 1 - s


def bh(a: Tensor3) -> np.ndarray:
    """Block Hankel, reflected about the zero anti-diagonal."""
    m3 = a.dims[2]
    return _assemble(a, lambda r, c: _hankel_index(m3, r, c))


def btph(a: Tensor3) -> np.ndarray:
    return bt(a) + bh(a)


def bdiag(xbar: Tensor3) -> np.ndarray:
    return scipy.linalg.block_diag(*xbar.slices)


def unbdiag(m: np.ndarray, m3: int) -> Tensor3:
    """Inverse of bdiag; rejects matrices with mass off the diagonal blocks."""
    m = np.asarray(m)
    rows, cols = m.shape
    if m3 < 1 or rows % m3 or cols % m3:
        raise ValueError(f"A {m.shape} matrix does not split into {m3} diagonal blocks")
    p, q = rows // m3, cols // m3
    blocks = np.stack([m[k * p : (k + 1) * p, k * q : (k + 1) * q] for k in range(m3)])
    off = m - scipy.linalg.block_diag(*blocks)
    off_mass = float(np.max(np.abs(off))) if off.size else 0.0
    if off_mass > OFF_BLOCK_TOL:
        raise ValueError(f"Matrix is not block diagonal: off-block max {off_mass:.3e}")
    if np.iscomplexobj(blocks):
        return ComplexTensor3(blocks)
    return Tensor3(blocks)


def btph_product(x: Tensor3, y: Tensor3) -> Tensor3:
    """DCT t-product computed as fold(btph(A) @ unfold(Y))."""
    _check_product_dims(x, y)
    a = shift_decompose(x).a
    prod = btph(a) @ unfold(y).as_matrix()
    return fold(BlockVector.from_matrix(prod, x.dims[2]))


def bcirc_product(x: Tensor3, y: Tensor3) -> Tensor3:
    """DFT t-product computed as fold(bcirc(X) @ unfold(Y))."""
    _check_product_dims(x, y)
    prod = bcirc(x) @ unfold(y).as_matrix()
    return fold(BlockVector.from_matrix(prod, x.dims[2]))


def _check_product_dims(x: Tensor3, y: Tensor3):
    m1, m2, m3 = x.dims
    p2, _, p3 = y.dims
    if m2 != p2 or m3 != p3:
        raise ValueError(f"Cannot t-multiply {x.dims} by {y.dims}")


def verify_diagonalization(x: Tensor3, kind: TransformKind = TransformKind.DCT_DIAG) -> float:
    """Max-abs residual of the block diagonalization identity.

    DCT kinds: bdiag(dct-diag(X)) against (C kron I) btph(A) (C^T kron I).
    dft: bdiag(fft(X)) against (F kron I) bcirc(X) (F^H kron I), F unitary.
    """
    m1, m2, m3 = x.dims
    if max(m1, m2) * m3 > MAX_ORACLE_SIZE:
        raise ValueError(
            f"Tensor {x.dims} too large for the dense oracle "
            f"(limit {MAX_ORACLE_SIZE} rows or columns)"
        )
    kind = TransformKind(kind)
    if kind is TransformKind.DFT:
        t = TubeTransform(TransformKind.DFT, m3)
        f = transforms.dft_matrix(m3) / np.sqrt(m3)
        rhs = np.kron(f, np.eye(m1)) @ bcirc(x) @ np.kron(f.conj().T, np.eye(m2))
    else:
        t = TubeTransform(TransformKind.DCT_DIAG, m3)
        c = transforms.dct_matrix(m3)
        a = shift_decompose(x).a
        rhs = np.kron(c, np.eye(m1)) @ btph(a) @ np.kron(c.T, np.eye(m2))
    lhs = bdiag(transforms.forward(t, x))
    residual = float(np.max(np.abs(lhs - rhs)))
    logger.debug("Diagonalization residual for %s %s: %.3e", kind.value, x, residual)
    return residual


def stride_permutation(m3: int, block: int) -> np.ndarray:
    """Permutation grouping the entries of each tube together.

    Row i*m3 + k of P @ M is row k*block + i of M, so
    in stride_permutation(m3, m1) @ btph(A) @ stride_permutation(m3, m2).T
    block (i, j) is the m3 x m3 Toeplitz-plus-Hankel matrix of tube (i, j).
    """
    if m3 < 1 or block < 1:
        raise ValueError(f"Need m3 >= 1 and block >= 1, got {m3}, {block}")
    n = m3 * block
    p = np.zeros((n, n))
    i, k = np.meshgrid(np.arange(block), np.arange(m3), indexing="ij")
    p[(i * m3 + k).ravel(), (k * block + i).ravel()] = 1.0
    return p
