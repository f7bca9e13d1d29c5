"""Rational R-matrices, their transposed and braided variants, and the
six-vertex block decomposition of operators on C^{2n} (x) C^{2n}."""

from __future__ import annotations

import numpy as np

from .ratmat import RatMat
from .scalars import QC, inv, scalar_one
from .tensor import (FactorRegistry, LabeledOperator, ORTHOGONAL,
                     SYMPLECTIC, embed, kron, mat_from_entries,
                     mat_identity, mat_scale)


class PoleError(ValueError):
    """A spectral parameter hit a pole of a rational matrix."""


def _is_zero_scalar(u) -> bool:
    return u.is_zero() if isinstance(u, QC) else abs(complex(u)) == 0.0


def theta_signs(dim: int, convention: str):
    """The signs theta_i: all +1 (orthogonal), -1 on the first half (symplectic)."""
    if convention == ORTHOGONAL:
        return [1] * dim
    if convention == SYMPLECTIC:
        if dim % 2:
            raise ValueError("symplectic convention needs even dimension")
        return [-1] * (dim // 2) + [1] * (dim // 2)
    raise ValueError(f"unknown convention {convention!r}")


def p_op(dim: int, mode: str):
    """Permutation operator P on C^dim (x) C^dim."""
    rows = [[0] * dim * dim for _ in range(dim * dim)]
    for i in range(dim):
        for j in range(dim):
            rows[i * dim + j][j * dim + i] = 1
    return mat_from_entries(rows, mode)


def q_op(dim: int, mode: str, convention: str = ORTHOGONAL):
    """Rank-one operator Q = sum theta_i theta_j e_ij (x) e_{ibar jbar}."""
    theta = theta_signs(dim, convention)
    rows = [[0] * dim * dim for _ in range(dim * dim)]
    for i in range(dim):
        for j in range(dim):
            # entry at row (i, ibar), column (j, jbar)
            rows[i * dim + (dim - 1 - i)][j * dim + (dim - 1 - j)] = \
                theta[i] * theta[j]
    return mat_from_entries(rows, mode)


def yang_r(dim: int, u, mode: str):
    """Yang R-matrix I - P/u on C^dim (x) C^dim."""
    if _is_zero_scalar(u):
        raise PoleError("Yang R-matrix has a pole at u = 0")
    return mat_identity(dim * dim, mode) - mat_scale(p_op(dim, mode), inv(u))


def yang_rt(dim: int, u, mode: str, convention: str = ORTHOGONAL):
    """Transposed Yang R-matrix I - Q/u."""
    if _is_zero_scalar(u):
        raise PoleError("transposed R-matrix has a pole at u = 0")
    return mat_identity(dim * dim, mode) - \
        mat_scale(q_op(dim, mode, convention), inv(u))


def braided_r(dim: int, u, mode: str):
    """Plain braided matrix P R(u) = P - I/u."""
    if _is_zero_scalar(u):
        raise PoleError("braided R-matrix has a pole at u = 0")
    return p_op(dim, mode) - mat_scale(mat_identity(dim * dim, mode), inv(u))


def braided_r_inv(dim: int, u, mode: str):
    """Inverse of P R(u); uses R(u)R(-u) = (1 - u^-2) I."""
    one = scalar_one(mode)
    u2 = u * u
    if _is_zero_scalar(u2 - one):
        raise PoleError("braided R-matrix is singular at u = +-1")
    pre = u2 / (u2 - one)
    mat = p_op(dim, mode) + mat_scale(mat_identity(dim * dim, mode), inv(u))
    return mat_scale(mat, pre)


def braided_r_norm(dim: int, u, mode: str):
    """Normalised braided matrix u/(u-1) R(u) P = (u P - I)/(u - 1)."""
    one = scalar_one(mode)
    if _is_zero_scalar(u - one):
        raise PoleError("normalised braided R-matrix has a pole at u = 1")
    mat = mat_scale(p_op(dim, mode), u) - mat_identity(dim * dim, mode)
    return mat_scale(mat, inv(u - one))


def braided_r_norm_inv(dim: int, u, mode: str):
    """Inverse of the normalised braided matrix; equals its value at -u."""
    return braided_r_norm(dim, -u, mode)


_FLAVORS = {
    "braided": braided_r,
    "braided-inverse": braided_r_inv,
    "braided-normalized": braided_r_norm,
    "braided-normalized-inverse": braided_r_norm_inv,
}


def six_vertex_blocks(mat, n: int) -> dict:
    """Split an operator on C^{2n} (x) C^{2n} into 16 blocks on C^n (x) C^n.

    Keys are 1-based tuples (a, b, c, d) with the block holding the entries
    at rows (i + n(a-1), k + n(c-1)) and columns (j + n(b-1), l + n(d-1)).
    """
    dim = 2 * n

    def block_of(arr, a, b, c, d):
        t = arr.reshape(2, n, 2, n, 2, n, 2, n)
        sub = t[a, :, c, :, b, :, d, :]
        return np.ascontiguousarray(sub).reshape(n * n, n * n)

    blocks = {}
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for d in range(2):
                    if isinstance(mat, RatMat):
                        if mat.shape != (dim * dim, dim * dim):
                            raise ValueError("matrix is not on C^{2n} (x) C^{2n}")
                        blk = mat.transform(
                            lambda x, a=a, b=b, c=c, d=d: block_of(x, a, b, c, d))
                    else:
                        if mat.shape != (dim * dim, dim * dim):
                            raise ValueError("matrix is not on C^{2n} (x) C^{2n}")
                        blk = block_of(mat, a, b, c, d)
                    blocks[(a + 1, b + 1, c + 1, d + 1)] = blk
    return blocks


def assemble_blocks(blocks: dict, n: int, mode: str):
    """Inverse of :func:`six_vertex_blocks`; bit-exact round trip."""
    dim = 2 * n
    out = None
    for (a, b, c, d), blk in blocks.items():
        x_ab = [[0] * 2 for _ in range(2)]
        x_ab[a - 1][b - 1] = 1
        x_cd = [[0] * 2 for _ in range(2)]
        x_cd[c - 1][d - 1] = 1
        xa = mat_from_entries(x_ab, mode)
        xc = mat_from_entries(x_cd, mode)
        # reorder (x, x, e, e) -> ((x e), (x e)) by embedding on a 4-factor registry
        reg = FactorRegistry([("x1", 2), ("e1", n), ("x2", 2), ("e2", n)])
        term = (embed(xa, "x1", reg) @ embed(xc, "x2", reg)
                @ embed(blk, ["e1", "e2"], reg))
        out = term if out is None else out + term
    return out.data


def bubble_sort_word(sigma) -> list:
    """Adjacent-transposition word for sigma, in left-to-right scan order.

    ``sigma`` lists images: position p carries item sigma[p].  The word, read
    left to right, turns the identity arrangement into ``sigma``.
    """
    target = list(sigma)
    m = len(target)
    arr = list(range(m))
    word = []
    for bound in range(m):
        for i in range(m - 1):
            # move toward the target ordering, classic bubble pass
            if target.index(arr[i]) > target.index(arr[i + 1]):
                arr[i], arr[i + 1] = arr[i + 1], arr[i]
                word.append(i)
    return word


def product_from_word(labels, word, params, flavor: str,
                      registry: FactorRegistry, mode: str) -> LabeledOperator:
    """Ordered product of braided factors along a transposition word.

    Each step ``i`` contributes a factor on the adjacent label pair
    ``(labels[i], labels[i+1])`` with argument w_i - w_{i+1}, where ``w``
    tracks the parameters as they are swapped along the word.
    """
    if flavor not in _FLAVORS:
        raise ValueError(f"unknown braided flavor {flavor!r}")
    maker = _FLAVORS[flavor]
    dim = registry.dim(labels[0])
    out = LabeledOperator.identity(registry, mode)
    w = list(params)
    for i in word:
        fac = maker(dim, w[i] - w[i + 1], mode)
        out = out @ embed(fac, [labels[i], labels[i + 1]], registry)
        w[i], w[i + 1] = w[i + 1], w[i]
    return out


def permutation_product(labels, sigma, params, flavor: str,
                        registry: FactorRegistry, mode: str) -> LabeledOperator:
    """Braided-factor product realizing ``sigma``, bubble-sort reduced word."""
    return product_from_word(labels, bubble_sort_word(sigma), params, flavor,
                             registry, mode)
