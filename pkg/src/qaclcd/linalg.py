"""Gaussian elimination over a ``FieldTable`` and unit-pivot reduction over chain rings."""

from __future__ import annotations

import numpy as np

from .gf import FieldTable, ScalarRing


def rref(F: FieldTable, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = F.mul(A[r], int(F.inv(A[r, c])))
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = F.sub(A[i], F.mul(A[r], int(A[i, c])))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(F: FieldTable, M) -> int:
    return len(rref(F, M)[1])


def is_nonsingular(F: FieldTable, M) -> bool:
    M = np.asarray(M)
    return M.shape[0] == M.shape[1] and rank(F, M) == M.shape[0]


def nullspace(F: FieldTable, M) -> np.ndarray:
    """Basis (as rows) of ``{x : M x = 0}``."""
    M = np.asarray(M, dtype=np.int64)
    R, piv = rref(F, M)
    cols = M.shape[1]
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(piv):
            v[pc] = F.neg(R[i, f])
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), cols)


def solve(F: FieldTable, A, b) -> np.ndarray | None:
    """One solution of ``A x = b`` or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    R, piv = rref(F, np.hstack([A, b]))
    n = A.shape[1]
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = R[i, n]
    return x


def matmul(R: ScalarRing, A, B) -> np.ndarray:
    """Matrix product over any scalar ring."""
    A = np.asarray(A)
    B = np.asarray(B)
    prod = R.mul(A[:, :, None], B[None, :, :])
    return R.sum(prod, axis=1)


def unit_pivot_rank(R: ScalarRing, M) -> int:
    """Number of unit pivots found by elimination over a local ring.

    Pivots are taken only on unit entries; once no unit remains every entry
    lies in the maximal ideal, so the count is the free rank of the row space.
    """
    A = np.array(M, dtype=np.int64, copy=True)
    count = 0
    while A.size:
        units = np.argwhere(R.is_unit(A))
        if units.size == 0:
            break
        i, j = (int(v) for v in units[0])
        inv = R.inv(int(A[i, j]))
        A[i] = R.mul(A[i], inv)
        for k in range(A.shape[0]):
            if k != i and A[k, j]:
                A[k] = R.sub(A[k], R.mul(A[i], int(A[k, j])))
        A = np.delete(np.delete(A, i, axis=0), j, axis=1)
        count += 1
    return count


def span(R: ScalarRing, rows, scalars=None) -> np.ndarray:
    """Every combination ``sum_j c_j rows[j]`` with ``c_j`` in ``scalars``.

    Row ``k`` of the result uses the base-``len(scalars)`` digits of ``k``, the
    first generator being the least significant digit.
    """
    rows = np.asarray(rows)
    L = rows.shape[1]
    if scalars is None:
        scalars = R.elements()
    scalars = np.asarray(scalars)
    acc = np.zeros((1, L), dtype=R.dtype)
    for row in rows:
        scaled = R.mul(scalars[:, None], row[None, :]).astype(R.dtype)
        acc = R.add(scaled[:, None, :], acc[None, :, :]).reshape(-1, L)
    return acc
