"""Dense Gaussian elimination over GF(p^m).

Matrices are 2-d numpy arrays of element encodings (see
:mod:`powerag.finite_field`); every function takes the field explicitly.
Pivoting always picks the first nonzero entry, so results are deterministic.
"""

from __future__ import annotations

import numpy as np

from .finite_field import GF


def _check(F: GF, A) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return A.astype(F.dtype, copy=True)


def _eliminate(F: GF, R: np.ndarray, ncols: int | None = None) -> list[int]:
    """Reduce R in place to reduced row echelon form.

    Only the first ``ncols`` columns are searched for pivots; trailing columns
    (an augmented right-hand side) are carried along.
    """
    rows, cols = R.shape
    ncols = cols if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        lead = int(R[r, c])
        if lead != 1:
            R[r, c:] = F.vmul(R[r, c:], F.inv(lead))
        col = R[:, c].copy()
        col[r] = 0
        idx = np.flatnonzero(col)
        if idx.size:
            prow = R[r, c:]
            R[idx, c:] = F.vsubmul(R[idx, c:], col[idx, None], prow[None, :])
        pivots.append(c)
        r += 1
    return pivots


def rref(F: GF, A) -> tuple[np.ndarray, int, tuple[int, ...]]:
    """Reduced row echelon form of A.

    Returns ``(R, rank, pivots)`` with pivot columns strictly increasing.
    """
    R = _check(F, A)
    pivots = _eliminate(F, R)
    return R, len(pivots), tuple(pivots)


def rank(F: GF, A) -> int:
    return rref(F, A)[1]


def right_kernel_basis(F: GF, A) -> np.ndarray:
    """Basis of {u : A u = 0} as the columns of the returned matrix.

    One column per free (non-pivot) column of rref(A), in increasing order;
    column k has a 1 in the k-th free position and zeros at the other free
    positions.
    """
    A = np.asarray(A)
    rows, cols = A.shape
    R, rk, pivots = rref(F, A)
    free = [c for c in range(cols) if c not in set(pivots)]
    K = np.zeros((cols, len(free)), dtype=F.dtype)
    if not free:
        return K
    piv = np.array(pivots, dtype=np.int64)
    fr = np.array(free, dtype=np.int64)
    K[fr, np.arange(len(free))] = 1
    if rk:
        K[piv, :] = F.vneg(R[:rk][:, fr])
    return K


def solve_any(F: GF, A, b) -> np.ndarray | None:
    """One solution x of A x = b with free variables set to zero.

    Returns None when the system is inconsistent.
    """
    A = np.asarray(A)
    b = np.asarray(b)
    if A.ndim != 2 or b.shape != (A.shape[0],):
        raise ValueError(f"dimension mismatch: A is {A.shape}, b is {b.shape}")
    rows, cols = A.shape
    aug = np.empty((rows, cols + 1), dtype=F.dtype)
    aug[:, :cols] = A
    aug[:, cols] = b
    pivots = _eliminate(F, aug, cols)
    rk = len(pivots)
    if np.any(aug[rk:, cols]):
        return None
    x = np.zeros(cols, dtype=F.dtype)
    if rk:
        x[list(pivots)] = aug[:rk, cols]
    return x


def matvec(F: GF, A, x) -> np.ndarray:
    return F.matmul(A, np.asarray(x))


class PreparedSolver:
    """Elimination of A done once, for repeated :func:`solve_any` calls.

    Gives exactly the solutions solve_any would: the same row operations are
    recorded in a transform applied to each right-hand side.
    """

    def __init__(self, F: GF, A):
        A = np.asarray(A)
        rows, cols = A.shape
        self.F = F
        self.shape = (rows, cols)
        aug = np.zeros((rows, cols + rows), dtype=F.dtype)
        aug[:, :cols] = A
        aug[np.arange(rows), cols + np.arange(rows)] = 1
        self.pivots = tuple(_eliminate(F, aug, cols))
        self.rank = len(self.pivots)
        self._transform = aug[:, cols:]

    def solve(self, b) -> np.ndarray | None:
        rows, cols = self.shape
        b = np.asarray(b)
        if b.shape != (rows,):
            raise ValueError(f"right-hand side must have length {rows}")
        tb = self.F.matmul(self._transform, b)
        if np.any(tb[self.rank:]):
            return None
        x = np.zeros(cols, dtype=self.F.dtype)
        if self.rank:
            x[list(self.pivots)] = tb[: self.rank]
        return x
