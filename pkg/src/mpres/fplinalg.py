"""Dense exact linear algebra over prime fields F_p.

Matrices carry their modulus and keep entries reduced to [0, p). Row
reduction uses positional pivoting (leftmost column, topmost row) so that
every derived object -- ranks, kernels, quotient coordinates -- is
reproducible bit for bit across runs.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValidationError(f"{p} is not prime")
    return int(p)


class FpMatrix:
    """Matrix over F_p, stored as an int64 array with entries in [0, p)."""

    __slots__ = ("data", "p")

    def __init__(self, data, p: int, _reduce: bool = True):
        self.p = check_prime(p)
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 2:
            raise ValidationError(f"matrix must be 2-dimensional, got shape {arr.shape}")
        self.data = arr % self.p if _reduce else arr

    @classmethod
    def zeros(cls, nrows: int, ncols: int, p: int) -> "FpMatrix":
        return cls(np.zeros((nrows, ncols), dtype=np.int64), p, _reduce=False)

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls(np.eye(n, dtype=np.int64), p, _reduce=False)

    @classmethod
    def from_columns(cls, columns, length: int, p: int) -> "FpMatrix":
        cols = list(columns)
        if not cols:
            return cls.zeros(length, 0, p)
        return cls(np.stack([np.asarray(c, dtype=np.int64) for c in cols], axis=1), p)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    @property
    def ncols(self) -> int:
        return self.data.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.data[:, j].copy()

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.data.T.copy(), self.p, _reduce=False)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p:
            raise ValidationError("moduli differ")
        return FpMatrix((self.data @ other.data) % self.p, self.p, _reduce=False)

    def matvec(self, v) -> np.ndarray:
        vec = np.asarray(v, dtype=np.int64) % self.p
        return (self.data @ vec) % self.p

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, shape={self.shape})"

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.data]


def _rref(data: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form in place on a copy; returns (array, pivot cols)."""
    a = data.copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        inv = pow(int(a[row, col]), -1, p)
        a[row] = (a[row] * inv) % p
        others = np.nonzero(a[:, col])[0]
        others = others[others != row]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, col], a[row])) % p
        pivots.append(col)
        row += 1
    return a, pivots


def rref_rank(m: FpMatrix) -> tuple[FpMatrix, int]:
    """Reduced row echelon form and rank, with deterministic pivot choice."""
    a, pivots = _rref(m.data, m.p)
    return FpMatrix(a, m.p, _reduce=False), len(pivots)


def rank(m: FpMatrix) -> int:
    return rref_rank(m)[1]


def pivot_columns(m: FpMatrix) -> list[int]:
    return _rref(m.data, m.p)[1]


def kernel_basis(m: FpMatrix) -> FpMatrix:
    """Basis of the null space, one column per free column of the RREF.

    Columns are ordered by the free column index they correspond to, so the
    result is canonical for a given matrix.
    """
    a, pivots = _rref(m.data, m.p)
    p = m.p
    ncols = m.ncols
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = np.zeros((ncols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-a[i, fc]) % p
    return FpMatrix(basis, p, _reduce=False)


def solve(m: FpMatrix, v) -> np.ndarray:
    """One solution of m x = v (free variables set to 0); error if none exists."""
    vec = np.asarray(v, dtype=np.int64).reshape(-1) % m.p
    if vec.shape[0] != m.nrows:
        raise ValidationError("right-hand side has wrong length")
    aug = np.concatenate([m.data, vec[:, None]], axis=1)
    a, pivots = _rref(aug, m.p)
    if m.ncols in pivots:
        raise ValidationError("vector is outside the span")
    x = np.zeros(m.ncols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = a[i, m.ncols]
    return x


def coordinates_in_quotient(v, subspace: FpMatrix, complement: FpMatrix) -> np.ndarray:
    """Coordinates of v over the complement basis, modulo the subspace.

    Solves [subspace | complement] x = v and returns the complement part.
    Raises if v lies outside the combined span. The result is canonical as
    long as the complement columns are independent modulo the subspace.
    """
    if subspace.p != complement.p:
        raise ValidationError("moduli differ")
    if subspace.nrows != complement.nrows:
        raise ValidationError("ambient dimensions differ")
    combined = FpMatrix(
        np.concatenate([subspace.data, complement.data], axis=1),
        subspace.p,
        _reduce=False,
    )
    x = solve(combined, v)
    return x[subspace.ncols:]
