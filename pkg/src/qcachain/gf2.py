"""GF(2) linear algebra on Python-int bitsets.

A vector of length ``n`` is an ``int`` whose bit ``k`` holds component ``k``.
A matrix is a tuple of row bitsets.  Python ints are arbitrary-width packed
words, so every row operation is word-parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def parity(v: int) -> int:
    return v.bit_count() & 1


def dot(u: int, v: int) -> int:
    return (u & v).bit_count() & 1


def matvec(rows: Sequence[int], v: int) -> int:
    out = 0
    for k, row in enumerate(rows):
        if (row & v).bit_count() & 1:
            out |= 1 << k
    return out


def transpose(rows: Sequence[int], n_cols: int) -> tuple[int, ...]:
    cols = [0] * n_cols
    for r, row in enumerate(rows):
        while row:
            low = row & -row
            cols[low.bit_length() - 1] |= 1 << r
            row ^= low
    return tuple(cols)


def matmul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Row-bitset product ``a @ b``; row ``r`` of the result is a XOR of rows of ``b``."""
    out = []
    for row in a:
        acc = 0
        k = 0
        while row:
            if row & 1:
                acc ^= b[k]
            row >>= 1
            k += 1
        out.append(acc)
    return tuple(out)


def identity(n: int) -> tuple[int, ...]:
    return tuple(1 << k for k in range(n))


def matpow(rows: Sequence[int], e: int) -> tuple[int, ...]:
    if e < 0:
        raise ValueError("negative exponent; invert first")
    result = identity(len(rows))
    base = tuple(rows)
    while e:
        if e & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        e >>= 1
    return result


def from_dense(matrix: Iterable[Iterable[int]]) -> tuple[int, ...]:
    rows = []
    for row in matrix:
        acc = 0
        for k, bit in enumerate(row):
            if int(bit) & 1:
                acc |= 1 << k
        rows.append(acc)
    return tuple(rows)


def to_dense(rows: Sequence[int], n_cols: int) -> list[list[int]]:
    return [[(row >> k) & 1 for k in range(n_cols)] for row in rows]


@dataclass(frozen=True)
class AffineSolution:
    """Solution set ``particular + span(nullspace)`` of a GF(2) system."""

    n_vars: int
    particular: int
    nullspace: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.nullspace)

    def enumerate(self, limit: int = 1 << 16) -> list[int]:
        if len(self.nullspace) > limit.bit_length():
            raise ValueError(f"solution space of dimension {self.dimension} too large to enumerate")
        out = []
        for mask in range(1 << len(self.nullspace)):
            v = self.particular
            for k, basis in enumerate(self.nullspace):
                if (mask >> k) & 1:
                    v ^= basis
            out.append(v)
        return sorted(out)


def solve(rows: Sequence[int], rhs: Sequence[int], n_vars: int) -> AffineSolution | None:
    """Gauss-Jordan elimination for ``rows @ x = rhs``; ``None`` if inconsistent."""
    if len(rows) != len(rhs):
        raise ValueError("rows and rhs differ in length")
    # augmented bit n_vars carries the right-hand side
    aug = [(row & ((1 << n_vars) - 1)) | ((b & 1) << n_vars) for row, b in zip(rows, rhs)]
    pivots: list[int] = []
    r = 0
    for col in range(n_vars):
        pivot = next((k for k in range(r, len(aug)) if (aug[k] >> col) & 1), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        for k in range(len(aug)):
            if k != r and (aug[k] >> col) & 1:
                aug[k] ^= aug[r]
        pivots.append(col)
        r += 1
    rhs_bit = 1 << n_vars
    if any(row == rhs_bit for row in aug[r:]):
        return None
    particular = 0
    for k, col in enumerate(pivots):
        if aug[k] & rhs_bit:
            particular |= 1 << col
    free = [c for c in range(n_vars) if c not in pivots]
    nullspace = []
    for f in free:
        v = 1 << f
        for k, col in enumerate(pivots):
            if (aug[k] >> f) & 1:
                v |= 1 << col
        nullspace.append(v)
    return AffineSolution(n_vars, particular, tuple(nullspace))
