"""GF(2) linear algebra on bit-packed binary matrices.

Rows are stored as Python integers (bit ``j`` of a row word is column ``j``),
which keeps rank / syndrome loops fast enough for exhaustive distance search.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class BinMatrix:
    """An immutable binary matrix with row-major bit packing."""

    rows: int
    cols: int
    row_bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("dimensions must be nonnegative")
        if len(self.row_bits) != self.rows:
            raise ValueError("row count does not match packed data")
        mask = (1 << self.cols) - 1
        for r in self.row_bits:
            if r & ~mask:
                raise ValueError("row has bits outside the declared width")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "BinMatrix":
        rows = [list(r) for r in rows]
        n_cols = len(rows[0]) if rows else 0
        packed = []
        for row in rows:
            if len(row) != n_cols:
                raise ValueError("ragged rows")
            word = 0
            for j, entry in enumerate(row):
                entry = int(entry)
                if entry not in (0, 1):
                    raise ValueError("entries must be 0 or 1")
                word |= entry << j
            packed.append(word)
        return cls(len(rows), n_cols, tuple(packed))

    @classmethod
    def from_text(cls, text: str) -> "BinMatrix":
        """Parse the matrix literal format: one row per line, '0'/'1' chars."""
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        return cls.from_rows([[int(c) for c in ln] for ln in lines])

    def to_text(self) -> str:
        return "\n".join(
            "".join(str((r >> j) & 1) for j in range(self.cols))
            for r in self.row_bits
        )

    @classmethod
    def identity(cls, n: int) -> "BinMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BinMatrix":
        return cls(rows, cols, (0,) * rows)

    def entry(self, i: int, j: int) -> int:
        return (self.row_bits[i] >> j) & 1

    def row_weight(self, i: int) -> int:
        return self.row_bits[i].bit_count()

    def column_bits(self) -> tuple[int, ...]:
        """Columns packed as integers (bit ``i`` of column word is row ``i``)."""
        cols = [0] * self.cols
        for i, r in enumerate(self.row_bits):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return tuple(cols)

    def transpose(self) -> "BinMatrix":
        return BinMatrix(self.cols, self.rows, self.column_bits())

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, r in enumerate(self.row_bits):
            for j in range(self.cols):
                out[i, j] = (r >> j) & 1
        return out

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BinMatrix":
        return cls.from_rows(np.asarray(arr, dtype=np.uint8) % 2)


def rank2(matrix: BinMatrix) -> int:
    """GF(2) rank by Gaussian elimination, pivoting on the lowest column."""
    work = list(matrix.row_bits)
    rank = 0
    for col in range(matrix.cols):
        pivot = None
        for i in range(rank, len(work)):
            if (work[i] >> col) & 1:
                pivot = i
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for i in range(len(work)):
            if i != rank and (work[i] >> col) & 1:
                work[i] ^= work[rank]
        rank += 1
        if rank == len(work):
            break
    return rank


def mul2(a: BinMatrix, b: BinMatrix) -> BinMatrix:
    """Matrix product mod 2."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.cols} vs {b.rows}")
    b_cols = b.column_bits()
    out = []
    for r in a.row_bits:
        word = 0
        for j, col in enumerate(b_cols):
            word |= ((r & col).bit_count() & 1) << j
        out.append(word)
    return BinMatrix(a.rows, b.cols, tuple(out))


def is_self_orthogonal(matrix: BinMatrix) -> bool:
    """True iff every pair of rows (a row with itself included) overlaps evenly."""
    rows = matrix.row_bits
    for i, ri in enumerate(rows):
        for rj in rows[i:]:
            if (ri & rj).bit_count() & 1:
                return False
    return True


def syndrome(matrix: BinMatrix, error_bits: int) -> int:
    """Return the packed syndrome of a packed error vector."""
    if error_bits >> matrix.cols:
        raise ValueError("error vector longer than the matrix width")
    out = 0
    for i, r in enumerate(matrix.row_bits):
        out |= ((r & error_bits).bit_count() & 1) << i
    return out


def syndrome_vec(matrix: BinMatrix, error: Sequence[int]) -> list[int]:
    """Vector-in, vector-out wrapper around :func:`syndrome`."""
    if len(error) != matrix.cols:
        raise ValueError("error vector length must equal the column count")
    packed = 0
    for j, e in enumerate(error):
        packed |= (e & 1) << j
    s = syndrome(matrix, packed)
    return [(s >> i) & 1 for i in range(matrix.rows)]


def row_space(matrix: BinMatrix) -> frozenset[int]:
    """All packed vectors in the row span (use only for small matrices)."""
    span = {0}
    for r in matrix.row_bits:
        span |= {x ^ r for x in span}
    return frozenset(span)
