"""Bit-packed linear algebra over GF(2).

Vectors and matrix rows are stored as Python integers, one bit per coordinate
(bit j of the integer is coordinate j). Python ints give arbitrary width, and
XOR plus ``int.bit_count()`` cover everything mod-2 arithmetic needs, so no
floating point enters this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


def parity(x: int) -> int:
    """Parity (XOR fold) of the set bits of a nonnegative int."""
    return x.bit_count() & 1


def word_from_indices(n: int, positions: Iterable[int]) -> int:
    """Packed word of length n with ones at the given 0-based positions."""
    value = 0
    for p in positions:
        if not 0 <= p < n:
            raise ValueError(f"position {p} out of range for length {n}")
        value |= 1 << p
    return value


@dataclass(frozen=True)
class BitWord:
    """A length-tagged GF(2) vector packed into an int (bit j = coordinate j)."""

    n: int
    value: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("length must be nonnegative")
        if not 0 <= self.value < (1 << self.n):
            raise ValueError(f"value does not fit in {self.n} bits")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BitWord":
        value = 0
        for j, b in enumerate(bits):
            if b & 1:
                value |= 1 << j
        return cls(len(bits), value)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitWord":
        bits = np.asarray(arr, dtype=np.uint8) & 1
        packed = np.packbits(bits, bitorder="little").tobytes()
        return cls(bits.size, int.from_bytes(packed, "little"))

    def to_array(self) -> np.ndarray:
        raw = np.frombuffer(
            self.value.to_bytes((self.n + 7) // 8 or 1, "little"), dtype=np.uint8
        )
        return np.unpackbits(raw, bitorder="little")[: self.n]

    def bit(self, j: int) -> int:
        if not 0 <= j < self.n:
            raise IndexError(f"bit index {j} out of range for length {self.n}")
        return (self.value >> j) & 1

    def weight(self) -> int:
        return self.value.bit_count()

    def is_zero(self) -> bool:
        return self.value == 0

    def flip(self, positions: Iterable[int]) -> "BitWord":
        return BitWord(self.n, self.value ^ word_from_indices(self.n, positions))

    def __xor__(self, other: "BitWord") -> "BitWord":
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        return BitWord(self.n, self.value ^ other.value)

    def __iter__(self) -> Iterator[int]:
        v = self.value
        for _ in range(self.n):
            yield v & 1
            v >>= 1

    def __str__(self) -> str:
        return "".join(str(b) for b in self)


@dataclass(frozen=True)
class BitMatrix:
    """Row-major packed GF(2) matrix; each row is an int of n_cols bits."""

    n_rows: int
    n_cols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n_rows < 0 or self.n_cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.rows) != self.n_rows:
            raise ValueError(f"expected {self.n_rows} rows, got {len(self.rows)}")
        limit = 1 << self.n_cols
        for i, r in enumerate(self.rows):
            if not 0 <= r < limit:
                raise ValueError(f"row {i} does not fit in {self.n_cols} bits")

    @classmethod
    def from_rows(cls, rows: Sequence[int], n_cols: int) -> "BitMatrix":
        return cls(len(rows), n_cols, tuple(rows))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitMatrix":
        a = np.atleast_2d(np.asarray(arr, dtype=np.uint8) & 1)
        packed = np.packbits(a, axis=1, bitorder="little")
        rows = tuple(int.from_bytes(p.tobytes(), "little") for p in packed)
        return cls(a.shape[0], a.shape[1], rows)

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        nbytes = (self.n_cols + 7) // 8 or 1
        for i, r in enumerate(self.rows):
            raw = np.frombuffer(r.to_bytes(nbytes, "little"), dtype=np.uint8)
            out[i] = np.unpackbits(raw, bitorder="little")[: self.n_cols]
        return out

    def bit(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def column(self, j: int) -> int:
        """Column j packed into an int (bit i = row i)."""
        if not 0 <= j < self.n_cols:
            raise IndexError(f"column {j} out of range")
        out = 0
        for i, r in enumerate(self.rows):
            out |= ((r >> j) & 1) << i
        return out

    def columns(self) -> tuple[int, ...]:
        return tuple(self.column(j) for j in range(self.n_cols))


def identity(n: int) -> BitMatrix:
    return BitMatrix(n, n, tuple(1 << i for i in range(n)))


def zeros(n_rows: int, n_cols: int) -> BitMatrix:
    return BitMatrix(n_rows, n_cols, (0,) * n_rows)


def mat_vec(m: BitMatrix, v: BitWord) -> BitWord:
    """m @ v over GF(2); v has length n_cols, result length n_rows."""
    if v.n != m.n_cols:
        raise ValueError(f"vector length {v.n} != matrix columns {m.n_cols}")
    out = 0
    for i, row in enumerate(m.rows):
        out |= parity(row & v.value) << i
    return BitWord(m.n_rows, out)


def vec_mat(v: BitWord, m: BitMatrix) -> BitWord:
    """Row vector times matrix: v @ m over GF(2), result length n_cols."""
    if v.n != m.n_rows:
        raise ValueError(f"vector length {v.n} != matrix rows {m.n_rows}")
    out = 0
    vv = v.value
    i = 0
    while vv:
        if vv & 1:
            out ^= m.rows[i]
        vv >>= 1
        i += 1
    return BitWord(m.n_cols, out)


def mat_mul_transposed(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """a @ b.T over GF(2): entry (i, j) = parity(a.rows[i] & b.rows[j])."""
    if a.n_cols != b.n_cols:
        raise ValueError(f"column mismatch: {a.n_cols} vs {b.n_cols}")
    rows = []
    for ra in a.rows:
        out = 0
        for j, rb in enumerate(b.rows):
            out |= parity(ra & rb) << j
        rows.append(out)
    return BitMatrix(a.n_rows, b.n_rows, tuple(rows))


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """a @ b over GF(2)."""
    if a.n_cols != b.n_rows:
        raise ValueError(f"inner dimension mismatch: {a.n_cols} vs {b.n_rows}")
    rows = []
    for ra in a.rows:
        acc = 0
        rr = ra
        i = 0
        while rr:
            if rr & 1:
                acc ^= b.rows[i]
            rr >>= 1
            i += 1
        rows.append(acc)
    return BitMatrix(a.n_rows, b.n_cols, tuple(rows))


def _row_reduce(rows: list[int], n_cols: int) -> tuple[list[int], list[int]]:
    """In-place Gauss-Jordan over GF(2); returns (reduced rows, pivot columns).

    Columns are processed left to right; the pivot for a column is the first
    remaining row with that bit set, which makes the reduction deterministic.
    Bits at positions >= n_cols (augmentation) ride along untouched by pivot
    selection but participate in the XORs.
    """
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        mask = 1 << c
        pivot = next((i for i in range(r, len(rows)) if rows[i] & mask), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & mask:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: BitMatrix) -> int:
    _, pivots = _row_reduce(list(m.rows), m.n_cols)
    return len(pivots)


def row_basis(m: BitMatrix) -> BitMatrix:
    """The nonzero rows of the reduced row echelon form of m."""
    rows, pivots = _row_reduce(list(m.rows), m.n_cols)
    return BitMatrix(len(pivots), m.n_cols, tuple(rows[: len(pivots)]))


def nullspace_basis(m: BitMatrix) -> BitMatrix:
    """Basis of {v : m @ v = 0}, one row per free column, ascending free column.

    For an m with r = rank, the result is (n_cols - r) x n_cols and has full
    row rank. A full-column-rank m yields a 0 x n_cols matrix.
    """
    rows, pivots = _row_reduce(list(m.rows), m.n_cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.n_cols):
        if f in pivot_set:
            continue
        v = 1 << f
        fmask = 1 << f
        for j, p in enumerate(pivots):
            if rows[j] & fmask:
                v |= 1 << p
        basis.append(v)
    return BitMatrix(len(basis), m.n_cols, tuple(basis))


def right_inverse(m: BitMatrix) -> BitMatrix:
    """An n_cols x n_rows matrix x with m @ x = identity(n_rows).

    Requires full row rank; raises ValueError otherwise. Built from the
    Gauss-Jordan transform: if e @ m is in reduced row echelon form with pivot
    columns p_1..p_k, then scattering the rows of e into rows p_1..p_k of a
    zero matrix gives a right inverse.
    """
    k = m.n_rows
    aug = [row | (1 << (m.n_cols + i)) for i, row in enumerate(m.rows)]
    reduced, pivots = _row_reduce(aug, m.n_cols)
    if len(pivots) != k:
        raise ValueError(
            f"matrix has row rank {len(pivots)} < {k}; no right inverse exists"
        )
    x_rows = [0] * m.n_cols
    for j, p in enumerate(pivots):
        x_rows[p] = reduced[j] >> m.n_cols
    return BitMatrix(m.n_cols, k, tuple(x_rows))
