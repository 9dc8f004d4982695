"""Dense GF(2) vectors and matrices with certificate-producing elimination.

Vectors and matrix rows are bit-packed into Python integers, so row updates
are single XORs.  The solver is the workhorse of the whole package: it either
solves M x = t or returns an explicit inconsistency functional y with
y^T M = 0 and y^T t = 1, extracted by running the elimination on an appended
identity.  Pivoting always picks the lowest-index available row, which makes
every downstream certificate reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

MAX_DIM = 4096


def _check_dim(value: int, what: str) -> int:
    if value < 0:
        raise ValueError(f"{what} must be nonnegative, got {value}")
    if value > MAX_DIM:
        raise ValueError(f"{what} {value} exceeds the supported maximum {MAX_DIM}")
    return value


@dataclass(frozen=True)
class BitVector:
    """Immutable vector over GF(2); coordinate i is bit i of ``bits``."""

    length: int
    bits: int = 0

    def __post_init__(self):
        _check_dim(self.length, "vector length")
        if not 0 <= self.bits < (1 << self.length):
            raise ValueError("bits outside the declared length")

    @classmethod
    def from_bits(cls, values: Iterable[int]) -> "BitVector":
        bits = 0
        length = 0
        for value in values:
            if value & 1:
                bits |= 1 << length
            length += 1
        return cls(length, bits)

    def get(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"index {i} out of range for length {self.length}")
        return self.bits >> i & 1

    def to_tuple(self) -> tuple[int, ...]:
        return tuple(self.bits >> i & 1 for i in range(self.length))

    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")
        return BitVector(self.length, self.bits ^ other.bits)

    def __str__(self) -> str:
        return "".join(str(self.bits >> i & 1) for i in range(self.length))


def vec_add(x: BitVector, y: BitVector) -> BitVector:
    return x ^ y


def dot(x: BitVector, y: BitVector) -> int:
    if x.length != y.length:
        raise ValueError(f"length mismatch: {x.length} vs {y.length}")
    return (x.bits & y.bits).bit_count() & 1


@dataclass(frozen=True)
class BitMatrix:
    """Matrix over GF(2); row i is the integer ``row_bits[i]`` over the columns."""

    rows: int
    cols: int
    row_bits: tuple[int, ...]

    def __post_init__(self):
        _check_dim(self.rows, "row count")
        _check_dim(self.cols, "column count")
        if len(self.row_bits) != self.rows:
            raise ValueError("row count does not match row data")
        bound = 1 << self.cols
        for r in self.row_bits:
            if not 0 <= r < bound:
                raise ValueError("row bits outside the declared column count")

    @classmethod
    def zero(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector]) -> "BitMatrix":
        if not rows:
            return cls(0, 0, ())
        cols = rows[0].length
        for r in rows:
            if r.length != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(r.bits for r in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[BitVector], rows: int | None = None) -> "BitMatrix":
        if rows is None:
            if not columns:
                raise ValueError("cannot infer row count from zero columns")
            rows = columns[0].length
        row_bits = [0] * rows
        for j, col in enumerate(columns):
            if col.length != rows:
                raise ValueError("column length does not match row count")
            for i in range(rows):
                if col.bits >> i & 1:
                    row_bits[i] |= 1 << j
        return cls(rows, len(columns), tuple(row_bits))

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.row_bits[i])

    def column(self, j: int) -> BitVector:
        if not 0 <= j < self.cols:
            raise IndexError(f"column {j} out of range")
        bits = 0
        for i in range(self.rows):
            if self.row_bits[i] >> j & 1:
                bits |= 1 << i
        return BitVector(self.rows, bits)

    def get(self, i: int, j: int) -> int:
        return self.row_bits[i] >> j & 1

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_columns([self.row(i) for i in range(self.rows)] or [], rows=self.cols) \
            if self.rows else BitMatrix.zero(self.cols, 0)


@dataclass(frozen=True)
class Solution:
    """M x = t holds exactly."""

    x: BitVector


@dataclass(frozen=True)
class Dual:
    """y combines rows of M to zero while y . t = 1: the system is unsolvable."""

    y: BitVector


SolveResult = Union[Solution, Dual]


def mat_vec(m: BitMatrix, x: BitVector) -> BitVector:
    if x.length != m.cols:
        raise ValueError(f"dimension mismatch: {m.rows}x{m.cols} with vector of length {x.length}")
    bits = 0
    for i in range(m.rows):
        if (m.row_bits[i] & x.bits).bit_count() & 1:
            bits |= 1 << i
    return BitVector(m.rows, bits)


def solve_or_dual(m: BitMatrix, t: BitVector) -> SolveResult:
    """Solve M x = t over GF(2) or produce the dual inconsistency witness.

    Gauss-Jordan elimination; for each column the pivot is the lowest-index
    row that still has a 1 there, so the outcome is deterministic.  Free
    variables are set to 0.  The dual witness is read off the appended
    identity on the first row that reduced to zero with target bit 1.
    """
    if t.length != m.rows:
        raise ValueError(f"dimension mismatch: {m.rows} rows vs target length {t.length}")
    work = list(m.row_bits)
    aug = [1 << i for i in range(m.rows)]
    tgt = [t.bits >> i & 1 for i in range(m.rows)]
    pivot_of_col: dict[int, int] = {}
    pivoted_rows: set[int] = set()
    for j in range(m.cols):
        pivot = next(
            (i for i in range(m.rows) if i not in pivoted_rows and work[i] >> j & 1),
            None,
        )
        if pivot is None:
            continue
        pivot_of_col[j] = pivot
        pivoted_rows.add(pivot)
        for i in range(m.rows):
            if i != pivot and work[i] >> j & 1:
                work[i] ^= work[pivot]
                aug[i] ^= aug[pivot]
                tgt[i] ^= tgt[pivot]
    for i in range(m.rows):
        if work[i] == 0 and tgt[i]:
            return Dual(BitVector(m.rows, aug[i]))
    x_bits = 0
    for j, i in pivot_of_col.items():
        if tgt[i]:
            x_bits |= 1 << j
    return Solution(BitVector(m.cols, x_bits))


def rank(m: BitMatrix) -> int:
    work = list(m.row_bits)
    count = 0
    for j in range(m.cols):
        pivot = next((i for i in range(count, m.rows) if work[i] >> j & 1), None)
        if pivot is None:
            continue
        work[count], work[pivot] = work[pivot], work[count]
        for i in range(m.rows):
            if i != count and work[i] >> j & 1:
                work[i] ^= work[count]
        count += 1
    return count


def pivot_columns(m: BitMatrix) -> list[int]:
    """Columns receiving a pivot under the deterministic elimination order."""
    work = list(m.row_bits)
    pivoted: set[int] = set()
    out: list[int] = []
    for j in range(m.cols):
        pivot = next((i for i in range(m.rows) if i not in pivoted and work[i] >> j & 1), None)
        if pivot is None:
            continue
        out.append(j)
        pivoted.add(pivot)
        for i in range(m.rows):
            if i != pivot and work[i] >> j & 1:
                work[i] ^= work[pivot]
    return out
