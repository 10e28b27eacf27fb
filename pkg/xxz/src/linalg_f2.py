"""GF(2) elimination on packed uint64 rows, and prime-field elimination for qudit codes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import galois
import numpy as np


WORD_BITS = 64


class CompositeModulusError(ValueError):
    def __init__(self, modulus: int) -> None:
        super().__init__(
            f"qudit dimension d={modulus} is composite; degeneracy is only computed for prime d "
            "(composite d needs a Smith normal form over Z_d, which is not supported)"
        )
        self.modulus = modulus


@dataclass(frozen=True, eq=False)
class BitMatrix:
    rows: int
    cols: int
    data: np.ndarray

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "BitMatrix":
        array = np.asarray(dense, dtype=np.uint8) % 2
        if array.ndim != 2:
            raise ValueError("a bit matrix is two-dimensional")
        rows, cols = array.shape
        words = max(1, -(-cols // WORD_BITS))
        padded = np.zeros((rows, words * WORD_BITS), dtype=np.uint8)
        padded[:, :cols] = array
        packed = np.packbits(padded, axis=1, bitorder="little")
        data = np.ascontiguousarray(packed).view("<u8").reshape(rows, words)
        data.setflags(write=False)
        return cls(rows, cols, data)

    @classmethod
    def from_rows(cls, rows: Iterable[np.ndarray], count: int, cols: int) -> "BitMatrix":
        """Packs `count` rows of length `cols` one at a time, without a dense copy."""
        words = max(1, -(-cols // WORD_BITS))
        packed = np.zeros((count, words * 8), dtype=np.uint8)
        buffer = np.zeros(words * WORD_BITS, dtype=np.uint8)
        filled = 0
        for index, row in enumerate(rows):
            if index >= count:
                raise ValueError(f"more than {count} rows supplied")
            buffer[:cols] = np.asarray(row) % 2
            packed[index] = np.packbits(buffer, bitorder="little")
            filled = index + 1
        if filled != count:
            raise ValueError(f"expected {count} rows, got {filled}")
        data = packed.view("<u8").reshape(count, words)
        data.setflags(write=False)
        return cls(count, cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls.from_dense(np.zeros((rows, cols), dtype=np.uint8))

    def to_dense(self) -> np.ndarray:
        raw = np.ascontiguousarray(self.data).view(np.uint8).reshape(self.rows, self.data.shape[1] * 8)
        return np.unpackbits(raw, axis=1, bitorder="little")[:, : self.cols]

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)


@dataclass(frozen=True)
class RowReduceResult:
    reduced: BitMatrix
    rank: int
    pivots: tuple[int, ...]


def _eliminate(matrix: BitMatrix, full: bool) -> tuple[np.ndarray, tuple[int, ...]]:
    # Pivot choice: first non-zero column, lowest available row.
    work = matrix.data.copy()
    pivots: list[int] = []
    row = 0
    for col in range(matrix.cols):
        if row == matrix.rows:
            break
        word, bit = divmod(col, WORD_BITS)
        mask = np.uint64(1) << np.uint64(bit)
        candidates = np.flatnonzero(work[row:, word] & mask)
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            work[[row, pivot]] = work[[pivot, row]]
        scope = work if full else work[row + 1 :]
        hits = np.flatnonzero(scope[:, word] & mask)
        if full:
            hits = hits[hits != row]
        scope[hits] ^= work[row]
        pivots.append(col)
        row += 1
    return work, tuple(pivots)


def row_reduce_f2(matrix: BitMatrix) -> RowReduceResult:
    work, pivots = _eliminate(matrix, full=True)
    work.setflags(write=False)
    return RowReduceResult(BitMatrix(matrix.rows, matrix.cols, work), len(pivots), pivots)


def rank_f2(matrix: BitMatrix) -> int:
    _, pivots = _eliminate(matrix, full=False)
    return len(pivots)


def kernel_basis_f2(matrix: BitMatrix) -> list[np.ndarray]:
    """Basis of {v : Mv = 0} as dense 0/1 vectors, one per free column."""
    result = row_reduce_f2(matrix)
    reduced = result.reduced.to_dense()
    pivot_set = set(result.pivots)
    basis = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vector = np.zeros(matrix.cols, dtype=np.uint8)
        vector[free] = 1
        for row, pivot in enumerate(result.pivots):
            vector[pivot] = reduced[row, free]
        basis.append(vector)
    return basis


def is_prime(modulus: int) -> bool:
    return modulus >= 2 and bool(galois.is_prime(modulus))


@dataclass(frozen=True, eq=False)
class PrimeFieldMatrix:
    entries: np.ndarray
    modulus: int

    def __post_init__(self) -> None:
        if not is_prime(self.modulus):
            raise CompositeModulusError(self.modulus)
        entries = np.asarray(self.entries, dtype=np.int64)
        if entries.ndim != 2:
            raise ValueError("a prime-field matrix is two-dimensional")
        entries = entries % self.modulus
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    def field_array(self) -> galois.FieldArray:
        return galois.GF(self.modulus)(self.entries)


def rank_fp(matrix: PrimeFieldMatrix) -> int:
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    return int(np.linalg.matrix_rank(matrix.field_array()))


def kernel_basis_fp(matrix: PrimeFieldMatrix) -> list[np.ndarray]:
    if matrix.cols == 0:
        return []
    if matrix.rows == 0:
        return [row for row in np.eye(matrix.cols, dtype=np.int64)]
    basis = matrix.field_array().null_space()
    return [np.asarray(row, dtype=np.int64) for row in basis]


def left_kernel_basis(dense: np.ndarray, modulus: int) -> list[np.ndarray]:
    """Basis of {w : w^T M = 0} over F_p (the linear dependencies among rows of M)."""
    array = np.asarray(dense, dtype=np.int64)
    if modulus == 2:
        return [vector.astype(np.int64) for vector in kernel_basis_f2(BitMatrix.from_dense(array.T))]
    return kernel_basis_fp(PrimeFieldMatrix(array.T, modulus))
