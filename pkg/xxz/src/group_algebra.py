"""
F2[G] and Z_d[G] elements and the q x q matrices that act on vectors of them.

A subset S of G is the F2[G] element sum_{g in S} g; its coefficients are packed
into a Python int (bit i is the coefficient of element i). Z_d[G] elements keep a
numpy coefficient vector; a coefficient of zero means "not in the set".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from group_core import ElementKey, FiniteGroup, GroupElement, GroupMismatchError


class DimensionMismatchError(ValueError):
    pass


class ModulusMismatchError(ValueError):
    pass


class NonAbelianAlgebraMatrixError(ValueError):
    pass


class MatrixKindError(ValueError):
    pass


def _indices_to_bits(indices: Iterable[int], order: int) -> int:
    flags = np.zeros(order, dtype=np.uint8)
    flags[np.fromiter(indices, dtype=np.int64)] = 1
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def _bits_to_indices(bits: int, order: int) -> np.ndarray:
    raw = np.frombuffer(bits.to_bytes((order + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")[:order])


@dataclass(frozen=True)
class AlgebraElement:
    group: FiniteGroup
    bits: int = 0

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits.bit_length() > self.group.order:
            raise DimensionMismatchError("coefficient vector longer than the group order")

    @classmethod
    def from_indices(cls, group: FiniteGroup, indices: Iterable[int]) -> "AlgebraElement":
        return cls(group, _indices_to_bits(indices, group.order))

    @property
    def coeffs(self) -> np.ndarray:
        flags = np.zeros(self.group.order, dtype=np.uint8)
        flags[self.indices()] = 1
        return flags

    def indices(self) -> np.ndarray:
        return _bits_to_indices(self.bits, self.group.order)

    def elements(self) -> tuple[GroupElement, ...]:
        return tuple(GroupElement(int(index), self.group) for index in self.indices())

    def names(self) -> list[str]:
        return [self.group.name(int(index)) for index in self.indices()]

    def __contains__(self, element: object) -> bool:
        if isinstance(element, GroupElement):
            index = element.index
        elif isinstance(element, (int, np.integer)):
            index = int(element)
        else:
            return False
        return 0 <= index < self.group.order and bool((self.bits >> index) & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __xor__(self, other: "AlgebraElement") -> "AlgebraElement":
        return symmetric_difference(self, other)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self, other)


def subset(group: FiniteGroup, keys: Iterable[ElementKey]) -> AlgebraElement:
    return AlgebraElement.from_indices(group, (group.element(key).index for key in keys))


def empty(group: FiniteGroup) -> AlgebraElement:
    return AlgebraElement(group, 0)


def _same_group(left: FiniteGroup, right: FiniteGroup) -> None:
    if left is not right:
        raise GroupMismatchError("group algebra operands belong to different groups")


def symmetric_difference(left: AlgebraElement, right: AlgebraElement) -> AlgebraElement:
    _same_group(left.group, right.group)
    return AlgebraElement(left.group, left.bits ^ right.bits)


def inverse_set(element: AlgebraElement) -> AlgebraElement:
    group = element.group
    return AlgebraElement.from_indices(group, group.inverse[element.indices()])


def left_translate(g: GroupElement, element: AlgebraElement) -> AlgebraElement:
    _same_group(g.group, element.group)
    return AlgebraElement.from_indices(element.group, element.group.cayley[g.index, element.indices()])


def right_translate(element: AlgebraElement, g: GroupElement) -> AlgebraElement:
    _same_group(g.group, element.group)
    return AlgebraElement.from_indices(element.group, element.group.cayley[element.indices(), g.index])


def multiply(left: AlgebraElement, right: AlgebraElement) -> AlgebraElement:
    """Convolution in F2[G]: the sum of st over s in left, t in right, mod 2."""
    _same_group(left.group, right.group)
    group = left.group
    bits = 0
    for s in left.indices():
        bits ^= _indices_to_bits(group.cayley[s, right.indices()], group.order)
    return AlgebraElement(group, bits)


@dataclass(frozen=True, eq=False)
class WeightedAlgebraElement:
    group: FiniteGroup
    modulus: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ModulusMismatchError("qudit dimension must be at least 2")
        coeffs = np.asarray(self.coeffs, dtype=np.int64)
        if coeffs.shape != (self.group.order,):
            raise DimensionMismatchError("coefficient vector length must equal the group order")
        if coeffs.size and (coeffs.min() < 0 or coeffs.max() >= self.modulus):
            raise ModulusMismatchError(f"coefficients must lie in 0..{self.modulus - 1}")
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedAlgebraElement):
            return NotImplemented
        return (
            self.group is other.group
            and self.modulus == other.modulus
            and bool(np.array_equal(self.coeffs, other.coeffs))
        )

    def __hash__(self) -> int:
        return hash((id(self.group), self.modulus, self.coeffs.tobytes()))

    def coefficient(self, key: ElementKey) -> int:
        return int(self.coeffs[self.group.element(key).index])

    def support(self) -> AlgebraElement:
        return AlgebraElement.from_indices(self.group, np.flatnonzero(self.coeffs))

    def scale(self, factor: int) -> "WeightedAlgebraElement":
        return WeightedAlgebraElement(self.group, self.modulus, (self.coeffs * factor) % self.modulus)

    def counts(self) -> dict[str, int]:
        return {self.group.name(int(index)): int(self.coeffs[index]) for index in np.flatnonzero(self.coeffs)}


def weighted_from_counts(group: FiniteGroup, modulus: int, counts: Mapping[ElementKey, int]) -> WeightedAlgebraElement:
    coeffs = np.zeros(group.order, dtype=np.int64)
    for key, count in counts.items():
        coeffs[group.element(key).index] += int(count)
    return WeightedAlgebraElement(group, modulus, coeffs % modulus)


def weighted_from_subset(element: AlgebraElement, modulus: int) -> WeightedAlgebraElement:
    return WeightedAlgebraElement(element.group, modulus, element.coeffs.astype(np.int64))


def support(element: Union[AlgebraElement, WeightedAlgebraElement]) -> AlgebraElement:
    if isinstance(element, WeightedAlgebraElement):
        return element.support()
    return element


def _square(entries: np.ndarray) -> None:
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
        raise DimensionMismatchError("matrices must be non-empty and square")


@dataclass(frozen=True, eq=False)
class BinaryMatrix:
    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=np.int64)
        _square(entries)
        if np.any((entries != 0) & (entries != 1)):
            raise ModulusMismatchError("binary matrix entries must be 0 or 1")
        entries = entries.astype(np.uint8)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "BinaryMatrix":
        return cls(np.asarray(rows))

    @classmethod
    def identity(cls, q: int) -> "BinaryMatrix":
        return cls(np.eye(q, dtype=np.uint8))

    @property
    def q(self) -> int:
        return int(self.entries.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash(self.entries.tobytes())

    def tolist(self) -> list[list[int]]:
        return self.entries.astype(int).tolist()


@dataclass(frozen=True, eq=False)
class ModularMatrix:
    entries: np.ndarray
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ModulusMismatchError("matrix modulus must be at least 2")
        entries = np.asarray(self.entries, dtype=np.int64)
        _square(entries)
        if entries.min() < 0 or entries.max() >= self.modulus:
            raise ModulusMismatchError(f"matrix entries must lie in 0..{self.modulus - 1}")
        entries = entries.copy()
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]], modulus: int) -> "ModularMatrix":
        return cls(np.asarray(rows, dtype=np.int64) % modulus, modulus)

    @classmethod
    def identity(cls, q: int, modulus: int) -> "ModularMatrix":
        return cls(np.eye(q, dtype=np.int64), modulus)

    @property
    def q(self) -> int:
        return int(self.entries.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModularMatrix):
            return NotImplemented
        return self.modulus == other.modulus and bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((self.modulus, self.entries.tobytes()))

    def tolist(self) -> list[list[int]]:
        return self.entries.astype(int).tolist()


@dataclass(frozen=True)
class AlgebraMatrix:
    group: FiniteGroup
    entries: tuple[tuple[AlgebraElement, ...], ...]

    def __post_init__(self) -> None:
        size = len(self.entries)
        if size == 0 or any(len(row) != size for row in self.entries):
            raise DimensionMismatchError("matrices must be non-empty and square")
        if any(entry.group is not self.group for row in self.entries for entry in row):
            raise GroupMismatchError("algebra matrix entries belong to different groups")
        if not self.group.is_abelian:
            raise NonAbelianAlgebraMatrixError("algebra-valued matrices require an abelian group")

    @classmethod
    def of(cls, group: FiniteGroup, rows: Sequence[Sequence[AlgebraElement]]) -> "AlgebraMatrix":
        return cls(group, tuple(tuple(row) for row in rows))

    @property
    def q(self) -> int:
        return len(self.entries)


Matrix = Union[BinaryMatrix, ModularMatrix, AlgebraMatrix]


def identity_matrix(q: int, modulus: int | None = None, group: FiniteGroup | None = None) -> Matrix:
    """Algebra identity with a group, Z_modulus identity with a modulus (2 included), else binary."""
    if group is not None:
        unit = subset(group, [group.identity])
        return AlgebraMatrix.of(group, [[unit if i == j else empty(group) for j in range(q)] for i in range(q)])
    if modulus is not None:
        return ModularMatrix.identity(q, modulus)
    return BinaryMatrix.identity(q)


def transpose(matrix: Matrix) -> Matrix:
    """Plain transpose; algebra entries are not inverted."""
    if isinstance(matrix, BinaryMatrix):
        return BinaryMatrix(matrix.entries.T)
    if isinstance(matrix, ModularMatrix):
        return ModularMatrix(matrix.entries.T, matrix.modulus)
    return AlgebraMatrix(matrix.group, tuple(zip(*matrix.entries)))


def matrix_product(left: Matrix, right: Matrix) -> Matrix:
    if left.q != right.q:
        raise DimensionMismatchError(f"cannot multiply {left.q}x{left.q} by {right.q}x{right.q}")
    if isinstance(left, BinaryMatrix) and isinstance(right, BinaryMatrix):
        return BinaryMatrix((left.entries.astype(np.int64) @ right.entries) % 2)
    if isinstance(left, ModularMatrix) and isinstance(right, ModularMatrix):
        if left.modulus != right.modulus:
            raise ModulusMismatchError("matrices have different moduli")
        return ModularMatrix((left.entries @ right.entries) % left.modulus, left.modulus)
    if isinstance(left, AlgebraMatrix) and isinstance(right, AlgebraMatrix):
        _same_group(left.group, right.group)
        rows = []
        for i in range(left.q):
            row = []
            for k in range(left.q):
                total = empty(left.group)
                for j in range(left.q):
                    total = total ^ multiply(left.entries[i][j], right.entries[j][k])
                row.append(total)
            rows.append(row)
        return AlgebraMatrix.of(left.group, rows)
    raise MatrixKindError(f"cannot combine {type(left).__name__} with {type(right).__name__}")


def matrix_power(matrix: Matrix, exponent: int) -> Matrix:
    if exponent < 0:
        raise ValueError("matrix powers must be non-negative")
    result: Matrix
    if isinstance(matrix, AlgebraMatrix):
        result = identity_matrix(matrix.q, group=matrix.group)
    elif isinstance(matrix, ModularMatrix):
        result = ModularMatrix.identity(matrix.q, matrix.modulus)
    else:
        result = BinaryMatrix.identity(matrix.q)
    for _ in range(exponent):
        result = matrix_product(result, matrix)
    return result


def matrix_apply(matrix: BinaryMatrix | AlgebraMatrix, vector: Sequence[AlgebraElement]) -> list[AlgebraElement]:
    """(CA)_k = sum_j C_kj A_j; algebra entries act by convolution."""
    if matrix.q != len(vector):
        raise DimensionMismatchError(f"{matrix.q}x{matrix.q} matrix applied to a vector of length {len(vector)}")
    if not vector:
        return []
    group = vector[0].group
    for entry in vector:
        _same_group(group, entry.group)
    result = []
    if isinstance(matrix, AlgebraMatrix):
        _same_group(matrix.group, group)
        for row in matrix.entries:
            total = empty(group)
            for coefficient, element in zip(row, vector):
                total = total ^ multiply(coefficient, element)
            result.append(total)
        return result
    if not isinstance(matrix, BinaryMatrix):
        raise MatrixKindError("matrix_apply takes binary or algebra-valued matrices")
    for row in matrix.entries:
        bits = 0
        for flag, element in zip(row, vector):
            if flag:
                bits ^= element.bits
        result.append(AlgebraElement(group, bits))
    return result


def weighted_matrix_apply(
    matrix: ModularMatrix, vector: Sequence[WeightedAlgebraElement]
) -> list[WeightedAlgebraElement]:
    if matrix.q != len(vector):
        raise DimensionMismatchError(f"{matrix.q}x{matrix.q} matrix applied to a vector of length {len(vector)}")
    modulus = matrix.modulus
    if any(entry.modulus != modulus for entry in vector):
        raise ModulusMismatchError("matrix and vector moduli differ")
    group = vector[0].group
    for entry in vector:
        _same_group(group, entry.group)
    stacked = np.stack([entry.coeffs for entry in vector])
    combined = (matrix.entries @ stacked) % modulus
    return [WeightedAlgebraElement(group, modulus, row) for row in combined]
