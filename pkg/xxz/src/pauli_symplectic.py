"""
Pauli operators on L(G, 2q) in symplectic form, and the stabilizer generators of a code spec.

Qudit (site g, layer +/-, channel k) sits at flat index g*2q + (0 | q) + (k-1).
A PauliOperator (c, x, z) is w^c X^x Z^z with XZ = wZX, acting on basis states as
|b> -> w^(c + z.b) |b - x>. Then PQ = w^sp(P,Q) QP with sp(P,Q) = x.z' - z.x' mod d.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence, Union

import numpy as np

from activity import RunAction, RunComponent, log_event
from group_algebra import (
    AlgebraElement,
    AlgebraMatrix,
    BinaryMatrix,
    DimensionMismatchError,
    Matrix,
    MatrixKindError,
    ModularMatrix,
    ModulusMismatchError,
    WeightedAlgebraElement,
    matrix_apply,
    transpose,
    weighted_from_subset,
    weighted_matrix_apply,
)
from group_core import FiniteGroup, GroupElement, GroupMismatchError
from linalg_f2 import BitMatrix


class NonCommutingMatricesError(ValueError):
    def __init__(self, first: int, second: int) -> None:
        super().__init__(f"matrices {first} and {second} do not commute")
        self.pair = (first, second)


class Layer(str, Enum):
    PLUS = "+"
    MINUS = "-"


class GeneratorKind(str, Enum):
    Z = "Z"
    X = "X"
    U = "U"
    V = "V"


QubitMatrix = Union[BinaryMatrix, AlgebraMatrix]


def _check_vectors(
    group: FiniteGroup,
    q: int,
    A: Sequence[Union[AlgebraElement, WeightedAlgebraElement]],
    B: Sequence[Union[AlgebraElement, WeightedAlgebraElement]],
) -> None:
    if q < 1:
        raise DimensionMismatchError("q must be a positive integer")
    if len(A) != q or len(B) != q:
        raise DimensionMismatchError(f"A and B must each hold q={q} sets")
    for element in (*A, *B):
        if element.group is not group:
            raise GroupMismatchError("defining sets belong to a different group")


def _check_commuting(matrices: Sequence[Matrix]) -> None:
    from code_analysis import matrices_commute_check

    result = matrices_commute_check(list(matrices))
    if not result.commute and result.witness is not None:
        first, second = result.witness
        raise NonCommutingMatricesError(first, second)


@dataclass(frozen=True)
class CodeSpec:
    group: FiniteGroup
    q: int
    A: tuple[AlgebraElement, ...]
    B: tuple[AlgebraElement, ...]
    matrices: tuple[QubitMatrix, ...]
    allow_noncommuting: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", tuple(self.A))
        object.__setattr__(self, "B", tuple(self.B))
        object.__setattr__(self, "matrices", tuple(self.matrices))
        _check_vectors(self.group, self.q, self.A, self.B)
        if not self.matrices:
            raise DimensionMismatchError("at least one matrix is required")
        for matrix in self.matrices:
            if not isinstance(matrix, (BinaryMatrix, AlgebraMatrix)):
                raise MatrixKindError("qubit codes take binary or algebra-valued matrices")
            if matrix.q != self.q:
                raise DimensionMismatchError(f"matrix is {matrix.q}x{matrix.q}, expected {self.q}x{self.q}")
        if not self.allow_noncommuting:
            _check_commuting(self.matrices)
        log_event(
            RunComponent.SPEC,
            RunAction.VALIDATED,
            group_order=self.group.order,
            q=self.q,
            matrices=len(self.matrices),
        )

    @property
    def modulus(self) -> int:
        return 2

    @property
    def n_qubits(self) -> int:
        return 2 * self.q * self.group.order


@dataclass(frozen=True)
class QuditCodeSpec:
    group: FiniteGroup
    q: int
    d: int
    A: tuple[WeightedAlgebraElement, ...]
    B: tuple[WeightedAlgebraElement, ...]
    matrices: tuple[ModularMatrix, ...]
    allow_noncommuting: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", tuple(self.A))
        object.__setattr__(self, "B", tuple(self.B))
        object.__setattr__(self, "matrices", tuple(self.matrices))
        if self.d < 2:
            raise ModulusMismatchError("qudit dimension must be at least 2")
        _check_vectors(self.group, self.q, self.A, self.B)
        if not self.matrices:
            raise DimensionMismatchError("at least one matrix is required")
        for element in (*self.A, *self.B):
            if element.modulus != self.d:
                raise ModulusMismatchError(f"set multiplicities are mod {element.modulus}, expected mod {self.d}")
        for matrix in self.matrices:
            if not isinstance(matrix, ModularMatrix):
                raise MatrixKindError("qudit codes take matrices over Z_d")
            if matrix.modulus != self.d:
                raise ModulusMismatchError(f"matrix is over Z_{matrix.modulus}, expected Z_{self.d}")
            if matrix.q != self.q:
                raise DimensionMismatchError(f"matrix is {matrix.q}x{matrix.q}, expected {self.q}x{self.q}")
        if not self.allow_noncommuting:
            _check_commuting(self.matrices)
        log_event(
            RunComponent.SPEC,
            RunAction.VALIDATED,
            group_order=self.group.order,
            q=self.q,
            d=self.d,
            matrices=len(self.matrices),
        )

    @property
    def modulus(self) -> int:
        return self.d

    @property
    def n_qubits(self) -> int:
        return 2 * self.q * self.group.order


AnySpec = Union[CodeSpec, QuditCodeSpec]


def as_qudit_spec(spec: CodeSpec, d: int = 2) -> QuditCodeSpec:
    """The same sets (multiplicity 1) and matrices, read over Z_d."""
    if any(not isinstance(matrix, BinaryMatrix) for matrix in spec.matrices):
        raise MatrixKindError("only binary matrices carry over to a qudit spec")
    return QuditCodeSpec(
        group=spec.group,
        q=spec.q,
        d=d,
        A=tuple(weighted_from_subset(entry, d) for entry in spec.A),
        B=tuple(weighted_from_subset(entry, d) for entry in spec.B),
        matrices=tuple(ModularMatrix(matrix.entries, d) for matrix in spec.matrices),
        allow_noncommuting=spec.allow_noncommuting,
    )


@dataclass(frozen=True)
class QubitIndex:
    site: GroupElement
    layer: Layer
    channel: int

    def flat(self, q: int) -> int:
        if not 1 <= self.channel <= q:
            raise DimensionMismatchError(f"channel {self.channel} outside 1..{q}")
        return self.site.index * 2 * q + (0 if self.layer is Layer.PLUS else q) + self.channel - 1

    @classmethod
    def from_flat(cls, group: FiniteGroup, q: int, index: int) -> "QubitIndex":
        site, offset = divmod(index, 2 * q)
        layer = Layer.PLUS if offset < q else Layer.MINUS
        return cls(GroupElement(site, group), layer, offset % q + 1)


def _flat(sites: np.ndarray, layer: Layer, offset: int, q: int) -> np.ndarray:
    return sites * 2 * q + (0 if layer is Layer.PLUS else q) + offset


def exponent_dtype(modulus: int) -> np.dtype:
    """Smallest unsigned dtype holding exponents 0..modulus-1."""
    return np.min_scalar_type(max(modulus - 1, 0))


@dataclass(frozen=True, eq=False)
class PauliOperator:
    xpart: np.ndarray
    zpart: np.ndarray
    modulus: int = 2
    phase_exp: int = 0

    def __post_init__(self) -> None:
        dtype = exponent_dtype(self.modulus)
        xpart = (np.asarray(self.xpart, dtype=np.int64) % self.modulus).astype(dtype)
        zpart = (np.asarray(self.zpart, dtype=np.int64) % self.modulus).astype(dtype)
        if xpart.shape != zpart.shape or xpart.ndim != 1:
            raise DimensionMismatchError("x and z parts must be vectors of equal length")
        xpart.setflags(write=False)
        zpart.setflags(write=False)
        object.__setattr__(self, "xpart", xpart)
        object.__setattr__(self, "zpart", zpart)
        object.__setattr__(self, "phase_exp", int(self.phase_exp) % self.modulus)

    @classmethod
    def identity(cls, n: int, modulus: int = 2) -> "PauliOperator":
        return cls(np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64), modulus)

    @classmethod
    def from_exponents(
        cls, n: int, modulus: int = 2, x: dict[int, int] | None = None, z: dict[int, int] | None = None
    ) -> "PauliOperator":
        xpart = np.zeros(n, dtype=np.int64)
        zpart = np.zeros(n, dtype=np.int64)
        for index, exponent in (x or {}).items():
            xpart[index] += exponent
        for index, exponent in (z or {}).items():
            zpart[index] += exponent
        return cls(xpart, zpart, modulus)

    @property
    def n(self) -> int:
        return int(self.xpart.shape[0])

    def wide(self) -> tuple[np.ndarray, np.ndarray]:
        """int64 copies of (x, z) for arithmetic that can exceed the stored dtype."""
        return self.xpart.astype(np.int64), self.zpart.astype(np.int64)

    def support(self) -> np.ndarray:
        return np.flatnonzero((self.xpart != 0) | (self.zpart != 0))

    def is_identity(self) -> bool:
        return not self.xpart.any() and not self.zpart.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.phase_exp == other.phase_exp
            and bool(np.array_equal(self.xpart, other.xpart))
            and bool(np.array_equal(self.zpart, other.zpart))
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.phase_exp, self.xpart.tobytes(), self.zpart.tobytes()))


@dataclass(frozen=True)
class Generator:
    operator: PauliOperator
    site: int
    kind: GeneratorKind
    matrix_index: int


@dataclass(frozen=True)
class StabilizerSet:
    spec: AnySpec
    generators: tuple[Generator, ...] = field(default=())

    def __post_init__(self) -> None:
        expected = 2 * len(self.spec.matrices) * self.spec.group.order
        if len(self.generators) != expected:
            raise DimensionMismatchError(f"expected {expected} generators, found {len(self.generators)}")

    @property
    def n_qubits(self) -> int:
        return self.spec.n_qubits

    @property
    def modulus(self) -> int:
        return self.spec.modulus

    def operators(self) -> list[PauliOperator]:
        return [generator.operator for generator in self.generators]


def _check_pair(left: PauliOperator, right: PauliOperator) -> None:
    if left.n != right.n:
        raise DimensionMismatchError(f"operators act on {left.n} and {right.n} qudits")
    if left.modulus != right.modulus:
        raise ModulusMismatchError(f"operators are mod {left.modulus} and mod {right.modulus}")


def symplectic_product(left: PauliOperator, right: PauliOperator) -> int:
    _check_pair(left, right)
    left_x, left_z = left.wide()
    right_x, right_z = right.wide()
    value = int(left_x @ right_z) - int(left_z @ right_x)
    return value % left.modulus


def pauli_multiply(left: PauliOperator, right: PauliOperator) -> PauliOperator:
    """(c1, x1, z1)(c2, x2, z2) = (c1 + c2 - z1.x2, x1 + x2, z1 + z2)."""
    _check_pair(left, right)
    left_x, left_z = left.wide()
    right_x, right_z = right.wide()
    phase = left.phase_exp + right.phase_exp - int(left_z @ right_x)
    return PauliOperator(left_x + right_x, left_z + right_z, left.modulus, phase)


def pauli_power(operator: PauliOperator, exponent: int) -> PauliOperator:
    # P^d can carry a phase when x and z overlap, so the exponent is not reduced mod d.
    if exponent < 0:
        raise ValueError("Pauli powers must be non-negative")
    result = PauliOperator.identity(operator.n, operator.modulus)
    for _ in range(exponent):
        result = pauli_multiply(result, operator)
    return result


def channel_sets(spec: CodeSpec, matrix_index: int) -> tuple[list[AlgebraElement], list[AlgebraElement]]:
    """((chi A)_k, (chi^T B)_k) for k = 1..q."""
    chi = _matrix(spec, matrix_index)
    chi_t = transpose(chi)
    if isinstance(chi, ModularMatrix) or isinstance(chi_t, ModularMatrix):
        raise MatrixKindError("qubit codes take binary or algebra-valued matrices")
    return matrix_apply(chi, spec.A), matrix_apply(chi_t, spec.B)


def weighted_channel_sets(
    spec: QuditCodeSpec, matrix_index: int
) -> tuple[list[WeightedAlgebraElement], list[WeightedAlgebraElement]]:
    chi = _matrix(spec, matrix_index)
    chi_t = transpose(chi)
    if not isinstance(chi, ModularMatrix) or not isinstance(chi_t, ModularMatrix):
        raise MatrixKindError("qudit codes take modular matrices")
    return weighted_matrix_apply(chi, spec.A), weighted_matrix_apply(chi_t, spec.B)


def _matrix(spec: AnySpec, matrix_index: int) -> Matrix:
    if not 0 <= matrix_index < len(spec.matrices):
        raise IndexError(f"matrix index {matrix_index} outside 0..{len(spec.matrices) - 1}")
    return spec.matrices[matrix_index]


def _pair_from_sets(
    spec: CodeSpec, chi_a: Sequence[AlgebraElement], chi_b: Sequence[AlgebraElement], g: int
) -> tuple[PauliOperator, PauliOperator]:
    group, q = spec.group, spec.q
    n = spec.n_qubits
    zpart = np.zeros(n, dtype=np.int64)
    xpart = np.zeros(n, dtype=np.int64)
    for k in range(q):
        a_sites = chi_a[k].indices()
        b_sites = chi_b[k].indices()
        np.add.at(zpart, _flat(group.cayley[g, a_sites], Layer.PLUS, k, q), 1)
        np.add.at(zpart, _flat(group.cayley[b_sites, g], Layer.MINUS, k, q), 1)
        np.add.at(xpart, _flat(group.cayley[group.inverse[b_sites], g], Layer.PLUS, k, q), 1)
        np.add.at(xpart, _flat(group.cayley[g, group.inverse[a_sites]], Layer.MINUS, k, q), 1)
    empty = np.zeros(n, dtype=np.int64)
    return PauliOperator(empty, zpart), PauliOperator(xpart, empty)


def build_stabilizer_pair(spec: CodeSpec, matrix_index: int, g: GroupElement) -> tuple[PauliOperator, PauliOperator]:
    if g.group is not spec.group:
        raise GroupMismatchError("site belongs to a different group")
    chi_a, chi_b = channel_sets(spec, matrix_index)
    return _pair_from_sets(spec, chi_a, chi_b, g.index)


def build_all_stabilizers(spec: CodeSpec) -> StabilizerSet:
    generators: list[Generator] = []
    for matrix_index in range(len(spec.matrices)):
        chi_a, chi_b = channel_sets(spec, matrix_index)
        for site in range(spec.group.order):
            z_op, x_op = _pair_from_sets(spec, chi_a, chi_b, site)
            generators.append(Generator(z_op, site, GeneratorKind.Z, matrix_index))
            generators.append(Generator(x_op, site, GeneratorKind.X, matrix_index))
    log_event(RunComponent.STABILIZERS, RunAction.BUILT, generators=len(generators), qubits=spec.n_qubits)
    return StabilizerSet(spec, tuple(generators))


def build_qudit_stabilizers(spec: QuditCodeSpec) -> StabilizerSet:
    """U_g and V_g per matrix and site; U exponents land in zpart, V exponents in xpart."""
    group, q, d = spec.group, spec.q, spec.d
    n = spec.n_qubits
    generators: list[Generator] = []
    for matrix_index in range(len(spec.matrices)):
        chi_a, chi_b = weighted_channel_sets(spec, matrix_index)
        for g in range(group.order):
            u_z = np.zeros(n, dtype=np.int64)
            u_x = np.zeros(n, dtype=np.int64)
            v_z = np.zeros(n, dtype=np.int64)
            v_x = np.zeros(n, dtype=np.int64)
            for k in range(q):
                a_sites = np.flatnonzero(chi_a[k].coeffs)
                b_sites = np.flatnonzero(chi_b[k].coeffs)
                a_exp = chi_a[k].coeffs[a_sites]
                b_exp = chi_b[k].coeffs[b_sites]
                np.add.at(u_z, _flat(group.cayley[g, a_sites], Layer.PLUS, k, q), a_exp)
                np.add.at(u_x, _flat(group.cayley[b_sites, g], Layer.MINUS, k, q), b_exp)
                np.add.at(v_x, _flat(group.cayley[group.inverse[b_sites], g], Layer.PLUS, k, q), b_exp)
                np.add.at(v_z, _flat(group.cayley[g, group.inverse[a_sites]], Layer.MINUS, k, q), a_exp)
            generators.append(Generator(PauliOperator(u_x, u_z, d), g, GeneratorKind.U, matrix_index))
            generators.append(Generator(PauliOperator(v_x, v_z, d), g, GeneratorKind.V, matrix_index))
    log_event(RunComponent.STABILIZERS, RunAction.BUILT, generators=len(generators), qudits=n, d=d)
    return StabilizerSet(spec, tuple(generators))


def build_stabilizers(spec: AnySpec) -> StabilizerSet:
    if isinstance(spec, QuditCodeSpec):
        return build_qudit_stabilizers(spec)
    return build_all_stabilizers(spec)


def lower_layer_mask(spec: AnySpec) -> np.ndarray:
    q = spec.q
    return (np.arange(spec.n_qubits) % (2 * q)) >= q


def swap_lower_layer(stabilizers: StabilizerSet) -> StabilizerSet:
    """Exchanges x and z exponents on every - layer qudit (a Hadamard there at d=2)."""
    mask = lower_layer_mask(stabilizers.spec)
    swapped = []
    for generator in stabilizers.generators:
        operator = generator.operator
        xpart = np.where(mask, operator.zpart, operator.xpart)
        zpart = np.where(mask, operator.xpart, operator.zpart)
        replaced = PauliOperator(xpart, zpart, operator.modulus, operator.phase_exp)
        swapped.append(Generator(replaced, generator.site, generator.kind, generator.matrix_index))
    return StabilizerSet(stabilizers.spec, tuple(swapped))


def _generator_rows(stabilizers: StabilizerSet) -> Iterator[np.ndarray]:
    for generator in stabilizers.generators:
        yield np.concatenate([generator.operator.xpart, generator.operator.zpart])


def generator_matrix(stabilizers: StabilizerSet) -> np.ndarray:
    """m x 2N rows [x | z] in the operators' compact exponent dtype."""
    if not stabilizers.generators:
        return np.zeros((0, 2 * stabilizers.n_qubits), dtype=exponent_dtype(stabilizers.modulus))
    return np.stack(list(_generator_rows(stabilizers)))


def generator_bits(stabilizers: StabilizerSet) -> BitMatrix:
    """Packed GF(2) rows [x | z] (exponents mod 2)."""
    return BitMatrix.from_rows(_generator_rows(stabilizers), len(stabilizers.generators), 2 * stabilizers.n_qubits)


def indicator_vector(sets: Sequence[AlgebraElement], element: GroupElement) -> np.ndarray:
    return np.array([1 if element in entry else 0 for entry in sets], dtype=np.int64)


def overlap_count(
    spec: CodeSpec,
    i: int,
    j: int,
    g: GroupElement,
    h: GroupElement,
    u: GroupElement,
    v: GroupElement,
) -> int:
    """v_B^T C_j C_i u_A + v_B^T C_i C_j u_A over the integers, for a pair with gu = v^-1 h."""
    if (g * u).index != (v.inverse() * h).index:
        raise ValueError("overlap pairs must satisfy g*u == v^-1*h")
    c_i, c_j = _matrix(spec, i), _matrix(spec, j)
    if not isinstance(c_i, BinaryMatrix) or not isinstance(c_j, BinaryMatrix):
        raise MatrixKindError("overlap counting takes binary matrices")
    u_a = indicator_vector(spec.A, u)
    v_b = indicator_vector(spec.B, v)
    left = c_i.entries.astype(np.int64)
    right = c_j.entries.astype(np.int64)
    return int(v_b @ right @ left @ u_a + v_b @ left @ right @ u_a)
